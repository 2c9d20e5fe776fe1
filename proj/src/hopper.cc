// Copyright 2026 The hopmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hopmc/hopper.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace hopmc {

namespace {

// Slack for matching times that should coincide up to rounding.
constexpr double kTimeSlack = 1e-12;

}  // namespace

ContinuousState initial_state(const ModelSpec& spec) {
  ContinuousState s;
  s.y = 1.070;
  s.yd = 0.0;
  switch (spec.kind) {
    case ModelKind::kMusFib: s.aux = spec.musfib_params().u0; break;
    case ModelKind::kMusLin: s.aux = spec.muslin_params().u0; break;
    case ModelKind::kDCMot: s.aux = 0.0; break;
  }
  return s;
}

HopperSystem::HopperSystem(ModelSpec spec, Phase initial_phase)
    : spec_(std::move(spec)), mass_(spec_.body_mass()), phase_(initial_phase) {
  spec_.validate();
}

double HopperSystem::delay() const {
  switch (spec_.kind) {
    case ModelKind::kMusFib: return spec_.musfib_params().delay;
    case ModelKind::kMusLin: return spec_.muslin_params().delay;
    case ModelKind::kDCMot: return 0.0;
  }
  return 0.0;
}

void HopperSystem::begin_step(double t0, double h) {
  if (!spec_.is_muscle()) return;
  const double mid = t0 + 0.5 * h - delay();
  window_phase_ = Phase::kFlight;
  if (mid < 0 || history_.empty()) return;
  auto it = std::upper_bound(history_.begin(), history_.end(), mid,
                             [](double v, const HistoryEntry& e) { return v < e.step.t0(); });
  if (it != history_.begin()) --it;
  window_phase_ = it->phase;
}

double HopperSystem::leg_force_at(Phase phase, std::span<const double> x) const {
  return leg_force(spec_, phase, x[0], x[1], x[2]);
}

double HopperSystem::delayed_leg_force(double td) const {
  if (td < 0 || history_.empty()) return 0.0;
  auto it = std::upper_bound(history_.begin(), history_.end(), td,
                             [](double v, const HistoryEntry& e) { return v < e.step.t0(); });
  if (it != history_.begin()) --it;
  const HistoryEntry* entry = &*it;

  // At a switch boundary both neighbours cover td; take the one whose phase
  // matches the epoch the current step reads from.
  if (entry->phase != window_phase_) {
    auto covers = [td](const HistoryEntry& e) {
      return td >= e.step.t0() - kTimeSlack && td <= e.step.t_end() + kTimeSlack;
    };
    if (it != history_.begin() && std::prev(it)->phase == window_phase_ && covers(*std::prev(it))) {
      entry = &*std::prev(it);
    } else if (std::next(it) != history_.end() && std::next(it)->phase == window_phase_ &&
               covers(*std::next(it))) {
      entry = &*std::next(it);
    }
  }
  std::array<double, 3> x{};
  const double tc = std::clamp(td, entry->step.t0(), entry->step.t_end());
  entry->step.evaluate(tc, x);
  return leg_force_at(entry->phase, x);
}

double HopperSystem::stimulation(double t) const {
  return reflex(delayed_leg_force(t - delay()));
}

double HopperSystem::reflex(double f) const {
  if (spec_.kind == ModelKind::kMusFib) return force_feedback_stimulation(f, spec_.musfib_params());
  return force_feedback_stimulation(f, spec_.muslin_params());
}

void HopperSystem::derivative(double t, std::span<const double> x, std::span<double> dx) const {
  dx[0] = x[1];
  if (spec_.is_muscle()) {
    const double tau =
        spec_.kind == ModelKind::kMusFib ? spec_.musfib_params().tau : spec_.muslin_params().tau;
    dx[2] = activation_derivative(x[2], stimulation(t), tau);
  } else if (phase_ == Phase::kStance) {
    const auto& p = spec_.dcmot_params();
    const auto ref = p.reference.at(t - touchdown_time_);
    const double u = pd_voltage(x[0], x[1], ref.y, ref.yd, p);
    dx[2] = motor_current_derivative(x[2], u, x[1], p);
  } else {
    dx[2] = 0.0;  // current held at zero in flight
  }
  dx[1] = vertical_acceleration(spec_.common, mass_, phase_, leg_force_at(phase_, x));
}

double HopperSystem::switching_function(double, std::span<const double> x) const {
  const double g = x[0] - spec_.common.rest_length;
  return phase_ == Phase::kFlight ? g : -g;
}

void HopperSystem::on_switch(double t, std::span<double> x) {
  phase_ = phase_ == Phase::kFlight ? Phase::kStance : Phase::kFlight;
  events_.push_back({t, x[0], phase_});
  if (spec_.is_muscle()) {
    if (delay() > 0) breakpoints_.push_back(t + delay());
  } else if (phase_ == Phase::kStance) {
    touchdown_time_ = t;
  } else {
    x[2] = 0.0;
  }
}

void HopperSystem::on_accepted_step(const DenseStep& step) {
  t_last_ = step.t_end();
  while (!breakpoints_.empty() && breakpoints_.front() <= t_last_ + kTimeSlack)
    breakpoints_.pop_front();
  if (!spec_.is_muscle()) return;
  history_.push_back({step, phase_});
  const double keep_from = step.t0() - delay() - 1e-9;
  while (history_.size() > 1 && history_.front().step.t_end() < keep_from) history_.pop_front();
}

bool HopperSystem::project(std::span<double> x) const {
  if (!spec_.is_muscle()) return false;
  const double a = std::clamp(x[2], 0.0, 1.0);
  if (a == x[2]) return false;
  x[2] = a;
  return true;
}

double HopperSystem::next_breakpoint(double t) const {
  for (double b : breakpoints_)
    if (b > t + kTimeSlack) return b;
  return std::numeric_limits<double>::infinity();
}

Observation HopperSystem::observe(double t, std::span<const double> x) const {
  Observation obs;
  obs.phase = phase_;
  obs.leg_force = leg_force_at(phase_, x);
  obs.ydd = vertical_acceleration(spec_.common, mass_, phase_, obs.leg_force);
  if (spec_.is_muscle()) {
    obs.sensed_force = delayed_leg_force(t - delay());
    obs.action = reflex(obs.sensed_force);
  } else if (phase_ == Phase::kStance) {
    const auto& p = spec_.dcmot_params();
    const auto ref = p.reference.at(t - touchdown_time_);
    obs.action = pd_voltage(x[0], x[1], ref.y, ref.yd, p);
  }
  return obs;
}

SimulationResult simulate(const ModelSpec& spec, const IntegratorConfig& cfg,
                          const ContinuousState* start) {
  spec.validate();
  if (spec.kind == ModelKind::kDCMot && spec.dcmot_params().reference.empty())
    throw std::invalid_argument("dcmot needs a stance reference trajectory");

  SimulationResult result;
  result.config = cfg;
  if (spec.is_muscle()) {
    const double d = spec.kind == ModelKind::kMusFib ? spec.musfib_params().delay
                                                     : spec.muslin_params().delay;
    // Stages must only read delayed values from completed steps.
    if (d > 0) result.config.max_step = std::min(cfg.max_step, d);
  }

  const ContinuousState s0 = start ? *start : initial_state(spec);
  const Phase phase0 = s0.y > spec.common.rest_length ? Phase::kFlight : Phase::kStance;
  HopperSystem system(spec, phase0);

  Trace& trace = result.trace;
  trace.kind = spec.kind;
  trace.sensor_names = sensor_channels(spec.kind);
  trace.sensors.resize(trace.sensor_names.size());
  if (spec.kind == ModelKind::kDCMot) {
    trace.action_min = spec.dcmot_params().u_min;
    trace.action_max = spec.dcmot_params().u_max;
  }
  trace.reserve(result.config.sample_count());

  DormandPrince<HopperSystem> solver(system, result.config);
  const std::array<double, 3> x0{s0.y, s0.yd, s0.aux};
  result.stats = solver.run(x0, [&](double t, std::span<const double> x) {
    const Observation obs = system.observe(t, x);
    trace.t.push_back(t);
    trace.y.push_back(x[0]);
    trace.yd.push_back(x[1]);
    trace.ydd.push_back(obs.ydd);
    if (spec.kind == ModelKind::kDCMot) {
      trace.sensors[0].push_back(x[0]);
      trace.sensors[1].push_back(x[1]);
    } else {
      trace.sensors[0].push_back(obs.sensed_force);
    }
    trace.action.push_back(obs.action);
    trace.contact.push_back(obs.phase == Phase::kStance ? 1 : 0);
  });
  result.events = system.events();
  trace.validate();
  return result;
}

double max_height(const Trace& trace, double t_from) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (trace.t[i] >= t_from - kTimeSlack) best = std::max(best, trace.y[i]);
  return best;
}

}  // namespace hopmc
