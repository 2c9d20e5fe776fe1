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

#ifndef HOPMC_HOPPER_H_
#define HOPMC_HOPPER_H_

#include <array>
#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "hopmc/integrator.h"
#include "hopmc/models.h"
#include "hopmc/trace.h"

namespace hopmc {

// Continuous state: (y, yd, aux) with aux = muscle activation or motor
// winding current.
struct ContinuousState {
  double y = 1.070;
  double yd = 0.0;
  double aux = 0.0;
};

// Apex start: y = 1.070 m at rest, activation u0 (muscles), I = 0 (motor).
ContinuousState initial_state(const ModelSpec& spec);

// Everything a sample needs besides the state itself.
struct Observation {
  double ydd = 0.0;
  double leg_force = 0.0;
  // Leg force as it reaches the reflex, i.e. delayed by the neural
  // transport time. Zero for the motor model.
  double sensed_force = 0.0;
  double action = 0.0;  // stimulation u or voltage u_DC
  Phase phase = Phase::kFlight;
};

struct ContactEvent {
  double t = 0.0;
  double y = 0.0;
  Phase new_phase = Phase::kFlight;
};

// One of the three hopping models as a HybridSystem. The contact mode is
// discrete state flipped at localized y = l0 crossings. The muscle reflex
// reads the leg force at t - delay from the continuous extensions of past
// accepted steps; every switch schedules a breakpoint one delay later, where
// the delayed force jumps.
class HopperSystem {
 public:
  explicit HopperSystem(ModelSpec spec, Phase initial_phase = Phase::kFlight);

  // HybridSystem interface.
  std::size_t dimension() const { return 3; }
  void begin_step(double t0, double h);
  void derivative(double t, std::span<const double> x, std::span<double> dx) const;
  double switching_function(double t, std::span<const double> x) const;
  void on_switch(double t, std::span<double> x);
  void on_accepted_step(const DenseStep& step);
  bool project(std::span<double> x) const;
  double next_breakpoint(double t) const;

  // Observation at time t for a state inside the most recent accepted step.
  Observation observe(double t, std::span<const double> x) const;

  Phase phase() const { return phase_; }
  const ModelSpec& spec() const { return spec_; }
  const std::vector<ContactEvent>& events() const { return events_; }

  // Leg force at time `t_delayed` reconstructed from the history (0 before
  // t = 0). Exposed for tests.
  double delayed_leg_force(double t_delayed) const;

 private:
  struct HistoryEntry {
    DenseStep step;
    Phase phase;
  };

  double delay() const;
  double stimulation(double t) const;
  double reflex(double sensed_force) const;
  double leg_force_at(Phase phase, std::span<const double> x) const;

  ModelSpec spec_;
  double mass_;
  Phase phase_;
  // Phase of the history epoch that the current step's delayed window reads.
  Phase window_phase_ = Phase::kFlight;
  double touchdown_time_ = 0.0;
  std::deque<HistoryEntry> history_;
  std::deque<double> breakpoints_;
  std::vector<ContactEvent> events_;
  double t_last_ = 0.0;
};

struct SimulationResult {
  Trace trace;
  std::vector<ContactEvent> events;
  IntegrationStats stats;
  IntegratorConfig config;
};

// Runs one model from the apex start and samples it on the uniform grid.
// DCMot requires a non-empty reference trajectory in its parameters.
// Throws NumericalError when integration fails.
SimulationResult simulate(const ModelSpec& spec, const IntegratorConfig& cfg = {},
                          const ContinuousState* start = nullptr);

// Maximum of y over samples with t >= t_from.
double max_height(const Trace& trace, double t_from = 0.0);

}  // namespace hopmc

#endif  // HOPMC_HOPPER_H_
