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

#include "hopmc/models.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hopmc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Cubic Hermite basis on [0, h] evaluated at s in [0, 1].
double hermite(double p0, double m0, double p1, double m1, double s, double h) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * m0 +
         (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * h * m1;
}

}  // namespace

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMusFib: return "musfib";
    case ModelKind::kMusLin: return "muslin";
    case ModelKind::kDCMot: return "dcmot";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "musfib") return ModelKind::kMusFib;
  if (lower == "muslin") return ModelKind::kMusLin;
  if (lower == "dcmot") return ModelKind::kDCMot;
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "' (expected musfib, muslin or dcmot)");
}

void HopperCommon::validate() const {
  require(mass > 0, "mass must be positive");
  require(gravity > 0, "gravity magnitude must be positive");
  require(rest_length > 0, "rest length must be positive");
}

void MusFibParams::validate() const {
  require(f_max > 0, "musfib: f_max must be positive");
  require(l_opt > 0 && width > 0, "musfib: l_opt and width must be positive");
  require(tau > 0, "musfib: tau must be positive");
  require(delay >= 0, "musfib: delay must be non-negative");
  require(v_max < 0, "musfib: v_max must be negative");
  require(u_min <= u_max, "musfib: empty stimulation bounds");
}

void MusLinParams::validate() const {
  require(f_max > 0, "muslin: f_max must be positive");
  require(mu > 0, "muslin: mu must be positive");
  require(tau > 0, "muslin: tau must be positive");
  require(delay >= 0, "muslin: delay must be non-negative");
  require(u_min <= u_max, "muslin: empty stimulation bounds");
}

double StanceReference::duration() const {
  return y.empty() ? 0.0 : t_first + dt * static_cast<double>(y.size() - 1);
}

StanceReference::Sample StanceReference::at(double t) const {
  if (y.empty()) return {0.0, 0.0};
  const double x = (t - t_first) / dt;
  if (x <= 0) return {y.front(), yd.front()};
  const auto last = y.size() - 1;
  if (x >= static_cast<double>(last)) return {y.back(), yd.back()};
  const auto i = static_cast<std::size_t>(x);
  const double s = x - static_cast<double>(i);
  return {hermite(y[i], yd[i], y[i + 1], yd[i + 1], s, dt),
          hermite(yd[i], ydd[i], yd[i + 1], ydd[i + 1], s, dt)};
}

void StanceReference::validate() const {
  require(dt > 0, "reference: node spacing must be positive");
  require(y.size() == yd.size() && y.size() == ydd.size(),
          "reference: channel lengths differ");
}

void DCMotParams::validate(const HopperCommon& common) const {
  require(inductance > 0, "dcmot: inductance must be positive");
  require(resistance > 0, "dcmot: resistance must be positive");
  require(gear > 0, "dcmot: gear ratio must be positive");
  require(u_min <= u_max, "dcmot: empty voltage bounds");
  const double expected = scaled_mass(common.mass);
  if (!(std::abs(body_mass - expected) <= 1e-6 * std::abs(expected))) {
    throw std::invalid_argument("dcmot: body mass " + std::to_string(body_mass) +
                                " kg does not match gear*T_nominal/F_max*m = " +
                                std::to_string(expected) + " kg");
  }
  reference.validate();
}

ModelSpec ModelSpec::musfib() { return {ModelKind::kMusFib, {}, MusFibParams{}}; }
ModelSpec ModelSpec::muslin() { return {ModelKind::kMusLin, {}, MusLinParams{}}; }
ModelSpec ModelSpec::dcmot() { return {ModelKind::kDCMot, {}, DCMotParams{}}; }

ModelSpec ModelSpec::defaults(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMusFib: return musfib();
    case ModelKind::kMusLin: return muslin();
    case ModelKind::kDCMot: return dcmot();
  }
  throw std::invalid_argument("unknown model kind");
}

double ModelSpec::body_mass() const {
  return kind == ModelKind::kDCMot ? dcmot_params().body_mass : common.mass;
}

void ModelSpec::validate() const {
  common.validate();
  switch (kind) {
    case ModelKind::kMusFib: musfib_params().validate(); break;
    case ModelKind::kMusLin: muslin_params().validate(); break;
    case ModelKind::kDCMot: dcmot_params().validate(common); break;
  }
}

double fiber_force(double l_m, double ld_m, const MusFibParams& p) {
  const double x = std::abs((l_m - p.l_opt) / (p.l_opt * p.width));
  const double force_length = std::exp(-p.shape * x * x * x);
  double force_velocity;
  if (ld_m > 0) {
    force_velocity = (p.v_max + ld_m) / (p.v_max - p.k_curv * ld_m);
  } else {
    force_velocity = p.n_ecc + (p.n_ecc - 1) * (p.v_max - ld_m) /
                                   (-7.56 * p.k_curv * ld_m - p.v_max);
  }
  return std::max(0.0, p.f_max * force_length * force_velocity);
}

double linear_fiber_force(double ld_m, double activation, const MusLinParams& p) {
  return activation * p.f_max * (1.0 - p.mu * ld_m);
}

double activation_derivative(double activation, double stimulation, double tau) {
  return (stimulation - activation) / tau;
}

double force_feedback_stimulation(double delayed_force, const MusFibParams& p) {
  return std::clamp(p.gain * delayed_force + p.u0, p.u_min, p.u_max);
}

double force_feedback_stimulation(double delayed_force, const MusLinParams& p) {
  return std::clamp(p.gain * delayed_force + p.u0, p.u_min, p.u_max);
}

double pd_voltage(double y, double yd, double y_rec, double yd_rec, const DCMotParams& p) {
  return std::clamp(p.k_p * (y_rec - y) + p.k_d * (yd_rec - yd), p.u_min, p.u_max);
}

double motor_current_derivative(double current, double voltage, double yd,
                                const DCMotParams& p) {
  return (voltage - p.k_t * p.gear * yd - p.resistance * current) / p.inductance;
}

double leg_force(const ModelSpec& spec, Phase phase, double y, double yd, double aux) {
  if (phase == Phase::kFlight) return 0.0;
  switch (spec.kind) {
    case ModelKind::kMusFib: return aux * fiber_force(y, yd, spec.musfib_params());
    case ModelKind::kMusLin: return linear_fiber_force(yd, aux, spec.muslin_params());
    case ModelKind::kDCMot: {
      const auto& p = spec.dcmot_params();
      return p.gear * p.k_t * aux;
    }
  }
  return 0.0;
}

double vertical_acceleration(const HopperCommon& common, double mass, Phase phase,
                             double force) {
  return phase == Phase::kStance ? -common.gravity + force / mass : -common.gravity;
}

}  // namespace hopmc
