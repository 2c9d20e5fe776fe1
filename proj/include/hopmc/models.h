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

// Leg-force laws, controllers and parameter sets of the three one-dimensional
// hopping models:
//
//   MusFib  non-linear Hill-type muscle fibres, force-feedback reflex
//   MusLin  muscle with linear force-velocity relation, same reflex
//   DCMot   geared DC motor, PD tracking of a recorded stance trajectory
//
// All models share the point-mass equation of motion
//
//   m y'' = -m g + F_L     if y <= l0   (stance)
//   m y'' = -m g           if y >  l0   (flight)
//
// with g > 0 acting in negative y direction.

#ifndef HOPMC_MODELS_H_
#define HOPMC_MODELS_H_

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hopmc {

enum class ModelKind { kMusFib, kMusLin, kDCMot };

std::string_view model_name(ModelKind kind);
// Accepts "musfib", "muslin", "dcmot" (case-insensitive).
ModelKind parse_model_kind(std::string_view name);

enum class Phase { kFlight, kStance };

struct HopperCommon {
  double mass = 80.0;              // [kg]
  double gravity = 9.81;           // [m/s^2], magnitude
  double rest_length = 1.0;        // l0 [m]

  void validate() const;
};

struct MusFibParams {
  double f_max = 2500.0;           // [N]
  double l_opt = 0.9;              // [m]
  double width = 0.45;             // force-length width w [m]
  double shape = 30.0;             // force-length exponent factor c
  double v_max = -3.5;             // max contraction velocity [m/s]
  double k_curv = 1.5;             // force-velocity curvature K
  double n_ecc = 1.5;              // eccentric force enhancement N
  double tau = 0.010;              // activation time constant [s]
  double delay = 0.015;            // reflex transport delay [s]
  double gain = 2.4 / 2500.0;      // feedback gain G [1/N]
  double u0 = 0.027;               // stimulation at touch down
  double u_min = 0.001;
  double u_max = 1.0;

  void validate() const;
};

struct MusLinParams {
  double f_max = 2500.0;           // [N]
  double mu = 0.25;                // force-velocity slope [s/m]
  double tau = 0.010;              // [s]
  double delay = 0.015;            // [s]
  double gain = 0.8 / 2500.0;      // [1/N]
  double u0 = 0.19;
  double u_min = 0.001;
  double u_max = 1.0;

  void validate() const;
};

// Stance trajectory y_rec(t), y_rec'(t) sampled on a uniform grid. Time is
// measured from touch down; the first node may lie slightly before it.
struct StanceReference {
  double t_first = 0.0;            // time of node 0 relative to touch down [s]
  double dt = 1e-3;                // node spacing [s]
  std::vector<double> y;
  std::vector<double> yd;
  std::vector<double> ydd;

  bool empty() const { return y.empty(); }
  double duration() const;

  struct Sample {
    double y;
    double yd;
  };
  // Cubic Hermite interpolation; y uses (y, yd) and yd uses (yd, ydd) as
  // node data. Times outside the node range hold the boundary node.
  Sample at(double t_since_touchdown) const;

  void validate() const;
};

struct DCMotParams {
  double k_t = 0.126;              // motor constant [N m/A]
  double gear = 100.0;             // gear ratio
  double resistance = 7.19;        // [Ohm]
  double inductance = 0.0016;      // [H]
  double u_min = -48.0;            // armature voltage bounds [V]
  double u_max = 48.0;
  double k_p = 5000.0;             // [V/m]
  double k_d = 500.0;              // [V s/m]
  double t_nominal = 0.212;        // [N m]
  double f_max_ref = 2500.0;       // force scale of the muscle hopper [N]
  // Scaled body mass gear * t_nominal / f_max_ref * m; 0.6784 kg by default.
  double body_mass = 100.0 * 0.212 / 2500.0 * 80.0;
  StanceReference reference;

  // Body mass implied by the torque scaling for a hopper of mass `m`.
  double scaled_mass(double m) const { return gear * t_nominal / f_max_ref * m; }

  // Checks the electrical parameters and that body_mass matches
  // scaled_mass(common.mass) to 1e-6 relative. The reference may be empty.
  void validate(const HopperCommon& common) const;
};

struct ModelSpec {
  ModelKind kind = ModelKind::kMusFib;
  HopperCommon common;
  std::variant<MusFibParams, MusLinParams, DCMotParams> params;

  static ModelSpec musfib();
  static ModelSpec muslin();
  static ModelSpec dcmot();
  static ModelSpec defaults(ModelKind kind);

  const MusFibParams& musfib_params() const { return std::get<MusFibParams>(params); }
  const MusLinParams& muslin_params() const { return std::get<MusLinParams>(params); }
  const DCMotParams& dcmot_params() const { return std::get<DCMotParams>(params); }
  DCMotParams& dcmot_params() { return std::get<DCMotParams>(params); }

  // Mass that enters the equation of motion.
  double body_mass() const;
  bool is_muscle() const { return kind != ModelKind::kDCMot; }

  void validate() const;
};

// Force-length-velocity relation of the muscle fibres. Returns the isometric
// maximum force scaled by both relations; clipped at zero for contraction
// velocities beyond -v_max where the concentric branch would turn negative.
double fiber_force(double l_m, double ld_m, const MusFibParams& p);

// a * F_max * (1 - mu * ld_m).
double linear_fiber_force(double ld_m, double activation, const MusLinParams& p);

// (u - a) / tau
double activation_derivative(double activation, double stimulation, double tau);

// clamp(G * F(t - delay) + u0, u_min, u_max)
double force_feedback_stimulation(double delayed_force, const MusFibParams& p);
double force_feedback_stimulation(double delayed_force, const MusLinParams& p);

// clamp(K_P (y_rec - y) + K_D (yd_rec - yd), u_min, u_max)
double pd_voltage(double y, double yd, double y_rec, double yd_rec, const DCMotParams& p);

// (u - k_T gear yd - R I) / L
double motor_current_derivative(double current, double voltage, double yd, const DCMotParams& p);

// Leg force of the given model for the continuous state. Zero in flight.
// MusFib/MusLin state = (y, yd, a); DCMot state = (y, yd, I).
double leg_force(const ModelSpec& spec, Phase phase, double y, double yd, double aux);

// y'' of the point mass for a given leg force.
double vertical_acceleration(const HopperCommon& common, double mass, Phase phase,
                             double leg_force);

}  // namespace hopmc

#endif  // HOPMC_MODELS_H_
