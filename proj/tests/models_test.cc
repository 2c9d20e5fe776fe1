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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

namespace hopmc {
namespace {

// Values frozen from an independent 50-digit evaluation of the force laws.
constexpr double kFiberUnitArgument = 2.33940574221004365e-10;  // 2500 exp(-30)
constexpr double kFiberShortening1 = 3539.42048517520216;       // (0.9, -1)
constexpr double kFiberAtRest = 2276.94527339633175;           // (1.0, -1.172)
constexpr double kFiberLengthening = 1667.84728653691519;      // (0.95, 0.5)

TEST(FiberForceTest, IsometricOptimumIsMaxForce) {
  EXPECT_DOUBLE_EQ(fiber_force(0.9, 0.0, MusFibParams{}), 2500.0);
}

TEST(FiberForceTest, UnitForceLengthArgument) {
  const MusFibParams p;
  const double l = p.l_opt + p.l_opt * p.width;
  EXPECT_NEAR(fiber_force(l, 0.0, p), kFiberUnitArgument, 1e-12 * kFiberUnitArgument);
}

TEST(FiberForceTest, ReferenceValues) {
  const MusFibParams p;
  EXPECT_NEAR(fiber_force(0.9, -1.0, p), kFiberShortening1, 1e-9);
  EXPECT_NEAR(fiber_force(1.0, -1.172, p), kFiberAtRest, 1e-9);
  EXPECT_NEAR(fiber_force(0.95, 0.5, p), kFiberLengthening, 1e-9);
}

TEST(FiberForceTest, LowerBranchAtMaxVelocity) {
  // The eccentric term vanishes at ld = v_max, leaving N F_max.
  EXPECT_NEAR(fiber_force(0.9, -3.5, MusFibParams{}), 3750.0, 1e-9);
}

TEST(FiberForceTest, ContinuousAtZeroVelocity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> length(0.6, 1.2);
  const MusFibParams p;
  for (int i = 0; i < 100; ++i) {
    const double l = length(rng);
    const double at = fiber_force(l, 0.0, p);
    const double above = fiber_force(l, 1e-15, p);
    ASSERT_NEAR(above, at, 1e-9 * std::max(at, 1e-300)) << "l = " << l;
  }
}

TEST(FiberForceTest, NeverNegative) {
  const MusFibParams p;
  for (double v = -10.0; v <= 10.0; v += 0.01) ASSERT_GE(fiber_force(0.9, v, p), 0.0) << v;
}

TEST(LinearFiberForceTest, Examples) {
  const MusLinParams p;
  EXPECT_DOUBLE_EQ(linear_fiber_force(0.0, 1.0, p), 2500.0);
  EXPECT_DOUBLE_EQ(linear_fiber_force(4.0, 1.0, p), 0.0);
  EXPECT_DOUBLE_EQ(linear_fiber_force(-2.0, 0.5, p), 1875.0);
}

TEST(ActivationTest, Derivative) {
  EXPECT_DOUBLE_EQ(activation_derivative(0.5, 0.5, 0.01), 0.0);
  EXPECT_DOUBLE_EQ(activation_derivative(0.0, 1.0, 0.01), 100.0);
}

TEST(StimulationTest, Examples) {
  const MusFibParams p;
  EXPECT_DOUBLE_EQ(force_feedback_stimulation(0.0, p), 0.027);
  EXPECT_DOUBLE_EQ(force_feedback_stimulation(p.f_max, p), 1.0);
  EXPECT_NEAR(force_feedback_stimulation(0.1 * p.f_max, p), 0.267, 1e-15);
  EXPECT_DOUBLE_EQ(force_feedback_stimulation(0.0, MusLinParams{}), 0.19);
}

TEST(StimulationTest, StaysWithinBounds) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> force(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double f = force(rng);
    for (double u : {force_feedback_stimulation(f, MusFibParams{}),
                     force_feedback_stimulation(f, MusLinParams{})}) {
      ASSERT_GE(u, 0.001);
      ASSERT_LE(u, 1.0);
    }
  }
}

TEST(PdVoltageTest, Examples) {
  const DCMotParams p;
  EXPECT_DOUBLE_EQ(pd_voltage(1.0, 0.3, 1.0, 0.3, p), 0.0);
  EXPECT_DOUBLE_EQ(pd_voltage(0.99, 0.0, 1.0, 0.0, p), 48.0);
  EXPECT_NEAR(pd_voltage(0.999, 0.0, 1.0, 0.01, p), 10.0, 1e-9);
}

TEST(PdVoltageTest, StaysWithinBounds) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> x(-10, 10);
  const DCMotParams p;
  for (int i = 0; i < 1000; ++i) {
    const double u = pd_voltage(x(rng), x(rng), x(rng), x(rng), p);
    ASSERT_GE(u, -48.0);
    ASSERT_LE(u, 48.0);
  }
}

TEST(MotorTest, CurrentDerivative) {
  const DCMotParams p;
  EXPECT_DOUBLE_EQ(motor_current_derivative(0.0, 48.0, 0.0, p), 30000.0);
  EXPECT_DOUBLE_EQ(motor_current_derivative(1.0, 0.0, 0.0, p), -4493.75);
  EXPECT_NEAR(motor_current_derivative(12.0 / p.resistance, 12.0, 0.0, p), 0.0, 1e-9);
}

TEST(MotorTest, ScaledMass) {
  const ModelSpec spec = ModelSpec::dcmot();
  const auto& p = spec.dcmot_params();
  EXPECT_NEAR(p.body_mass, p.gear * p.t_nominal / p.f_max_ref * spec.common.mass,
              1e-6 * p.body_mass);
  EXPECT_NEAR(spec.body_mass(), 0.6784, 1e-12);
  EXPECT_NO_THROW(spec.validate());
}

TEST(MotorTest, MismatchedMassRejected) {
  ModelSpec spec = ModelSpec::dcmot();
  spec.dcmot_params().body_mass = 0.68;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(LegForceTest, ZeroInFlight) {
  for (auto kind : {ModelKind::kMusFib, ModelKind::kMusLin, ModelKind::kDCMot})
    EXPECT_EQ(leg_force(ModelSpec::defaults(kind), Phase::kFlight, 1.05, -0.5, 0.8), 0.0);
}

TEST(AccelerationTest, Examples) {
  const ModelSpec fib = ModelSpec::musfib();
  EXPECT_DOUBLE_EQ(vertical_acceleration(fib.common, 80.0, Phase::kFlight, 0.0), -9.81);
  const double f = leg_force(fib, Phase::kStance, 0.9, 0.0, 1.0);
  EXPECT_NEAR(vertical_acceleration(fib.common, 80.0, Phase::kStance, f), 21.44, 1e-12);
  const ModelSpec dc = ModelSpec::dcmot();
  EXPECT_DOUBLE_EQ(leg_force(dc, Phase::kStance, 0.95, 0.0, 0.0), 0.0);
}

TEST(ModelKindTest, ParseIsCaseInsensitive) {
  EXPECT_EQ(parse_model_kind("MusFib"), ModelKind::kMusFib);
  EXPECT_EQ(parse_model_kind("DCMOT"), ModelKind::kDCMot);
  EXPECT_EQ(model_name(ModelKind::kMusLin), "muslin");
  EXPECT_THROW(parse_model_kind("spring"), std::invalid_argument);
}

TEST(StanceReferenceTest, HermiteReproducesCubic) {
  // y = t^3 sampled with exact derivatives; Hermite on (y, yd) is exact.
  StanceReference r;
  r.t_first = -0.5e-3;
  r.dt = 1e-3;
  for (int i = 0; i < 20; ++i) {
    const double t = r.t_first + i * r.dt;
    r.y.push_back(t * t * t);
    r.yd.push_back(3 * t * t);
    r.ydd.push_back(6 * t);
  }
  for (double t = 0.0; t < 0.018; t += 0.00037) {
    const auto s = r.at(t);
    EXPECT_NEAR(s.y, t * t * t, 1e-15);
    EXPECT_NEAR(s.yd, 3 * t * t, 1e-13);
  }
  EXPECT_DOUBLE_EQ(r.at(1.0).y, r.y.back());
  EXPECT_DOUBLE_EQ(r.at(-1.0).yd, r.yd.front());
}

TEST(ParamsTest, InvalidValuesRejected) {
  ModelSpec s = ModelSpec::musfib();
  std::get<MusFibParams>(s.params).tau = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  ModelSpec l = ModelSpec::muslin();
  std::get<MusLinParams>(l.params).mu = -1.0;
  EXPECT_THROW(l.validate(), std::invalid_argument);
  ModelSpec c = ModelSpec::musfib();
  c.common.mass = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace hopmc
