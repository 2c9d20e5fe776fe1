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

#include "hopmc/measures.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

namespace hopmc {
namespace {

DiscreteTrace make(std::vector<Symbol> w_next, std::vector<Symbol> w, std::vector<Symbol> s,
                   std::vector<Symbol> a) {
  DiscreteTrace d;
  d.w_next = std::move(w_next);
  d.w = std::move(w);
  d.s = std::move(s);
  d.a = std::move(a);
  return d;
}

// A closed symbolic loop: w' = g(w), s = h(w), a = f(s).
DiscreteTrace deterministic_loop(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Symbol> d(0, 5);
  std::vector<Symbol> g(6), h(6), f(6);
  for (Symbol i = 0; i < 6; ++i) {
    g[i] = d(rng);
    h[i] = d(rng) % 3;
    f[i] = d(rng) % 2;
  }
  std::vector<Symbol> world{d(rng)};
  while (world.size() < n + 1) world.push_back(g[world.back()] ^ (world.size() % 2));
  std::vector<Symbol> wn, w, s, a;
  for (std::size_t t = 0; t < n; ++t) {
    w.push_back(world[t]);
    wn.push_back(world[t + 1]);
    s.push_back(h[world[t]]);
    a.push_back(f[s.back()]);
  }
  // Fold the parity into the state so that w' is a function of w.
  for (std::size_t t = 0; t < n; ++t) {
    w[t] = w[t] * 2 + t % 2;
    wn[t] = wn[t] * 2 + (t + 1) % 2;
  }
  return make(wn, w, s, a);
}

TEST(MeasuresTest, ActionDeterminesNextWorld) {
  // w' = a: nothing is left for the world to contribute.
  const auto d = make({0, 1, 1, 0, 1, 0}, {0, 0, 1, 1, 0, 1}, {0, 1, 1, 0, 1, 0},
                      {0, 1, 1, 0, 1, 0});
  EXPECT_NEAR(mc_w(d), 0.0, 1e-15);
}

TEST(MeasuresTest, XorWorldMatchesEnumeration) {
  // w' = w xor a with w, a independent and uniform: I(W';W|A) = 1.
  const auto d = make({0, 1, 1, 0}, {0, 0, 1, 1}, {0, 0, 0, 0}, {0, 1, 0, 1});
  EXPECT_NEAR(mc_w(d), 1.0, 1e-15);
  // I(W';W) = 0 and I(A;S) = 0.
  EXPECT_NEAR(mc_mi(d), 0.0, 1e-15);
}

TEST(MeasuresTest, ConstantControllerReducesToWorldInformation) {
  const auto d = make({1, 2, 3, 0, 1, 2, 3, 0}, {0, 1, 2, 3, 0, 1, 2, 3}, std::vector<Symbol>(8, 4),
                      std::vector<Symbol>(8, 9));
  // w' = w + 1 mod 4: two bits about w', all of it carried by w.
  EXPECT_NEAR(mc_w(d), 2.0, 1e-15);
  EXPECT_NEAR(mc_mi(d), 2.0, 1e-15);
  const auto r = compute_measures(d);
  EXPECT_NEAR(r.h_wnext, 2.0, 1e-15);
  EXPECT_NEAR(r.h_a, 0.0, 1e-15);
  EXPECT_NEAR(r.residual, 0.0, 1e-12);
}

TEST(MeasuresTest, ReactiveControllerSubtractsSensorInformation) {
  // s = w, a = s: I(W';W) = 2, I(A;S) = H(A) = 2.
  const std::vector<Symbol> w{0, 1, 2, 3, 0, 1, 2, 3};
  const auto d = make({1, 2, 3, 0, 1, 2, 3, 0}, w, w, w);
  EXPECT_NEAR(mc_mi(d), 0.0, 1e-15);
  EXPECT_NEAR(mc_w(d), 0.0, 1e-15);
}

TEST(MeasuresTest, ConstantTraceGivesZero) {
  const std::vector<Symbol> c(10, 3);
  const auto d = make(c, c, c, c);
  const auto r = compute_measures(d);
  EXPECT_EQ(r.mc_w, 0.0);
  EXPECT_EQ(r.mc_mi, 0.0);
  for (double v : mc_w_state(d).values) EXPECT_EQ(v, 0.0);
  for (double v : mc_mi_state(d).values) EXPECT_EQ(v, 0.0);
}

TEST(MeasuresTest, StateSeriesAverageToAggregates) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<Symbol> sym(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 20 + 10 * trial;
    std::vector<Symbol> wn(n), w(n), s(n), a(n);
    for (std::size_t t = 0; t < n; ++t) {
      w[t] = sym(rng);
      s[t] = sym(rng);
      a[t] = (s[t] + sym(rng) / 3) % 4;
      wn[t] = (w[t] + a[t] + sym(rng) / 2) % 4;
    }
    const auto d = make(wn, w, s, a);
    const auto r = compute_measures(d);
    ASSERT_NEAR(mc_w_state(d).mean(), r.mc_w, 1e-9);
    ASSERT_NEAR(mc_mi_state(d).mean(), r.mc_mi, 1e-9);
    ASSERT_NEAR(mc_w(d), r.mc_w, 1e-15);
    ASSERT_NEAR(mc_mi(d), r.mc_mi, 1e-15);
    ASSERT_EQ(mc_w_state(d).values.size(), n);
    ASSERT_GE(r.mc_w, -1e-12);
  }
}

TEST(MeasuresTest, DeterministicLoopIdentities) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto d = deterministic_loop(500, seed);
    const auto diag = deterministic_diagnostics(d);
    ASSERT_NEAR(diag.i_wnext_a_given_w, 0.0, 1e-12) << seed;
    ASSERT_NEAR(diag.residual, 0.0, 1e-12) << seed;
  }
}

TEST(MeasuresTest, EmptyOrRaggedInputIsError) {
  EXPECT_THROW(mc_w(DiscreteTrace{}), std::invalid_argument);
  EXPECT_THROW(mc_mi_state(DiscreteTrace{}), std::invalid_argument);
  EXPECT_THROW(compute_measures(make({0, 1}, {0}, {0}, {0})), std::invalid_argument);
}

TEST(MovingAverageTest, CentredWindowShrinksAtEdges) {
  const std::vector<double> x{0, 0, 5, 0, 0};
  const auto y = moving_average(x, 5);
  const std::vector<double> expected{5.0 / 3, 5.0 / 4, 1.0, 5.0 / 4, 5.0 / 3};
  ASSERT_EQ(y.size(), expected.size());
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_DOUBLE_EQ(y[i], expected[i]);
  EXPECT_EQ(moving_average(x, 1), x);
  const std::vector<double> three = moving_average(x, 3);
  EXPECT_DOUBLE_EQ(three[0], 0.0);
  EXPECT_DOUBLE_EQ(three[1], 5.0 / 3);
}

TEST(MovingAverageTest, PreservesConstantsAndRejectsEvenBlocks) {
  const std::vector<double> c(7, 2.5);
  for (double v : moving_average(c, 5)) EXPECT_DOUBLE_EQ(v, 2.5);
  EXPECT_THROW(moving_average(c, 4), std::invalid_argument);
  EXPECT_THROW(moving_average(c, 0), std::invalid_argument);
  EXPECT_TRUE(moving_average(std::vector<double>{}, 5).empty());
}

}  // namespace
}  // namespace hopmc
