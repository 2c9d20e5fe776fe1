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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>
#include <stdexcept>

#include "hopmc/infotheory.h"

namespace hopmc {

namespace {

// Joint coordinates used throughout.
constexpr std::size_t kWNext = 0, kW = 1, kS = 2, kA = 3;

void require_non_empty(const DiscreteTrace& d) {
  if (d.w.empty()) throw std::invalid_argument("empty discrete trace");
  const auto n = d.w.size();
  if (d.w_next.size() != n || d.s.size() != n || d.a.size() != n)
    throw std::invalid_argument("discrete trace sequences differ in length");
}

SparseJoint full_joint(const DiscreteTrace& d) {
  require_non_empty(d);
  return estimate_joint({std::span<const Symbol>(d.w_next), std::span<const Symbol>(d.w),
                         std::span<const Symbol>(d.s), std::span<const Symbol>(d.a)});
}

// Counts of single symbols or symbol pairs along the trace.
template <class Key>
std::map<Key, double> tally(std::size_t n, auto&& key_of) {
  std::map<Key, double> m;
  for (std::size_t t = 0; t < n; ++t) m[key_of(t)] += 1.0;
  return m;
}

using Pair = std::pair<Symbol, Symbol>;
using Triple = std::tuple<Symbol, Symbol, Symbol>;

}  // namespace

double StateDependentSeries::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::vector<double> StateDependentSeries::smoothed(std::size_t block) const {
  return moving_average(values, block);
}

double mc_w(const DiscreteTrace& d) {
  const SparseJoint joint = full_joint(d);
  return conditional_mutual_information(joint, {kWNext}, {kW}, {kA});
}

StateDependentSeries mc_w_state(const DiscreteTrace& d) {
  require_non_empty(d);
  const std::size_t n = d.w.size();
  const auto c_wnext_w_a =
      tally<Triple>(n, [&](std::size_t t) { return Triple{d.w_next[t], d.w[t], d.a[t]}; });
  const auto c_w_a = tally<Pair>(n, [&](std::size_t t) { return Pair{d.w[t], d.a[t]}; });
  const auto c_wnext_a = tally<Pair>(n, [&](std::size_t t) { return Pair{d.w_next[t], d.a[t]}; });
  const auto c_a = tally<Symbol>(n, [&](std::size_t t) { return d.a[t]; });

  StateDependentSeries out;
  out.values.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    // log2 p(w'|w,a) / p(w'|a)
    const double num = c_wnext_w_a.at({d.w_next[t], d.w[t], d.a[t]}) * c_a.at(d.a[t]);
    const double den = c_w_a.at({d.w[t], d.a[t]}) * c_wnext_a.at({d.w_next[t], d.a[t]});
    out.values.push_back(std::log2(num / den));
  }
  return out;
}

double mc_mi(const DiscreteTrace& d) {
  const SparseJoint joint = full_joint(d);
  const double h_wnext = entropy(joint.marginal({kWNext}));
  const double h_wnext_given_w = conditional_entropy(joint, {kWNext}, {kW});
  const double h_a = entropy(joint.marginal({kA}));
  const double h_a_given_s = conditional_entropy(joint, {kA}, {kS});
  return h_wnext - h_wnext_given_w - h_a + h_a_given_s;
}

StateDependentSeries mc_mi_state(const DiscreteTrace& d) {
  require_non_empty(d);
  const std::size_t n = d.w.size();
  const double total = static_cast<double>(n);
  const auto c_wnext = tally<Symbol>(n, [&](std::size_t t) { return d.w_next[t]; });
  const auto c_wnext_w = tally<Pair>(n, [&](std::size_t t) { return Pair{d.w_next[t], d.w[t]}; });
  const auto c_w = tally<Symbol>(n, [&](std::size_t t) { return d.w[t]; });
  const auto c_a = tally<Symbol>(n, [&](std::size_t t) { return d.a[t]; });
  const auto c_a_s = tally<Pair>(n, [&](std::size_t t) { return Pair{d.a[t], d.s[t]}; });
  const auto c_s = tally<Symbol>(n, [&](std::size_t t) { return d.s[t]; });

  StateDependentSeries out;
  out.values.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double p_wnext = c_wnext.at(d.w_next[t]) / total;
    const double p_wnext_given_w = c_wnext_w.at({d.w_next[t], d.w[t]}) / c_w.at(d.w[t]);
    const double p_a = c_a.at(d.a[t]) / total;
    const double p_a_given_s = c_a_s.at({d.a[t], d.s[t]}) / c_s.at(d.s[t]);
    // i(w';w) - i(a;s)
    out.values.push_back(std::log2(p_wnext_given_w) - std::log2(p_wnext) + std::log2(p_a) -
                         std::log2(p_a_given_s));
  }
  return out;
}

DeterministicDiagnostics deterministic_diagnostics(const DiscreteTrace& d) {
  const MeasureResult r = compute_measures(d);
  return {r.i_wnext_a_given_w, r.residual};
}

MeasureResult compute_measures(const DiscreteTrace& d) {
  const SparseJoint joint = full_joint(d);
  MeasureResult r;
  r.mc_w = conditional_mutual_information(joint, {kWNext}, {kW}, {kA});
  r.h_wnext = entropy(joint.marginal({kWNext}));
  r.h_wnext_given_w = conditional_entropy(joint, {kWNext}, {kW});
  r.h_a = entropy(joint.marginal({kA}));
  r.h_a_given_s = conditional_entropy(joint, {kA}, {kS});
  r.mc_mi = r.h_wnext - r.h_wnext_given_w - r.h_a + r.h_a_given_s;
  r.h_a_given_wnext = conditional_entropy(joint, {kA}, {kWNext});
  r.i_wnext_a_given_w = conditional_mutual_information(joint, {kWNext}, {kA}, {kW});
  r.residual = r.mc_w - r.mc_mi - r.h_a_given_wnext;
  return r;
}

std::vector<double> moving_average(std::span<const double> x, std::size_t block) {
  if (block == 0 || block % 2 == 0)
    throw std::invalid_argument("moving average block size must be odd and positive");
  const std::size_t half = block / 2;
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += x[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace hopmc
