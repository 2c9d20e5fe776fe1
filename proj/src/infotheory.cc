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

#include "hopmc/infotheory.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hopmc {

namespace {

using Coords = std::vector<std::size_t>;

Coords to_coords(std::initializer_list<std::size_t> c) { return Coords(c.begin(), c.end()); }

void check_sets(const SparseJoint& joint, std::initializer_list<std::span<const std::size_t>> sets,
                std::size_t non_empty_prefix) {
  std::vector<bool> used(joint.arity(), false);
  std::size_t index = 0;
  for (auto set : sets) {
    if (index++ < non_empty_prefix && set.empty())
      throw std::invalid_argument("coordinate set must not be empty");
    for (std::size_t c : set) {
      if (c >= joint.arity()) throw std::invalid_argument("coordinate out of range");
      if (used[c]) throw std::invalid_argument("coordinate sets must be disjoint");
      used[c] = true;
    }
  }
}

Coords concat(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  Coords out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Tuple project(const Tuple& t, std::span<const std::size_t> positions) {
  Tuple out;
  out.reserve(positions.size());
  for (std::size_t p : positions) out.push_back(t[p]);
  return out;
}

std::vector<std::size_t> iota(std::size_t from, std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = from + i;
  return v;
}

}  // namespace

std::uint64_t SparseJoint::count(const Tuple& tuple) const {
  const auto it = counts_.find(tuple);
  return it == counts_.end() ? 0 : it->second;
}

double SparseJoint::probability(const Tuple& tuple) const {
  return total_ == 0 ? 0.0 : static_cast<double>(count(tuple)) / static_cast<double>(total_);
}

SparseJoint SparseJoint::marginal(std::span<const std::size_t> coords) const {
  for (std::size_t c : coords)
    if (c >= arity_) throw std::invalid_argument("coordinate out of range");
  SparseJoint m;
  m.arity_ = coords.size();
  m.total_ = total_;
  for (const auto& [tuple, c] : counts_) m.counts_[project(tuple, coords)] += c;
  return m;
}

SparseJoint SparseJoint::from_counts(std::size_t arity, const std::map<Tuple, std::uint64_t>& counts) {
  SparseJoint j;
  j.arity_ = arity;
  for (const auto& [tuple, c] : counts) {
    if (tuple.size() != arity) throw std::invalid_argument("tuple arity mismatch");
    if (c == 0) continue;
    j.counts_[tuple] = c;
    j.total_ += c;
  }
  return j;
}

SparseJoint estimate_joint(std::span<const std::span<const Symbol>> sequences) {
  if (sequences.empty()) throw std::invalid_argument("estimate_joint: no sequences");
  const std::size_t len = sequences.front().size();
  for (const auto& s : sequences)
    if (s.size() != len) throw std::invalid_argument("estimate_joint: sequence lengths differ");
  if (len == 0) throw std::invalid_argument("estimate_joint: empty sequences");

  SparseJoint j;
  j.arity_ = sequences.size();
  j.total_ = len;
  Tuple key(j.arity_);
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t k = 0; k < j.arity_; ++k) key[k] = sequences[k][t];
    ++j.counts_[key];
  }
  return j;
}

SparseJoint estimate_joint(std::initializer_list<std::span<const Symbol>> sequences) {
  return estimate_joint(std::span<const std::span<const Symbol>>(sequences.begin(), sequences.size()));
}

double entropy(const SparseJoint& joint) {
  const double n = static_cast<double>(joint.total());
  double h = 0.0;
  for (const auto& [_, c] : joint.counts()) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double conditional_entropy(const SparseJoint& joint, std::span<const std::size_t> target,
                           std::span<const std::size_t> given) {
  check_sets(joint, {target, given}, 1);
  const Coords both = concat(given, target);
  const SparseJoint xy = joint.marginal(both);
  const SparseJoint y = joint.marginal(given);
  const auto given_pos = iota(0, given.size());
  const double n = static_cast<double>(joint.total());
  double h = 0.0;
  for (const auto& [tuple, c] : xy.counts()) {
    const double cy = given.empty() ? n : static_cast<double>(y.count(project(tuple, given_pos)));
    const double cxy = static_cast<double>(c);
    h -= cxy / n * std::log2(cxy / cy);
  }
  return h;
}

double conditional_entropy(const SparseJoint& joint, std::initializer_list<std::size_t> target,
                           std::initializer_list<std::size_t> given) {
  const Coords t = to_coords(target), g = to_coords(given);
  return conditional_entropy(joint, t, g);
}

double mutual_information(const SparseJoint& joint, std::span<const std::size_t> a,
                          std::span<const std::size_t> b) {
  return conditional_mutual_information(joint, a, b, {});
}

double mutual_information(const SparseJoint& joint, std::initializer_list<std::size_t> a,
                          std::initializer_list<std::size_t> b) {
  const Coords ca = to_coords(a), cb = to_coords(b);
  return mutual_information(joint, ca, cb);
}

double conditional_mutual_information(const SparseJoint& joint, std::span<const std::size_t> x,
                                      std::span<const std::size_t> y,
                                      std::span<const std::size_t> z) {
  check_sets(joint, {x, y, z}, 2);
  // Layout of the working marginal: (z..., x..., y...).
  Coords order(z.begin(), z.end());
  order.insert(order.end(), x.begin(), x.end());
  order.insert(order.end(), y.begin(), y.end());
  const SparseJoint xyz = joint.marginal(order);

  const auto z_pos = iota(0, z.size());
  const auto x_pos = iota(z.size(), x.size());
  const auto y_pos = iota(z.size() + x.size(), y.size());
  const Coords xz_pos = concat(z_pos, x_pos);
  const Coords yz_pos = concat(z_pos, y_pos);

  const SparseJoint mz = xyz.marginal(z_pos);
  const SparseJoint mxz = xyz.marginal(xz_pos);
  const SparseJoint myz = xyz.marginal(yz_pos);

  const double n = static_cast<double>(joint.total());
  double info = 0.0;
  for (const auto& [tuple, c] : xyz.counts()) {
    const double cz = z.empty() ? n : static_cast<double>(mz.count(project(tuple, z_pos)));
    const double cxz = static_cast<double>(mxz.count(project(tuple, xz_pos)));
    const double cyz = static_cast<double>(myz.count(project(tuple, yz_pos)));
    const double cxyz = static_cast<double>(c);
    // Products of counts are exact in double for samples below 2^26.
    info += cxyz / n * std::log2((cxyz * cz) / (cxz * cyz));
  }
  return info;
}

double conditional_mutual_information(const SparseJoint& joint, std::initializer_list<std::size_t> x,
                                      std::initializer_list<std::size_t> y,
                                      std::initializer_list<std::size_t> z) {
  const Coords cx = to_coords(x), cy = to_coords(y), cz = to_coords(z);
  return conditional_mutual_information(joint, cx, cy, cz);
}

}  // namespace hopmc
