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

// Plug-in (maximum likelihood) estimates of entropies and mutual
// informations from aligned discrete sequences. Distributions are kept as
// sparse count maps over observed tuples, so only the support is ever
// touched; all results are in bits.

#ifndef HOPMC_INFOTHEORY_H_
#define HOPMC_INFOTHEORY_H_

#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

namespace hopmc {

using Symbol = std::uint64_t;
using Tuple = std::vector<Symbol>;

// Empirical joint distribution of k aligned symbol sequences.
class SparseJoint {
 public:
  SparseJoint() = default;

  std::size_t arity() const { return arity_; }
  std::uint64_t total() const { return total_; }
  const std::map<Tuple, std::uint64_t>& counts() const { return counts_; }
  std::uint64_t count(const Tuple& tuple) const;
  double probability(const Tuple& tuple) const;

  // Joint of the selected coordinates (in the given order).
  SparseJoint marginal(std::span<const std::size_t> coords) const;
  SparseJoint marginal(std::initializer_list<std::size_t> coords) const {
    return marginal(std::span<const std::size_t>(coords.begin(), coords.size()));
  }

  // Builds a joint directly from counts. Zero counts are dropped.
  static SparseJoint from_counts(std::size_t arity, const std::map<Tuple, std::uint64_t>& counts);

 private:
  friend SparseJoint estimate_joint(std::span<const std::span<const Symbol>> sequences);

  std::size_t arity_ = 0;
  std::uint64_t total_ = 0;
  std::map<Tuple, std::uint64_t> counts_;
};

// Counts the tuples (s_1[t], ..., s_k[t]) for t = 0..L-1. Throws
// std::invalid_argument on length mismatch, empty input or k = 0.
SparseJoint estimate_joint(std::span<const std::span<const Symbol>> sequences);
SparseJoint estimate_joint(std::initializer_list<std::span<const Symbol>> sequences);

// H of the full joint.
double entropy(const SparseJoint& joint);

// H(X | Y) for coordinate sets X = target, Y = given.
double conditional_entropy(const SparseJoint& joint, std::span<const std::size_t> target,
                           std::span<const std::size_t> given);
double conditional_entropy(const SparseJoint& joint, std::initializer_list<std::size_t> target,
                           std::initializer_list<std::size_t> given);

// I(A; B).
double mutual_information(const SparseJoint& joint, std::span<const std::size_t> a,
                          std::span<const std::size_t> b);
double mutual_information(const SparseJoint& joint, std::initializer_list<std::size_t> a,
                          std::initializer_list<std::size_t> b);

// I(X; Y | Z) = sum p(x,y,z) log2 [ p(x,y,z) p(z) / (p(x,z) p(y,z)) ],
// evaluated from integer counts so that exact conditional independence in
// the sample yields exactly 0.
double conditional_mutual_information(const SparseJoint& joint, std::span<const std::size_t> x,
                                      std::span<const std::size_t> y,
                                      std::span<const std::size_t> z);
double conditional_mutual_information(const SparseJoint& joint, std::initializer_list<std::size_t> x,
                                      std::initializer_list<std::size_t> y,
                                      std::initializer_list<std::size_t> z);

}  // namespace hopmc

#endif  // HOPMC_INFOTHEORY_H_
