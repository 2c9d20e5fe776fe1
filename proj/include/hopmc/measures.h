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

// Morphological computation measures on aligned symbol sequences.
//
//   MC_W  = I(W'; W | A)
//         = sum p(w',w,a) log2 p(w'|w,a) / p(w'|a)
//   MC_MI = I(W'; W) - I(A; S)
//         = H(W') - H(W'|W) - H(A) + H(A|S)
//
// The state-dependent variants return the pointwise summand for every time
// step; their arithmetic mean is the aggregate value.

#ifndef HOPMC_MEASURES_H_
#define HOPMC_MEASURES_H_

#include <span>
#include <vector>

#include "hopmc/discretize.h"

namespace hopmc {

struct MeasureResult {
  double mc_w = 0.0;
  double mc_mi = 0.0;
  double h_a_given_wnext = 0.0;     // H(A|W')
  double i_wnext_a_given_w = 0.0;   // I(W';A|W)
  double h_wnext = 0.0;             // H(W')
  double h_wnext_given_w = 0.0;     // H(W'|W)
  double h_a = 0.0;                 // H(A)
  double h_a_given_s = 0.0;         // H(A|S)
  // MC_W - MC_MI - H(A|W'); zero for deterministic symbolic dynamics.
  double residual = 0.0;
};

struct StateDependentSeries {
  std::vector<double> values;

  double mean() const;
  std::vector<double> smoothed(std::size_t block = 5) const;
};

double mc_w(const DiscreteTrace& d);
StateDependentSeries mc_w_state(const DiscreteTrace& d);

double mc_mi(const DiscreteTrace& d);
StateDependentSeries mc_mi_state(const DiscreteTrace& d);

struct DeterministicDiagnostics {
  double i_wnext_a_given_w = 0.0;
  double residual = 0.0;   // MC_W - MC_MI - H(A|W')
};
DeterministicDiagnostics deterministic_diagnostics(const DiscreteTrace& d);

// Every aggregate quantity at once.
MeasureResult compute_measures(const DiscreteTrace& d);

// Centered moving average; the window shrinks at the boundaries. Throws
// std::invalid_argument for an even or zero block size.
std::vector<double> moving_average(std::span<const double> x, std::size_t block = 5);

}  // namespace hopmc

#endif  // HOPMC_MEASURES_H_
