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

#include "hopmc/integrator.h"

#include <cmath>
#include <stdexcept>

namespace hopmc {

void IntegratorConfig::validate() const {
  if (!(abs_tol > 0 && rel_tol > 0)) throw std::invalid_argument("tolerances must be positive");
  if (!(sample_rate > 0)) throw std::invalid_argument("sample rate must be positive");
  if (!(t_end > 0)) throw std::invalid_argument("end time must be positive");
  if (!(max_step > 0 && initial_step > 0))
    throw std::invalid_argument("step sizes must be positive");
  if (!(event_tol > 0)) throw std::invalid_argument("event tolerance must be positive");
}

std::size_t IntegratorConfig::sample_count() const {
  // The small slack keeps e.g. 8.0 * 1000 from flooring to 7999.
  return static_cast<std::size_t>(std::floor(t_end * sample_rate * (1 + 1e-12))) + 1;
}

void DenseStep::evaluate(double t, std::span<double> out) const {
  const double s = (t - t0_) / h_;
  const double s1 = 1.0 - s;
  const double* r = coeffs_.data();
  for (std::size_t i = 0; i < n_; ++i) {
    out[i] = r[i] + s * (r[n_ + i] + s1 * (r[2 * n_ + i] + s * (r[3 * n_ + i] + s1 * r[4 * n_ + i])));
  }
}

double DenseStep::evaluate(double t, std::size_t i) const {
  const double s = (t - t0_) / h_;
  const double s1 = 1.0 - s;
  const double* r = coeffs_.data();
  return r[i] + s * (r[n_ + i] + s1 * (r[2 * n_ + i] + s * (r[3 * n_ + i] + s1 * r[4 * n_ + i])));
}

}  // namespace hopmc
