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

// Adaptive Dormand-Prince 5(4) integration of piecewise-smooth systems.
//
// The integrator drives a HybridSystem: a right-hand side that is smooth
// within a discrete mode, a switching function whose sign change from
// positive to non-positive triggers a mode change, and a list of breakpoints
// (times of known right-hand side discontinuities) at which steps end
// exactly. Switching times are found by bisection on the continuous
// extension of the step. Uniform output samples are taken from the same
// continuous extension; integration is never restarted to hit a sample.

#ifndef HOPMC_INTEGRATOR_H_
#define HOPMC_INTEGRATOR_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopmc {

// Raised when integration cannot continue (step underflow, non-finite values).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double t)
      : std::runtime_error(what + " at t = " + std::to_string(t)), time_(t) {}
  // Last time up to which the solution is valid.
  double time() const { return time_; }

 private:
  double time_;
};

struct IntegratorConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double t_end = 8.0;            // [s]
  double sample_rate = 1000.0;   // [Hz]
  double max_step = 1e-3;        // [s]
  double initial_step = 1e-6;    // [s]
  double event_tol = 1e-10;      // |g| at a localized switch
  std::size_t max_steps = 50'000'000;

  void validate() const;
  // floor(t_end * sample_rate) + 1
  std::size_t sample_count() const;
  double sample_time(std::size_t k) const { return static_cast<double>(k) / sample_rate; }
};

// Continuous extension of one accepted step (4th order).
class DenseStep {
 public:
  DenseStep() = default;

  double t0() const { return t0_; }
  double h() const { return h_; }
  // End of the valid range; earlier than t0 + h when a switch truncated it.
  double t_end() const { return t_end_; }
  std::size_t dimension() const { return n_; }

  void evaluate(double t, std::span<double> out) const;
  double evaluate(double t, std::size_t component) const;

 private:
  template <class System>
  friend class DormandPrince;

  double t0_ = 0.0;
  double h_ = 0.0;
  double t_end_ = 0.0;
  std::size_t n_ = 0;
  std::vector<double> coeffs_;  // 5 * n, Hairer's rcont layout
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  std::size_t switches = 0;
};

template <class S>
concept HybridSystem =
    requires(S& s, double t, std::span<const double> x, std::span<double> xm,
             const DenseStep& step) {
      { s.dimension() } -> std::convertible_to<std::size_t>;
      s.begin_step(t, t);  // (t0, h) before stages are evaluated
      s.derivative(t, x, xm);
      { s.switching_function(t, x) } -> std::convertible_to<double>;
      s.on_switch(t, xm);  // may reset state components
      s.on_accepted_step(step);
      { s.project(xm) } -> std::convertible_to<bool>;  // true if x changed
      { s.next_breakpoint(t) } -> std::convertible_to<double>;
    };

// Integrates `system` from x0 at t = 0 to cfg.t_end and calls
// sampler(t, x) at every uniform output time, t = 0 included.
template <class System>
class DormandPrince {
 public:
  DormandPrince(System& system, IntegratorConfig cfg) : sys_(system), cfg_(cfg) {
    cfg_.validate();
  }

  template <class Sampler>
  IntegrationStats run(std::span<const double> x0, Sampler&& sampler);

 private:
  void eval(double t, std::span<const double> x, std::span<double> dx) {
    sys_.derivative(t, x, dx);
    ++stats_.rhs_evaluations;
  }

  System& sys_;
  IntegratorConfig cfg_;
  IntegrationStats stats_;
};

namespace dp5 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp5

template <class System>
template <class Sampler>
IntegrationStats DormandPrince<System>::run(std::span<const double> x0, Sampler&& sampler) {
  static_assert(HybridSystem<System>);
  using namespace dp5;
  const std::size_t n = sys_.dimension();
  if (x0.size() != n) throw std::invalid_argument("initial state has wrong dimension");

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> tmp(n), x_new(n), x_event(n);
  const auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double q) { return std::isfinite(q); });
  };

  stats_ = {};
  double t = 0.0;
  const std::size_t n_samples = cfg_.sample_count();
  std::size_t next_sample = 0;
  if (!finite(x)) throw NumericalError("non-finite initial state", t);
  sys_.project(x);
  sampler(0.0, std::span<const double>(x));
  next_sample = 1;

  double h = std::min(cfg_.initial_step, cfg_.max_step);
  bool need_k1 = true;
  double fac_old = 1e-4;  // PI step-size controller memory
  DenseStep dense;
  dense.n_ = n;
  dense.coeffs_.resize(5 * n);

  while (t < cfg_.t_end) {
    if (stats_.accepted + stats_.rejected >= cfg_.max_steps)
      throw NumericalError("step budget exhausted", t);

    const double t_stop = std::min(cfg_.t_end, sys_.next_breakpoint(t));
    bool hits_stop = false;
    if (t + h >= t_stop) {
      h = t_stop - t;
      hits_stop = true;
    }
    if (h <= 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw NumericalError("step size underflow", t);

    sys_.begin_step(t, h);
    if (need_k1) {
      eval(t, x, k1);
      if (!finite(k1)) throw NumericalError("non-finite derivative", t);
      need_k1 = false;
    }
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * a21 * k1[i];
    eval(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = x[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = x[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = x[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = hits_stop ? t_stop : t + h;
    eval(t_new, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      x_new[i] = x[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    eval(t_new, x_new, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk =
          cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(x[i]), std::abs(x_new[i]));
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]) / sk;
      err += e * e;
    }
    err = std::sqrt(err / static_cast<double>(n));
    if (!std::isfinite(err) || !finite(x_new) || !finite(k7)) {
      // Treat as a failed step; a genuinely non-finite field ends in underflow.
      err = 1e10;
    }

    // Hairer's PI controller (beta = 0.04).
    const double fac11 = std::pow(err, 0.2 - 0.04 * 0.75);
    if (err > 1.0) {
      ++stats_.rejected;
      h /= std::min(5.0, fac11 / 0.9);
      continue;
    }

    ++stats_.accepted;
    double fac = fac11 / std::pow(fac_old, 0.04);
    fac = std::clamp(fac / 0.9, 0.1, 5.0);
    fac_old = std::max(err, 1e-4);
    const double h_next = std::min(h / fac, cfg_.max_step);

    // Continuous extension.
    dense.t0_ = t;
    dense.h_ = h;
    dense.t_end_ = t_new;
    double* r = dense.coeffs_.data();
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = x_new[i] - x[i];
      const double bspl = h * k1[i] - ydiff;
      r[i] = x[i];
      r[n + i] = ydiff;
      r[2 * n + i] = bspl;
      r[3 * n + i] = ydiff - h * k7[i] - bspl;
      r[4 * n + i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                          d7 * k7[i]);
    }

    // Mode switch inside the step?
    const double g0 = sys_.switching_function(t, x);
    const double g1 = sys_.switching_function(t_new, x_new);
    bool switched = false;
    double t_accept = t_new;
    if (g0 > 0.0 && g1 <= 0.0) {
      double lo = t, hi = t_new;
      x_event = x_new;
      double g_hi = g1;
      for (int it = 0; it < 200 && -g_hi > cfg_.event_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        dense.evaluate(mid, tmp);
        const double g_mid = sys_.switching_function(mid, tmp);
        if (g_mid > 0.0) {
          lo = mid;
        } else {
          hi = mid;
          g_hi = g_mid;
          x_event = tmp;
        }
      }
      t_accept = hi;
      dense.t_end_ = hi;
      switched = true;
    }

    sys_.on_accepted_step(dense);
    while (next_sample < n_samples && cfg_.sample_time(next_sample) <= t_accept) {
      const double ts = cfg_.sample_time(next_sample);
      dense.evaluate(ts, tmp);
      sampler(ts, std::span<const double>(tmp));
      ++next_sample;
    }

    if (switched) {
      t = t_accept;
      x = x_event;
      sys_.on_switch(t, x);
      ++stats_.switches;
      need_k1 = true;
    } else {
      t = t_new;
      x = x_new;
      k1 = k7;
      if (hits_stop) need_k1 = true;
    }
    if (sys_.project(x)) need_k1 = true;
    h = h_next;
  }
  // A final sample may sit exactly at t_end after rounding.
  while (next_sample < n_samples) {
    sampler(cfg_.sample_time(next_sample), std::span<const double>(x));
    ++next_sample;
  }
  return stats_;
}

}  // namespace hopmc

#endif  // HOPMC_INTEGRATOR_H_
