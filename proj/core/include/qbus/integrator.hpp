// Copyright 2026 The qbus Authors
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

#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

// Explicit Runge-Kutta steppers for Eigen dense states (vectors or matrices).
// The right-hand side is called as rhs(t, y, dy) and must fully overwrite dy.
namespace qbus::ode {

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 0.01;
  double min_step = 1e-12;
  long max_steps = 50'000'000;
};

struct Stats {
  long rhs_evaluations = 0;
  long accepted = 0;
  long rejected = 0;
};

enum class Status { ok, step_underflow, too_many_steps, non_finite };

struct Outcome {
  Status status = Status::ok;
  double t = 0.0;  // where integration stopped
};

/// Dormand-Prince 5(4) with FSAL and a max-norm mixed error test. Advances y
/// from t0 to exactly t1. `h` carries the step-size guess between calls.
template <class State, class Rhs>
Outcome dopri5(State& y, double t0, double t1, Rhs&& rhs, const AdaptiveOptions& opt, double& h, Stats& stats) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  Outcome out{Status::ok, t0};
  if (!(t1 > t0)) return out;

  State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, tmp = y, ynew = y, err = y;
  double t = t0;
  rhs(t, y, k1);
  ++stats.rhs_evaluations;

  if (!(h > 0.0)) h = std::min(opt.max_step, 1e-3);
  long steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps) return {Status::too_many_steps, t};
    double step = std::min(h, opt.max_step);
    bool last = false;
    if (t + step >= t1 || t1 - (t + step) < 1e-12 * std::max(1.0, std::abs(t1))) {
      step = t1 - t;
      last = true;
    }

    tmp.noalias() = y + step * (a21 * k1);
    rhs(t + c2 * step, tmp, k2);
    tmp.noalias() = y + step * (a31 * k1 + a32 * k2);
    rhs(t + c3 * step, tmp, k3);
    tmp.noalias() = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * step, tmp, k4);
    tmp.noalias() = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * step, tmp, k5);
    tmp.noalias() = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + step, tmp, k6);
    ynew.noalias() = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + step, ynew, k7);
    stats.rhs_evaluations += 6;
    err.noalias() = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const auto scale = (opt.abs_tol + opt.rel_tol * y.cwiseAbs().cwiseMax(ynew.cwiseAbs()).array()).eval();
    const double enorm = (err.cwiseAbs().array() / scale).maxCoeff();
    if (!std::isfinite(enorm)) return {Status::non_finite, t};

    if (enorm <= 1.0) {
      t = last ? t1 : t + step;
      y.swap(ynew);
      k1.swap(k7);
      ++stats.accepted;
      const double grow = enorm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(enorm, -0.2));
      // Keep the natural step size when the last step was shortened to land on t1.
      if (!last) h = step * std::max(1.0, grow);
      else h = std::max(h, step * grow);
    } else {
      ++stats.rejected;
      h = step * std::max(0.2, 0.9 * std::pow(enorm, -0.2));
      if (h < opt.min_step) return {Status::step_underflow, t};
    }
  }
  out.t = t;
  return out;
}

/// Classic fixed-step RK4. The interval is split into ceil((t1-t0)/dt) equal
/// steps so that t1 is hit exactly.
template <class State, class Rhs>
Outcome rk4(State& y, double t0, double t1, Rhs&& rhs, double dt, Stats& stats) {
  if (!(t1 > t0)) return {Status::ok, t0};
  const long n = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / dt - 1e-9)));
  const double h = (t1 - t0) / static_cast<double>(n);
  State k1 = y, k2 = y, k3 = y, k4 = y, tmp = y;
  for (long i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    rhs(t, y, k1);
    tmp.noalias() = y + (0.5 * h) * k1;
    rhs(t + 0.5 * h, tmp, k2);
    tmp.noalias() = y + (0.5 * h) * k2;
    rhs(t + 0.5 * h, tmp, k3);
    tmp.noalias() = y + h * k3;
    rhs(t + h, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    stats.rhs_evaluations += 4;
    ++stats.accepted;
    if (!y.allFinite()) return {Status::non_finite, t + h};
  }
  return {Status::ok, t1};
}

}  // namespace qbus::ode
