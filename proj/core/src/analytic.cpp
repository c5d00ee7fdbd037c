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

#include "qbus/analytic.hpp"

#include <cmath>

#include "qbus/errors.hpp"
#include "qbus/units.hpp"

namespace qbus::analytic {

namespace {
constexpr Complex kI{0.0, 1.0};
constexpr double kResonanceGhz = 1e-6;

bool resonant(double a_ghz, double b_ghz) { return std::abs(a_ghz - b_ghz) < kResonanceGhz; }
}  // namespace

double RabiAmplitudes::omega_rabi() const { return std::sqrt(4.0 * g * g * (n + 1) + delta * delta); }

RabiAmplitudes rabi_evolve(const RabiAmplitudes& c0, double t_ns, double t0_ns) {
  if (t_ns < 0.0) throw InvalidParameter("rabi_evolve needs t >= 0");
  const double omega = c0.omega_rabi();
  const double c = std::cos(0.5 * omega * t_ns);
  // sin(Omega t / 2) / Omega, continuous at Omega = 0.
  const double s_over = omega > 0.0 ? std::sin(0.5 * omega * t_ns) / omega : 0.5 * t_ns;
  const double exchange = 2.0 * c0.g * std::sqrt(static_cast<double>(c0.n + 1));

  // The interaction-picture phases run on absolute time: strip them at t0,
  // evolve over t, restore them.
  const Complex shift = std::exp(kI * (0.5 * c0.delta * t0_ns));
  const Complex e0 = c0.c_e_n / shift, g0 = c0.c_g_n1 * shift;

  RabiAmplitudes out = c0;
  out.c_e_n = (e0 * (c - kI * c0.delta * s_over) - kI * exchange * s_over * g0) *
              std::exp(kI * (0.5 * c0.delta * t_ns)) * shift;
  out.c_g_n1 = (g0 * (c + kI * c0.delta * s_over) - kI * exchange * s_over * e0) *
               std::exp(-kI * (0.5 * c0.delta * t_ns)) / shift;
  return out;
}

SwapAmplitudes swap_state(double theta, double g_j, double t_ns) {
  return {std::cos(theta), std::sin(theta) * std::cos(g_j * t_ns), -kI * std::sin(theta) * std::sin(g_j * t_ns)};
}

Matrix hermitian_expm(const Matrix& h, double t_ns) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const Vector phases = (-kI * t_ns * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix jc_propagator(Transition which, double g, double t_ns, int n_max) {
  if (n_max < 0) throw InvalidParameter("n_max must be >= 0");
  const int dim = 3 * (n_max + 1);
  const Level lower = which == Transition::ge ? Level::g : Level::e;
  const Level upper = which == Transition::ge ? Level::e : Level::f;
  Matrix h = Matrix::Zero(dim, dim);
  // a sigma+ : |lower, n+1> -> sqrt(n+1) |upper, n>
  for (int n = 0; n < n_max; ++n) {
    const double amp = g * std::sqrt(static_cast<double>(n + 1));
    h(jc_index(n, upper), jc_index(n + 1, lower)) = amp;
    h(jc_index(n + 1, lower), jc_index(n, upper)) = amp;
  }
  return hermitian_expm(h, t_ns);
}

ChainPropagator three_level_chain(double g1, double g_ge, double t_ns) {
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 1) = h(1, 0) = g1;
  h(1, 2) = h(2, 1) = g_ge;
  const double omega = std::sqrt(g1 * g1 + g_ge * g_ge);
  ChainPropagator out;
  out.equal_couplings = std::abs(g1 - g_ge) <= 1e-12 * std::max(1.0, std::abs(g1));
  if (omega == 0.0) {
    out.unitary = Eigen::Matrix3cd::Identity();
    return out;
  }
  // h^3 = omega^2 h, so exp(-i h t) = 1 - i sin(wt)/w h + (cos(wt) - 1)/w^2 h^2.
  out.unitary = Eigen::Matrix3cd::Identity() - kI * (std::sin(omega * t_ns) / omega) * h +
                ((std::cos(omega * t_ns) - 1.0) / (omega * omega)) * (h * h);
  return out;
}

Operator resonant_propagator(const SpaceLayout& layout, const DeviceParams& dev, const ControlKnobs& knobs,
                             double t_ns) {
  using units::mhz_to_rad_per_ns;
  const Operator a = annihilation(layout, Subsystem::bus);
  Operator h = Operator::zero(layout);
  auto add_exchange = [&h](double g, const Operator& x) { h = h + Complex(g) * (x + x.adjoint()); };

  if (resonant(knobs.omega_ge_ghz, dev.omega_bus_ghz)) {
    add_exchange(mhz_to_rad_per_ns(dev.g_ge_mhz), a * qutrit_transition(layout, QutritOp::raise_ge));
  }
  if (resonant(knobs.omega_ef_ghz(dev), dev.omega_bus_ghz)) {
    add_exchange(mhz_to_rad_per_ns(dev.g_ef_mhz()), a * qutrit_transition(layout, QutritOp::raise_ef));
  }
  const std::array<std::pair<Subsystem, double>, 2> res = {{{Subsystem::r1, knobs.g1_mhz}, {Subsystem::r2, knobs.g2_mhz}}};
  for (std::size_t j = 0; j < res.size(); ++j) {
    if (resonant(dev.omega_res_ghz[j], dev.omega_bus_ghz) && res[j].second != 0.0) {
      add_exchange(mhz_to_rad_per_ns(res[j].second), creation(layout, res[j].first) * a);
    }
  }
  return Operator(layout, hermitian_expm(h.matrix(), t_ns));
}

Operator compose_resonant(const SpaceLayout& layout, const DeviceParams& dev, const ControlSchedule& schedule) {
  Operator u = Operator::identity(layout);
  for (const auto& seg : schedule.segments) u = resonant_propagator(layout, dev, seg.knobs, seg.duration_ns) * u;
  return u;
}

std::array<int, 4> logical_indices(const SpaceLayout& layout) {
  return {layout.index({0, 0, 0, Level::g}), layout.index({0, 0, 1, Level::g}), layout.index({1, 0, 0, Level::g}),
          layout.index({1, 0, 1, Level::g})};
}

Eigen::Matrix4cd logical_block(const Matrix& m, const SpaceLayout& layout) {
  const auto idx = logical_indices(layout);
  Eigen::Matrix4cd b;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) b(r, c) = m(idx[r], idx[c]);
  return b;
}

Eigen::Matrix4cd cphase_target() {
  Eigen::Matrix4cd t = Eigen::Matrix4cd::Identity();
  t(1, 1) = -1.0;
  return t;
}

double distance_up_to_phase(const Eigen::Matrix4cd& block, const Eigen::Matrix4cd& target) {
  const Complex overlap = (target.adjoint() * block).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (block - phase * target).cwiseAbs().maxCoeff();
}

}  // namespace qbus::analytic
