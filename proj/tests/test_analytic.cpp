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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qbus/analytic.hpp"
#include "qbus/validation.hpp"

using namespace qbus;
using namespace qbus::analytic;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

// Two-level Hamiltonian of the pair {|e,n>, |g,n+1>} with the qutrit
// detuned by delta from the bus, in the frame where the pair is resonant.
Eigen::Matrix2cd pair_propagator(double g, int n, double delta, double t) {
  Eigen::Matrix2cd h;
  h << delta / 2.0, g * std::sqrt(n + 1.0), g * std::sqrt(n + 1.0), -delta / 2.0;
  return (Complex(0, -1) * t * h).exp();
}

}  // namespace

TEST(Rabi, ResonantClosedForm) {
  for (int n : {0, 1, 2}) {
    RabiAmplitudes c0;
    c0.n = n;
    c0.g = 0.08;
    for (double t : {0.0, 3.0, 11.7, 40.0}) {
      const auto c = rabi_evolve(c0, t);
      EXPECT_NEAR(std::abs(c.c_e_n - std::cos(0.08 * std::sqrt(n + 1.0) * t)), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(c.c_g_n1 + kI * std::sin(0.08 * std::sqrt(n + 1.0) * t)), 0.0, 1e-14);
    }
  }
}

TEST(Rabi, OmegaIncludesPhotonNumber) {
  RabiAmplitudes c;
  c.n = 3;
  c.g = 0.1;
  c.delta = 0.5;
  EXPECT_NEAR(c.omega_rabi(), std::sqrt(4 * 0.01 * 4 + 0.25), 1e-15);
}

TEST(Rabi, TimeZeroIsIdentity) {
  RabiAmplitudes c0;
  c0.c_e_n = Complex(0.6, 0.0);
  c0.c_g_n1 = Complex(0.0, 0.8);
  c0.g = 0.3;
  c0.delta = -2.0;
  const auto c = rabi_evolve(c0, 0.0);
  EXPECT_EQ(c.c_e_n, c0.c_e_n);
  EXPECT_EQ(c.c_g_n1, c0.c_g_n1);
}

TEST(Rabi, MatchesMatrixExponential) {
  // c(t) = P(t) exp(-i H t) c(0) with H = [[delta/2, g sqrt(n+1)], [g sqrt(n+1), -delta/2]]
  // and P(t) = diag(e^{i delta t/2}, e^{-i delta t/2}).
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = oracle::random_state(2, rng);
    RabiAmplitudes c0;
    c0.c_e_n = v(0);
    c0.c_g_n1 = v(1);
    c0.n = trial % 3;
    c0.g = 0.05 + 0.01 * trial;
    c0.delta = -3.0 + 0.3 * trial;
    const double t = 1.0 + 2.3 * trial;
    const auto c = rabi_evolve(c0, t);
    Eigen::Vector2cd ref = pair_propagator(c0.g, c0.n, c0.delta, t) * Eigen::Vector2cd(v(0), v(1));
    ref(0) *= std::exp(kI * (0.5 * c0.delta * t));
    ref(1) *= std::exp(-kI * (0.5 * c0.delta * t));
    EXPECT_LT(std::abs(c.c_e_n - ref(0)), 1e-12);
    EXPECT_LT(std::abs(c.c_g_n1 - ref(1)), 1e-12);
    EXPECT_NEAR(std::norm(c.c_e_n) + std::norm(c.c_g_n1), 1.0, 1e-12);
  }
}

TEST(Rabi, ComposesInTime) {
  RabiAmplitudes c0;
  c0.c_e_n = Complex(0.6, 0.0);
  c0.c_g_n1 = Complex(0.0, 0.8);
  c0.n = 1;
  c0.g = 0.082;
  c0.delta = -10.4;
  const auto a = rabi_evolve(rabi_evolve(c0, 3.3), 8.9, 3.3);
  const auto b = rabi_evolve(c0, 12.2);
  EXPECT_LT(std::abs(a.c_e_n - b.c_e_n), 1e-12);
  EXPECT_LT(std::abs(a.c_g_n1 - b.c_g_n1), 1e-12);
  // On resonance the phases vanish and the start time is irrelevant.
  c0.delta = 0.0;
  const auto r = rabi_evolve(rabi_evolve(c0, 3.3), 8.9);
  EXPECT_LT(std::abs(r.c_e_n - rabi_evolve(c0, 12.2).c_e_n), 1e-12);
}

TEST(Rabi, FarDetunedBound) {
  RabiAmplitudes c0;
  c0.n = 0;
  c0.g = 2 * kPi * 13e-3;
  c0.delta = 2 * kPi * (5.0 - 6.65);
  const double bound = 1.0 - 4 * c0.g * c0.g / std::pow(c0.omega_rabi(), 2);
  for (double t = 0.0; t < 20.0; t += 0.01) EXPECT_GE(std::norm(rabi_evolve(c0, t).c_e_n), bound - 1e-12);
}

TEST(Rabi, ReproducesResonantSwap) {
  const double g = 2 * kPi * 50e-3;
  for (double t : {0.7, 2.5, 5.0, 9.1}) {
    RabiAmplitudes c0;  // |e,0> plays the role of |0>_R|1>_j
    c0.g = g;
    const auto c = rabi_evolve(c0, t);
    const auto s = swap_state(kPi / 2, g, t);
    EXPECT_LT(std::abs(c.c_e_n - s.in_resonator), 1e-15);
    EXPECT_LT(std::abs(c.c_g_n1 - s.in_bus), 1e-15);
  }
}

TEST(Swap, QuarterHalfAndThreeQuarterPeriods) {
  const double g = 0.3;
  auto at = [g](double phase) { return swap_state(kPi / 2, g, phase / g); };
  EXPECT_LT(std::abs(at(kPi / 2).in_bus + kI), 1e-15);
  EXPECT_LT(std::abs(at(kPi / 2).in_resonator), 1e-15);
  EXPECT_LT(std::abs(at(kPi).in_resonator + 1.0), 1e-15);
  EXPECT_LT(std::abs(at(3 * kPi / 2).in_bus - kI), 1e-15);
}

TEST(Swap, VacuumComponentUnchanged) {
  const auto s = swap_state(0.3, 0.2, 7.0);
  EXPECT_DOUBLE_EQ(s.vacuum.real(), std::cos(0.3));
  EXPECT_EQ(s.vacuum.imag(), 0.0);
  EXPECT_NEAR(std::norm(s.vacuum) + std::norm(s.in_bus) + std::norm(s.in_resonator), 1.0, 1e-15);
}

TEST(JaynesCummings, ExamplesOnBasisStates) {
  const double g = 0.2;
  const Matrix ge = jc_propagator(Transition::ge, g, kPi / (2 * g), 2);
  EXPECT_LT(std::abs(ge(jc_index(0, Level::e), jc_index(1, Level::g)) + kI), 1e-14);
  const Matrix ef = jc_propagator(Transition::ef, g, kPi / g, 2);
  EXPECT_LT(std::abs(ef(jc_index(1, Level::e), jc_index(1, Level::e)) + 1.0), 1e-14);
  for (double t : {0.0, 1.0, 33.0}) {
    const Matrix u = jc_propagator(Transition::ge, g, t, 2);
    EXPECT_LT(std::abs(u(jc_index(0, Level::g), jc_index(0, Level::g)) - 1.0), 1e-14);
  }
}

TEST(JaynesCummings, PrintedCosineFactors) {
  // cos(g t sqrt(a^dag a + 1)) on |e,n> and cos(g t sqrt(a^dag a)) on |g,n>.
  const double g = 0.13, t = 17.0;
  const Matrix u = jc_propagator(Transition::ge, g, t, 3);
  for (int n = 0; n < 3; ++n) {
    EXPECT_NEAR(std::abs(u(jc_index(n, Level::e), jc_index(n, Level::e)) - std::cos(g * t * std::sqrt(n + 1.0))), 0.0,
                1e-13);
    EXPECT_NEAR(std::abs(u(jc_index(n + 1, Level::g), jc_index(n, Level::e)) +
                         kI * std::sin(g * t * std::sqrt(n + 1.0))),
                0.0, 1e-13);
  }
}

TEST(JaynesCummings, UnitaryAndMatchesKroneckerExponential) {
  for (auto which : {Transition::ge, Transition::ef}) {
    const int n_max = 3;
    const double g = 0.21, t = 9.4;
    const Matrix u = jc_propagator(which, g, t, n_max);
    EXPECT_LT(oracle::max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())), 1e-12);
    oracle::M a = oracle::lowering(n_max + 1);
    const oracle::M s = which == Transition::ge ? oracle::ket_bra(3, 1, 0) : oracle::ket_bra(3, 2, 1);
    const oracle::M x = Eigen::kroneckerProduct(a, s).eval();
    const oracle::M h = g * (x + x.adjoint());
    EXPECT_LT(oracle::max_abs(u - oracle::expm(Complex(0, -t) * h)), 1e-12);
  }
}

TEST(Chain, HalfPeriodTransfers) {
  const double g = 2 * kPi * 13e-3;
  const double t = kPi / (std::sqrt(2.0) * g);
  const auto c = three_level_chain(g, g, t);
  EXPECT_TRUE(c.equal_couplings);
  EXPECT_LT(std::abs(c.unitary(2, 0) + 1.0), 1e-14);
  EXPECT_LT(std::abs(c.unitary(0, 2) + 1.0), 1e-14);
  EXPECT_LT(oracle::max_abs(three_level_chain(g, g, 2 * t).unitary - Eigen::Matrix3cd::Identity()), 1e-14);
}

TEST(Chain, EndToEndAmplitude) {
  const double g = 0.09;
  for (double t : {1.0, 5.5, 20.0}) {
    const auto c = three_level_chain(g, g, t);
    EXPECT_LT(std::abs(c.unitary(2, 0) - (std::cos(std::sqrt(2.0) * g * t) - 1.0) / 2.0), 1e-14);
  }
}

TEST(Chain, MatchesExponentialForAnyCouplings) {
  for (auto [g1, g2] : {std::pair{0.08, 0.08}, std::pair{0.3, 0.05}, std::pair{0.0, 0.1}}) {
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 1) = h(1, 0) = g1;
    h(1, 2) = h(2, 1) = g2;
    const double t = 13.0;
    const auto c = three_level_chain(g1, g2, t);
    EXPECT_EQ(c.equal_couplings, g1 == g2);
    EXPECT_LT(oracle::max_abs(c.unitary - (Complex(0, -t) * h).exp()), 1e-13);
  }
}

TEST(HermitianExpm, MatchesPade) {
  std::mt19937_64 rng(4);
  const int n = 12;
  oracle::M a(n, n);
  std::normal_distribution<double> g;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  const oracle::M h = a + a.adjoint();
  EXPECT_LT(oracle::max_abs(hermitian_expm(h, 0.7) - oracle::expm(Complex(0, -0.7) * h)), 1e-12);
}

TEST(LogicalBlock, IndicesAndTarget) {
  const SpaceLayout l;
  const auto idx = logical_indices(l);
  EXPECT_EQ(idx[0], l.index({0, 0, 0, Level::g}));
  EXPECT_EQ(idx[1], l.index({0, 0, 1, Level::g}));
  EXPECT_EQ(idx[2], l.index({1, 0, 0, Level::g}));
  EXPECT_EQ(idx[3], l.index({1, 0, 1, Level::g}));
  const Eigen::Matrix4cd z = cphase_target();
  EXPECT_EQ(z.diagonal(), Eigen::Vector4cd(1, -1, 1, 1));
  EXPECT_LT(distance_up_to_phase(Complex(0.0, 1.0) * z, z), 1e-15);
  EXPECT_GT(distance_up_to_phase(Eigen::Matrix4cd::Identity(), z), 0.9);
}

TEST(OracleEquivalence, EverySegmentType) {
  for (const auto& c : oracle_checks(DeviceParams{}, 4, 99)) EXPECT_LE(c.deviation, 1e-6) << c.name;
}

TEST(OracleEquivalence, FrameChecks) {
  for (const auto& c : frame_checks(DeviceParams{})) EXPECT_LE(c.deviation, 1e-6) << c.name;
}
