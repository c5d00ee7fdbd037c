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
#include "qbus/errors.hpp"
#include "qbus/dynamics.hpp"

using namespace qbus;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMhz = 2.0 * kPi * 1e-3;  // rad/ns per MHz

oracle::Params to_oracle(const DeviceParams& d, const ControlKnobs& k) {
  oracle::Params p;
  p.w_bus = d.omega_bus_ghz;
  p.w1 = d.omega_res_ghz[0];
  p.w2 = d.omega_res_ghz[1];
  p.g_ge = d.g_ge_mhz;
  p.delta = d.delta_ghz;
  p.g1 = k.g1_mhz;
  p.g2 = k.g2_mhz;
  p.w_ge = k.omega_ge_ghz;
  p.rates_per_us = {d.kappa_1, d.kappa_2, d.kappa_bus, d.gamma_ge, d.gamma_ef, d.gamma_phi_e, d.gamma_phi_f};
  return p;
}

ControlSchedule one_segment(double t, ControlKnobs k) { return {"probe", {{t, k, "i"}}}; }

DeviceParams lossless() {
  DeviceParams d;
  d.set_lossless();
  return d;
}

}  // namespace

TEST(DeviceParams, Defaults) {
  const DeviceParams d;
  EXPECT_NEAR(d.g_ef_mhz() / d.g_ge_mhz, std::sqrt(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(d.kappa_1, 0.02);
  EXPECT_DOUBLE_EQ(d.gamma_ef, 0.01);
  EXPECT_NO_THROW(d.validate());
}

TEST(DeviceParams, RejectsInvalidValues) {
  DeviceParams d;
  d.kappa_bus = -1.0;
  EXPECT_THROW(d.validate(), InvalidParameter);
  d = DeviceParams{};
  d.delta_ghz = 0.0;
  EXPECT_THROW(d.validate(), InvalidParameter);
  d = DeviceParams{};
  d.omega_res_ghz[1] = std::nan("");
  EXPECT_THROW(d.validate(), InvalidParameter);
}

TEST(ControlKnobs, Bounds) {
  const DeviceParams d;
  EXPECT_NO_THROW((ControlKnobs{50.0, 0.0, 5.0}.validate(d)));
  EXPECT_THROW((ControlKnobs{50.5, 0.0, 5.0}.validate(d)), InvalidParameter);
  EXPECT_THROW((ControlKnobs{-1.0, 0.0, 5.0}.validate(d)), InvalidParameter);
  EXPECT_THROW((ControlKnobs{0.0, 0.0, 0.5}.validate(d)), InvalidParameter);  // omega_ef < 0
  EXPECT_DOUBLE_EQ((ControlKnobs{0.0, 0.0, 7.37}.omega_ef_ghz(d)), 7.37 - 0.72);
}

TEST(Hamiltonian, MatchesKroneckerConstruction) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> g(0.0, 50.0), w(4.0, 8.0);
  DeviceParams d;
  d.omega_res_ghz = {6.6, 6.7};
  for (int k = 0; k < 6; ++k) {
    const ControlKnobs knobs{g(rng), g(rng), w(rng)};
    for (auto dims : {std::array{2, 2, 2}, std::array{3, 3, 3}, std::array{2, 4, 3}}) {
      const SpaceLayout l(dims);
      const Operator h = build_hamiltonian(l, d, knobs);
      const oracle::Space s{dims[0], dims[1], dims[2]};
      EXPECT_LT(max_abs(h.matrix() - oracle::hamiltonian(s, to_oracle(d, knobs))), 1e-12);
      EXPECT_TRUE(h.is_hermitian(1e-12));
    }
  }
}

TEST(Hamiltonian, StepOneMatrixElements) {
  const SpaceLayout l;
  const Operator h = build_hamiltonian(l, DeviceParams{}, {13.0, 0.0, 6.65});
  const int r1 = l.index({1, 0, 0, Level::g}), bus = l.index({0, 1, 0, Level::g}), q = l.index({0, 0, 0, Level::e});
  EXPECT_NEAR(h(bus, r1).real(), 13.0 * kMhz, 1e-15);
  EXPECT_NEAR(h(q, bus).real(), 13.0 * kMhz, 1e-15);
  EXPECT_EQ(h(q, r1), Complex(0.0));
}

TEST(Hamiltonian, DetunedQutritDiagonal) {
  const SpaceLayout l;
  const Operator h = build_hamiltonian(l, DeviceParams{}, {0.0, 0.0, 5.0});
  EXPECT_NEAR(h(l.index({0, 0, 0, Level::e}), l.index({0, 0, 0, Level::e})).real(), 2.0 * kPi * (5.0 - 6.65), 1e-12);
  EXPECT_NEAR(h(l.index({0, 0, 0, Level::f}), l.index({0, 0, 0, Level::f})).real(),
              2.0 * kPi * (2 * (5.0 - 6.65) - 0.72), 1e-12);
}

TEST(Hamiltonian, ResonantAndUncoupledVanishesOnSingleExcitations) {
  const SpaceLayout l;
  DeviceParams d;
  d.g_ge_mhz = 0.0;
  const Operator h = build_hamiltonian(l, d, {0.0, 0.0, 6.65});
  for (int i = 0; i < l.total_dim(); ++i)
    for (int j = 0; j < l.total_dim(); ++j)
      if (l.excitations(i) <= 1 && l.excitations(j) <= 1) EXPECT_EQ(h(i, j), Complex(0.0));
}

TEST(Hamiltonian, FreePartIsTheDiagonal) {
  const SpaceLayout l;
  const DeviceParams d;
  const ControlKnobs k{20.0, 30.0, 5.0};
  const Matrix h = build_hamiltonian(l, d, k).matrix();
  const Matrix h0 = free_hamiltonian(l, d, k).matrix();
  EXPECT_EQ(max_abs(Matrix(h.diagonal().asDiagonal()) - h0), 0.0);
}

TEST(Dissipators, SevenChannelsInFixedOrder) {
  const SpaceLayout l;
  const DeviceParams d;
  const auto ch = build_dissipators(l, d);
  ASSERT_EQ(ch.size(), 7u);
  const oracle::Space s{3, 3, 3};
  const auto ref = oracle::jumps(s, to_oracle(d, {}));
  for (int k = 0; k < 7; ++k) {
    EXPECT_EQ(max_abs(ch[k].op.matrix() - ref[k].first), 0.0) << ch[k].name;
    EXPECT_DOUBLE_EQ(ch[k].rate_per_ns, ref[k].second) << ch[k].name;
  }
  EXPECT_DOUBLE_EQ(ch[0].rate_per_ns, 0.02e-3);  // kappa^-1 = 50 us
  EXPECT_TRUE(active_channels(build_dissipators(l, lossless())).empty());
}

TEST(Dissipators, QualityFactorOfTenMicrosecondLifetime) {
  DeviceParams d;
  d.set_lifetimes(10.0, 50.0);
  const double kappa_per_s = d.kappa_1 * 1e6;
  const double q = 2.0 * kPi * 6.65e9 / kappa_per_s;
  EXPECT_NEAR(q, 4.2e5, 0.05e5);
}

TEST(Dissipators, NegativeRateIsRejected) {
  DeviceParams d;
  d.gamma_phi_f = -0.1;
  EXPECT_THROW(build_dissipators(SpaceLayout{}, d), InvalidParameter);
}

TEST(LindbladRhs, ClosedSystemIsCommutator) {
  std::mt19937_64 rng(5);
  const SpaceLayout l({2, 2, 2});
  const Operator h = build_hamiltonian(l, DeviceParams{}, {30.0, 10.0, 6.0});
  const Matrix rho = oracle::random_density(l.total_dim(), rng);
  const Matrix expect = Complex(0, -1) * (h.matrix() * rho - rho * h.matrix());
  EXPECT_LT(max_abs(lindblad_rhs(rho, h, {}) - expect), 1e-14);
}

TEST(LindbladRhs, TracelessHermitianAndMatchesSuperoperator) {
  std::mt19937_64 rng(6);
  const SpaceLayout l({2, 2, 2});
  DeviceParams d;
  d.set_lifetimes(0.3, 0.2);
  const ControlKnobs k{30.0, 10.0, 6.0};
  const Operator h = build_hamiltonian(l, d, k);
  const auto ch = build_dissipators(l, d);
  const oracle::Space s{2, 2, 2};
  const auto op = to_oracle(d, k);
  const oracle::M liouv = oracle::liouvillian(oracle::hamiltonian(s, op), oracle::jumps(s, op));
  for (int trial = 0; trial < 4; ++trial) {
    const Matrix rho = oracle::random_density(l.total_dim(), rng);
    const Matrix drho = lindblad_rhs(rho, h, ch);
    EXPECT_LT(std::abs(drho.trace()), 1e-14);
    EXPECT_LT(max_abs(drho - drho.adjoint()), 1e-14);
    const oracle::V ref = liouv * Eigen::Map<const oracle::V>(rho.data(), rho.size());
    EXPECT_LT(max_abs(drho - Eigen::Map<const oracle::M>(ref.data(), rho.rows(), rho.cols())), 1e-14);
  }
  EXPECT_THROW(lindblad_rhs(Matrix::Zero(3, 3), h, ch), DimensionMismatch);
}

TEST(Evolve, AmplitudeDampingOfOnePhoton) {
  const SpaceLayout l({2, 2, 2});
  DeviceParams d = lossless();
  d.g_ge_mhz = 0.0;
  d.kappa_1 = 20.0;  // 1/us -> 50 ns lifetime
  SolverOptions o;
  o.sample_every_ns = 5.0;
  const auto traj = evolve(DensityMatrix::from_pure(basis_state(l, 1, 0, 0, Level::g)), d,
                           one_segment(60.0, {0.0, 0.0, 6.65}), o);
  const int i1 = l.index({1, 0, 0, Level::g});
  for (std::size_t k = 0; k < traj.times_ns.size(); ++k)
    EXPECT_NEAR(traj.states[k](i1, i1).real(), std::exp(-0.02 * traj.times_ns[k]), 1e-9);
}

TEST(Evolve, VacuumIsStationary) {
  const SpaceLayout l;
  const auto vac = DensityMatrix::from_pure(basis_state(l, 0, 0, 0, Level::g));
  const ControlSchedule s{"mix", {{3.0, {50, 0, 5}, "a"}, {4.0, {13, 20, 6.65}, "b"}, {2.0, {0, 0, 7.37}, "c"}}};
  const auto traj = evolve(vac, lossless(), s);
  EXPECT_EQ(max_abs(traj.final_state().matrix() - vac.matrix()), 0.0);
}

TEST(Evolve, ResonantSwapPopulations) {
  const SpaceLayout l;
  DeviceParams d = lossless();
  d.g_ge_mhz = 0.0;
  SolverOptions o;
  o.sample_every_ns = 0.5;
  const double g = 20.0 * kMhz;
  const auto traj = evolve(DensityMatrix::from_pure(basis_state(l, 1, 0, 0, Level::g)), d,
                           one_segment(25.0, {20.0, 0.0, 6.65}), o);
  const int r = l.index({1, 0, 0, Level::g}), b = l.index({0, 1, 0, Level::g});
  for (std::size_t k = 0; k < traj.times_ns.size(); ++k) {
    const double t = traj.times_ns[k];
    EXPECT_NEAR(traj.states[k](r, r).real(), std::pow(std::cos(g * t), 2), 1e-9);
    EXPECT_NEAR(traj.states[k](b, b).real(), std::pow(std::sin(g * t), 2), 1e-9);
  }
}

TEST(Evolve, StepOneMovesThePhotonIntoTheQutrit) {
  const SpaceLayout l;
  const double t = kPi / (std::sqrt(2.0) * 13.0 * kMhz);
  const auto psi = propagate(basis_state(l, 1, 0, 0, Level::g), lossless(), one_segment(t, {13.0, 0.0, 6.65}));
  EXPECT_NEAR(std::abs(psi.amplitude({0, 0, 0, Level::e}) + 1.0), 0.0, 1e-8);
}

TEST(Evolve, MatchesSuperoperatorExponential) {
  const SpaceLayout l({2, 2, 2});
  const oracle::Space s{2, 2, 2};
  DeviceParams d;
  d.set_lifetimes(0.5, 0.3);
  d.gamma_ef = 7.0;
  std::mt19937_64 rng(8);
  const std::array<ControlKnobs, 3> knobs = {ControlKnobs{40, 10, 6.65}, ControlKnobs{13, 0, 5.5},
                                             ControlKnobs{0, 25, 7.37}};
  for (const auto& k : knobs) {
    const Matrix rho0 = oracle::random_density(l.total_dim(), rng);
    const double t = 12.5;
    const auto op = to_oracle(d, k);
    const oracle::M ref = oracle::evolve(oracle::liouvillian(oracle::hamiltonian(s, op), oracle::jumps(s, op)), rho0, t);
    // Tolerances tighter than the defaults so that the comparison resolves 1e-9.
    SolverOptions o;
    o.abs_tol = o.rel_tol = 1e-12;
    o.frame = Frame::rotating;
    const auto traj = evolve(DensityMatrix(l, rho0), d, one_segment(t, k), o);
    EXPECT_LT(max_abs(traj.final_state().matrix() - ref), 1e-9);

    // The interaction frame differs by exp(i H0 t) on both sides.
    const Matrix h0 = free_hamiltonian(l, d, k).matrix();
    const Matrix u = (Complex(0, 1) * t * h0).exp();
    o.frame = Frame::segment_interaction;
    const auto inter = evolve(DensityMatrix(l, rho0), d, one_segment(t, k), o);
    EXPECT_LT(max_abs(inter.final_state().matrix() - u * ref * u.adjoint()), 1e-9);
  }
}

TEST(Evolve, ExcitationRestrictionIsExact) {
  const SpaceLayout l;
  DeviceParams d;
  d.set_lifetimes(1.0, 0.5);
  std::mt19937_64 rng(9);
  Vector v = Vector::Zero(l.total_dim());
  for (auto b : {BasisLabel{1, 0, 0, Level::g}, BasisLabel{0, 0, 1, Level::g}, BasisLabel{1, 0, 1, Level::g},
                 BasisLabel{0, 0, 0, Level::g}})
    v(l.index(b)) = oracle::random_state(1, rng)(0);
  const auto rho0 = DensityMatrix::from_pure(PureState::normalized(l, v));
  const ControlSchedule s{"two", {{6.0, {13, 0, 6.65}, "i"}, {5.0, {0, 50, 5}, "ii"}, {4.0, {0, 0, 7.37}, "iii"}}};
  SolverOptions restricted, full;
  full.restrict_excitations = false;
  const auto a = evolve(rho0, d, s, restricted);
  const auto b = evolve(rho0, d, s, full);
  EXPECT_EQ(a.integrated_dim, 15);
  EXPECT_EQ(b.integrated_dim, 81);
  EXPECT_LT(max_abs(a.final_state().matrix() - b.final_state().matrix()), 1e-9);
}

TEST(Evolve, ClosedSystemConservesEnergyWithinSegment) {
  const SpaceLayout l;
  const DeviceParams d = lossless();
  const ControlKnobs k{37.0, 21.0, 6.1};
  std::mt19937_64 rng(10);
  Vector v = Vector::Zero(l.total_dim());
  for (int i = 0; i < l.total_dim(); ++i)
    if (l.excitations(i) <= 2) v(i) = oracle::random_state(1, rng)(0);
  SolverOptions o;
  o.frame = Frame::rotating;
  o.sample_every_ns = 1.0;
  const auto traj = evolve(DensityMatrix::from_pure(PureState::normalized(l, v)), d, one_segment(20.0, k), o);
  const Operator h = build_hamiltonian(l, d, k);
  const double norm = h.matrix().operatorNorm();
  const double e0 = traj.states.front().expectation(h).real();
  for (const auto& rho : traj.states) EXPECT_LE(std::abs(rho.expectation(h).real() - e0), 1e-8 * norm);
}

TEST(Evolve, PurityNonIncreasingUnderWeakDecay) {
  // Default rates over a protocol-length window: purity only falls.
  const SpaceLayout l;
  DeviceParams d;
  d.g_ge_mhz = 0.0;
  SolverOptions o;
  o.sample_every_ns = 2.0;
  Vector v = Vector::Zero(l.total_dim());
  v(l.index({1, 0, 0, Level::g})) = 1.0;
  v(l.index({0, 0, 0, Level::e})) = Complex(0.0, 1.0);
  const auto traj = evolve(DensityMatrix::from_pure(PureState::normalized(l, v)), d,
                           one_segment(100.0, {0.0, 0.0, 6.65}), o);
  const auto& p = traj.observables.at("purity");
  for (std::size_t k = 1; k < p.size(); ++k) EXPECT_LE(p[k], p[k - 1] + 1e-13);
  EXPECT_LT(p.back(), p.front());
}

TEST(Evolve, PurityRecoversPastHalfDecay) {
  // Decay of a single photon toward vacuum: Tr rho^2 = p^2 + (1-p)^2 with
  // p = exp(-kappa t), minimal at p = 1/2 and back to 1 as t grows.
  const SpaceLayout l({2, 2, 2});
  DeviceParams d = lossless();
  d.g_ge_mhz = 0.0;
  d.kappa_1 = 50.0;
  SolverOptions o;
  o.sample_every_ns = 5.0;
  const auto traj = evolve(DensityMatrix::from_pure(basis_state(l, 1, 0, 0, Level::g)), d,
                           one_segment(100.0, {0.0, 0.0, 6.65}), o);
  for (std::size_t k = 0; k < traj.times_ns.size(); ++k) {
    const double p = std::exp(-0.05 * traj.times_ns[k]);
    EXPECT_NEAR(traj.observables.at("purity")[k], p * p + (1 - p) * (1 - p), 1e-9);
  }
}

TEST(Evolve, TrajectoryBookkeeping) {
  const SpaceLayout l;
  SolverOptions o;
  o.sample_every_ns = 1.5;
  const ControlSchedule s{"two", {{4.0, {50, 0, 5}, "i"}, {3.0, {0, 50, 5}, "ii"}}};
  const auto traj = evolve(DensityMatrix::from_pure(basis_state(l, 1, 0, 0, Level::g)), DeviceParams{}, s, o);
  ASSERT_EQ(traj.times_ns.size(), traj.states.size());
  EXPECT_EQ(traj.times_ns.front(), 0.0);
  EXPECT_DOUBLE_EQ(traj.times_ns.back(), 7.0);
  for (std::size_t k = 1; k < traj.times_ns.size(); ++k) EXPECT_GT(traj.times_ns[k], traj.times_ns[k - 1]);
  EXPECT_EQ(traj.observables.at("trace").size(), traj.times_ns.size());
  EXPECT_LE(traj.worst.trace_error, 1e-9);
  EXPECT_LE(traj.worst.hermiticity_error, 1e-10);
  EXPECT_GE(traj.worst.min_eigenvalue, -1e-8);
  EXPECT_GT(traj.rhs_evaluations, 0);
}

TEST(Evolve, RungeKuttaMethodsAgree) {
  const SpaceLayout l;
  const ControlSchedule s{"two", {{5.0, {50, 0, 5}, "i"}, {5.0, {0, 50, 5}, "ii"}}};
  Vector v = Vector::Zero(l.total_dim());
  v(l.index({0, 0, 0, Level::g})) = 1.0;
  v(l.index({1, 0, 0, Level::g})) = 1.0;
  const auto rho0 = DensityMatrix::from_pure(PureState::normalized(l, v));
  SolverOptions rk4;
  rk4.method = Method::rk4;
  const auto a = evolve(rho0, DeviceParams{}, s);
  const auto b = evolve(rho0, DeviceParams{}, s, rk4);
  EXPECT_LT(max_abs(a.final_state().matrix() - b.final_state().matrix()), 1e-9);
}

TEST(Evolve, ScheduleAndOptionErrors) {
  const SpaceLayout l;
  const auto rho = DensityMatrix::from_pure(basis_state(l, 1, 0, 0, Level::g));
  EXPECT_THROW(evolve(rho, DeviceParams{}, ControlSchedule{"empty", {}}), DegenerateSchedule);
  EXPECT_THROW(evolve(rho, DeviceParams{}, one_segment(0.0, {})), DegenerateSchedule);
  EXPECT_THROW(evolve(rho, DeviceParams{}, one_segment(-1.0, {})), DegenerateSchedule);
  EXPECT_THROW(evolve(rho, DeviceParams{}, one_segment(1.0, {60.0, 0, 5})), InvalidParameter);
  SolverOptions bad;
  bad.abs_tol = 0.0;
  EXPECT_THROW(evolve(rho, DeviceParams{}, one_segment(1.0, {}), bad), InvalidParameter);
}

TEST(Evolve, SolverFailureCarriesSegmentAndTime) {
  const SpaceLayout l;
  const auto rho = DensityMatrix::from_pure(basis_state(l, 1, 0, 0, Level::g));
  const ControlSchedule s{"two", {{5.0, {50, 0, 5}, "i"}, {10.0, {0, 50, 5}, "ii"}}};
  SolverOptions o;
  o.max_steps = 700;  // per segment: enough for 5 ns at the 0.01 ns step cap, not 10 ns
  try {
    evolve(rho, DeviceParams{}, s, o);
    FAIL() << "expected a solver error";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.segment(), 1);
    EXPECT_GT(e.time_ns(), 5.0);
    EXPECT_LT(e.time_ns(), 15.0);
  }
}

TEST(Propagate, ClosedSystemMatchesEvolve) {
  const SpaceLayout l;
  std::mt19937_64 rng(12);
  Vector v = Vector::Zero(l.total_dim());
  for (int i = 0; i < l.total_dim(); ++i)
    if (l.excitations(i) <= 2) v(i) = oracle::random_state(1, rng)(0);
  const PureState psi0 = PureState::normalized(l, v);
  const ControlSchedule s{"three", {{6.0, {13, 0, 6.65}, "i"}, {5.0, {0, 50, 5}, "ii"}, {4.0, {0, 0, 7.37}, "iii"}}};
  SolverOptions o;
  o.abs_tol = o.rel_tol = 1e-12;
  const auto psi = propagate(psi0, DeviceParams{}, s, o);  // rates ignored
  const auto rho = evolve(DensityMatrix::from_pure(psi0), lossless(), s, o);
  EXPECT_LT(max_abs(rho.final_state().matrix() - psi.amplitudes() * psi.amplitudes().adjoint()), 1e-9);
}

TEST(ValidateFrame, Examples) {
  const SpaceLayout l;
  const DeviceParams d;
  EXPECT_LE(validate_frame(l, d, {0.0, 0.0, 6.65}, 10.0), 1e-8);
  EXPECT_LE(validate_frame(l, d, {13.0, 0.0, 6.65}, 10.0), 1e-8);
  EXPECT_LE(validate_frame(l, d, {0.0, 0.0, 5.0}, 10.0), 1e-6);
  EXPECT_LE(validate_frame(l, d, {50.0, 0.0, 5.0}, 10.0), 1e-6);
  DeviceParams off = d;
  off.g_ge_mhz = 0.0;
  EXPECT_LE(validate_frame(l, off, {0.0, 0.0, 5.0}, 10.0), 1e-9);
}
