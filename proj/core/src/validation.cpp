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

#include "qbus/validation.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "qbus/analytic.hpp"
#include "qbus/units.hpp"

namespace qbus {

namespace {

using AnalyticMap = std::function<Vector(const Vector& in, double t_ns)>;

/// One segment type: the basis kets the closed form covers, the knobs, and
/// the closed-form map on amplitudes over those kets.
struct Case {
  std::string name;
  SpaceLayout layout;
  DeviceParams dev;
  ControlKnobs knobs;
  std::vector<BasisLabel> kets;
  AnalyticMap exact;
};

OracleCheck run_case(const Case& c, int trials, std::mt19937_64& rng, const SolverOptions& opts) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> duration(0.5, 60.0);
  OracleCheck out{c.name, 0.0, trials};
  const int n = c.layout.total_dim();
  const int k = static_cast<int>(c.kets.size());

  for (int trial = 0; trial < trials; ++trial) {
    Vector in(k);
    for (int i = 0; i < k; ++i) in(i) = Complex(normal(rng), normal(rng));
    in.normalize();
    const double t = duration(rng);

    Vector full_in = Vector::Zero(n), full_exact = Vector::Zero(n);
    const Vector exact = c.exact(in, t);
    for (int i = 0; i < k; ++i) {
      full_in(c.layout.index(c.kets[i])) = in(i);
      full_exact(c.layout.index(c.kets[i])) = exact(i);
    }
    const PureState psi0(c.layout, full_in);
    const ControlSchedule single{c.name, {{t, c.knobs, "probe"}}};

    const PureState psi = propagate(psi0, c.dev, single, opts);
    out.deviation = std::max(out.deviation, (psi.amplitudes() - full_exact).cwiseAbs().maxCoeff());

    const Trajectory traj = evolve(DensityMatrix::from_pure(psi0), c.dev, single, opts);
    const Matrix rho_exact = full_exact * full_exact.adjoint();
    out.deviation = std::max(out.deviation, max_abs(traj.final_state().matrix() - rho_exact));
  }
  return out;
}

}  // namespace

std::vector<OracleCheck> oracle_checks(const DeviceParams& dev_in, int trials, std::uint64_t seed,
                                       const SolverOptions& opts) {
  using analytic::jc_index;
  DeviceParams dev = dev_in;
  dev.set_lossless();
  const double w_r = dev.omega_bus_ghz;
  const double g_ge = units::mhz_to_rad_per_ns(dev.g_ge_mhz);
  const double g_ef = units::mhz_to_rad_per_ns(dev.g_ef_mhz());
  const double g_swap_mhz = std::min(50.0, dev.g_max_mhz);
  const double g_swap = units::mhz_to_rad_per_ns(g_swap_mhz);
  const SpaceLayout full({3, 3, 3});

  DeviceParams uncoupled_qutrit = dev;
  uncoupled_qutrit.g_ge_mhz = 0.0;

  std::vector<Case> cases;
  for (int j = 0; j < 2; ++j) {
    const BasisLabel in_res = j == 0 ? BasisLabel{1, 0, 0, Level::g} : BasisLabel{0, 0, 1, Level::g};
    ControlKnobs knobs{j == 0 ? g_swap_mhz : 0.0, j == 0 ? 0.0 : g_swap_mhz, 5.0};
    // swap_state covers cos(theta)|vac> + sin(theta)|0_R 1_j>; use its
    // linearity in the two input amplitudes, with the |1_R 0_j> input mapped by
    // exchange symmetry of the resonant beam-splitter.
    cases.push_back({j == 0 ? "swap r1-R" : "swap r2-R", full, uncoupled_qutrit, knobs,
                     {{0, 0, 0, Level::g}, in_res, {0, 1, 0, Level::g}},
                     [g_swap](const Vector& in, double t) {
                       const auto from_res = analytic::swap_state(std::numbers::pi / 2, g_swap, t);
                       Vector out(3);
                       out(0) = in(0);
                       out(1) = from_res.in_resonator * in(1) + from_res.in_bus * in(2);
                       out(2) = from_res.in_bus * in(1) + from_res.in_resonator * in(2);
                       return out;
                     }});
  }

  cases.push_back({"three-level chain", full, dev, {dev.g_ge_mhz, 0.0, w_r},
                   {{1, 0, 0, Level::g}, {0, 1, 0, Level::g}, {0, 0, 0, Level::e}, {0, 0, 0, Level::g}},
                   [g_ge](const Vector& in, double t) {
                     const auto u = analytic::three_level_chain(g_ge, g_ge, t).unitary;
                     Vector out = in;
                     out.head<3>() = u * in.head<3>();
                     return out;
                   }});

  cases.push_back({"jc g-e resonant", full, dev, {0.0, 0.0, w_r},
                   {{0, 0, 0, Level::g}, {0, 1, 0, Level::g}, {0, 0, 0, Level::e}},
                   [g_ge](const Vector& in, double t) {
                     const Matrix u = analytic::jc_propagator(analytic::Transition::ge, g_ge, t, 1);
                     const int idx[3] = {jc_index(0, Level::g), jc_index(1, Level::g), jc_index(0, Level::e)};
                     Vector out(3);
                     for (int r = 0; r < 3; ++r) {
                       out(r) = 0.0;
                       for (int c = 0; c < 3; ++c) out(r) += u(idx[r], idx[c]) * in(c);
                     }
                     return out;
                   }});

  // A one-photon bus removes |2_R, g>, the only state through which g<->e
  // would mix into the e<->f exchange.
  cases.push_back({"jc e-f resonant", SpaceLayout({2, 2, 2}), dev, {0.0, 0.0, w_r + dev.delta_ghz},
                   {{0, 0, 0, Level::g}, {0, 1, 0, Level::e}, {0, 0, 0, Level::f}},
                   [g_ef](const Vector& in, double t) {
                     const Matrix u = analytic::jc_propagator(analytic::Transition::ef, g_ef, t, 1);
                     const int idx[3] = {jc_index(0, Level::g), jc_index(1, Level::e), jc_index(0, Level::f)};
                     Vector out(3);
                     for (int r = 0; r < 3; ++r) {
                       out(r) = 0.0;
                       for (int c = 0; c < 3; ++c) out(r) += u(idx[r], idx[c]) * in(c);
                     }
                     return out;
                   }});

  for (double park : {5.0, w_r + dev.delta_ghz}) {
    const double detuning = units::ghz_to_rad_per_ns(park - w_r);
    cases.push_back({"detuned rabi at " + std::to_string(park).substr(0, 4) + " GHz", full, dev, {0.0, 0.0, park},
                     {{0, 0, 0, Level::g}, {0, 0, 0, Level::e}, {0, 1, 0, Level::g}},
                     [g_ge, detuning](const Vector& in, double t) {
                       analytic::RabiAmplitudes c0;
                       c0.n = 0;
                       c0.g = g_ge;
                       c0.delta = detuning;
                       c0.c_e_n = in(1);
                       c0.c_g_n1 = in(2);
                       const auto c = analytic::rabi_evolve(c0, t);
                       Vector out(3);
                       out << in(0), c.c_e_n, c.c_g_n1;
                       return out;
                     }});
  }

  std::mt19937_64 rng(seed);
  std::vector<OracleCheck> out;
  for (const auto& c : cases) out.push_back(run_case(c, trials, rng, opts));
  return out;
}

std::vector<FrameCheck> frame_checks(const DeviceParams& dev, double t_span_ns) {
  const double w_r = dev.omega_bus_ghz;
  const double g_swap = std::min(50.0, dev.g_max_mhz);
  std::vector<FrameCheck> checks = {
      {"all off, qutrit resonant", {0.0, 0.0, w_r}, t_span_ns, 0.0},
      {"all off, qutrit parked", {0.0, 0.0, 5.0}, t_span_ns, 0.0},
      {"chain r1-R-q", {dev.g_ge_mhz, 0.0, w_r}, t_span_ns, 0.0},
      {"swap r1-R, parked", {g_swap, 0.0, 5.0}, t_span_ns, 0.0},
      {"swap r2-R, parked", {0.0, g_swap, 5.0}, t_span_ns, 0.0},
      {"e-f resonance", {0.0, 0.0, w_r + dev.delta_ghz}, t_span_ns, 0.0},
  };
  const SpaceLayout layout({3, 3, 3});
  for (auto& c : checks) c.deviation = validate_frame(layout, dev, c.knobs, c.t_span_ns);
  return checks;
}

}  // namespace qbus
