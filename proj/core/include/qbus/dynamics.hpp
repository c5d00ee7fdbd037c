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

#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qbus/fockspace.hpp"

namespace qbus {

/// Physical constants of the processor. Frequencies are omega/2pi (GHz for
/// mode and qutrit frequencies, MHz for couplings); rates are in 1/us.
struct DeviceParams {
  double omega_bus_ghz = 6.65;
  std::array<double, 2> omega_res_ghz = {6.65, 6.65};
  double g_ge_mhz = 13.0;
  double delta_ghz = 0.72;  // anharmonicity omega_ge - omega_ef
  double g_max_mhz = 50.0;
  /// Allowed spread of qutrit g<->e frequencies within one schedule.
  double qutrit_tuning_span_ghz = 2.5;

  double kappa_1 = 0.02;
  double kappa_2 = 0.02;
  double kappa_bus = 0.02;
  double gamma_ge = 0.02;
  double gamma_ef = 0.01;
  double gamma_phi_e = 0.02;
  double gamma_phi_f = 0.02;

  double g_ef_mhz() const { return std::numbers::sqrt2 * g_ge_mhz; }

  /// kappa_1 = kappa_2 = kappa_R = 1/kappa_inv; gamma_ge = gamma_phi_e =
  /// gamma_phi_f = 1/gamma_inv and gamma_ef = 1/(2 gamma_inv). Pass infinity
  /// for a lossless element.
  DeviceParams& set_lifetimes(double kappa_inv_us, double gamma_inv_us);
  DeviceParams& set_lossless();

  /// Throws InvalidParameter on negative rates or non-positive frequencies.
  void validate() const;
};

/// Tunable control knobs held constant during one schedule segment.
struct ControlKnobs {
  double g1_mhz = 0.0;
  double g2_mhz = 0.0;
  double omega_ge_ghz = 5.0;

  double omega_ef_ghz(const DeviceParams& dev) const { return omega_ge_ghz - dev.delta_ghz; }

  /// 0 <= g_j <= g_max and both qutrit transitions at positive frequency.
  void validate(const DeviceParams& dev) const;

  friend bool operator==(const ControlKnobs&, const ControlKnobs&) = default;
};

struct Segment {
  double duration_ns = 0.0;
  ControlKnobs knobs;
  std::string step;  // "i", "ii", ... for printing
};

/// Piecewise-constant control sequence; knobs switch instantaneously.
struct ControlSchedule {
  std::string label;
  std::vector<Segment> segments;

  double total_duration_ns() const;
  /// Highest minus lowest qutrit g<->e frequency used.
  double qutrit_span_ghz() const;
  /// Nonempty, positive finite durations, valid knobs.
  void validate(const DeviceParams& dev) const;
};

enum class Method { rk45, rk4 };

/// Frame in which states are reported and carried across segment boundaries.
///   segment_interaction: interaction picture of each segment's free part
///     (detunings), restarted at every segment; this is the frame of the
///     e^{i Delta t} Hamiltonian and of the step-by-step protocol kets.
///   rotating: everything rotates at omega_R, no per-segment correction.
enum class Frame { segment_interaction, rotating };

struct SolverOptions {
  Method method = Method::rk45;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step_ns = 0.01;
  double dt_ns = 1e-3;           // fixed-step RK4
  double sample_every_ns = 0.0;  // 0: initial and final state only
  Frame frame = Frame::segment_interaction;
  /// Integrate only on basis states with at most as many excitations as the
  /// initial state carries. Exact: H conserves the excitation number and no
  /// jump operator raises it.
  bool restrict_excitations = true;
  bool check_physicality = true;
  PhysicalityTolerance tolerance;
  long max_steps = 50'000'000;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times_ns;
  std::vector<DensityMatrix> states;
  std::map<std::string, std::vector<double>> observables;  // "trace", "purity"
  PhysicalityReport worst;  // worst value of each check over all samples
  long rhs_evaluations = 0;
  long steps_accepted = 0;
  long steps_rejected = 0;
  int integrated_dim = 0;

  const DensityMatrix& final_state() const { return states.back(); }
};

struct DissipationChannel {
  std::string name;
  Operator op;
  double rate_per_ns;
};

/// Hamiltonian in the frame rotating at omega_R, in rad/ns.
Operator build_hamiltonian(const SpaceLayout& layout, const DeviceParams& dev, const ControlKnobs& knobs);

/// Diagonal detuning part of build_hamiltonian; generates the frame change
/// between the rotating frame and the segment interaction picture.
Operator free_hamiltonian(const SpaceLayout& layout, const DeviceParams& dev, const ControlKnobs& knobs);

/// The seven channels of the master equation, in fixed order: r1, r2, R decay,
/// e->g, f->e relaxation, e and f dephasing. Zero-rate channels are included.
std::vector<DissipationChannel> build_dissipators(const SpaceLayout& layout, const DeviceParams& dev);

/// Channels with nonzero rate.
std::vector<DissipationChannel> active_channels(std::vector<DissipationChannel> channels);

/// drho/dt = -i[H, rho] + sum_k rate_k (L rho L^dag - {L^dag L, rho}/2).
/// Plain dense reference implementation.
Matrix lindblad_rhs(const Matrix& rho, const Operator& hamiltonian, std::span<const DissipationChannel> channels);

/// Integrate the master equation over the schedule, segment by segment.
/// Throws SolverError on step failure or a physicality violation at a sample.
Trajectory evolve(const DensityMatrix& rho0, const DeviceParams& dev, const ControlSchedule& schedule,
                  const SolverOptions& opts = {});

/// Closed-system counterpart of evolve for state vectors (all rates ignored).
/// Uses the same integrator, frame handling, and excitation restriction.
PureState propagate(const PureState& psi0, const DeviceParams& dev, const ControlSchedule& schedule,
                    const SolverOptions& opts = {});

/// Integrates the explicitly time-dependent interaction-picture Hamiltonian
/// (couplings carrying e^{+-i Delta t}) and compares it against the
/// rotating-frame propagation mapped through e^{i H0 t}. Returns the largest
/// amplitude deviation over a fixed probe state with up to two excitations,
/// checked every nanosecond of t_span.
double validate_frame(const SpaceLayout& layout, const DeviceParams& dev, const ControlKnobs& knobs,
                      double t_span_ns);

}  // namespace qbus
