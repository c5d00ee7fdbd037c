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

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbus/dynamics.hpp"
#include "qbus/fockspace.hpp"

namespace qbus {

/// P(t) = <psi|rho(t)|psi> at every sample of the trajectory.
std::vector<double> population(const Trajectory& traj, const PureState& target);

/// F = <psi|rho|psi>.
double state_fidelity(const DensityMatrix& rho, const PureState& target);

enum class FidelityKind { state, average_gate };

struct SolverSummary {
  long rhs_evaluations = 0;
  long steps_accepted = 0;
  long steps_rejected = 0;
  int integrated_dim = 0;
  PhysicalityReport worst{0.0, 0.0, 1.0};
};

struct FidelityReport {
  double value = 0.0;
  FidelityKind kind = FidelityKind::state;
  int grid_n = 0;
  std::string schedule_label;
  double duration_ns = 0.0;
  SolverSummary solver;
};

/// Maps an input product state to the output density matrix of the gate.
using GateChannel = std::function<DensityMatrix(const PureState&)>;

/// Uniform-grid average of <Psi_ideal|rho|Psi_ideal> over theta1, theta2 in
/// [0, 2pi), theta_k = 2 pi k / grid_n, with Psi_ideal the c-phase image of
/// the input. Points run on up to `threads` workers; the sum is always taken
/// in grid order. Solver errors are rethrown tagged with (theta1, theta2).
FidelityReport average_gate_fidelity(const SpaceLayout& layout, const GateChannel& channel, int grid_n, int threads = 1);

/// Same, with one full master-equation evolution per grid point.
FidelityReport average_gate_fidelity(const SpaceLayout& layout, const DeviceParams& dev,
                                     const ControlSchedule& schedule, int grid_n, const SolverOptions& opts = {},
                                     int threads = 1);

struct SweepPoint {
  double x = 0.0;
  double fidelity = 0.0;
  double g_ge_mhz = 0.0;
  double duration_ns = 0.0;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepPoint> points;  // sorted on x
  std::vector<std::string> notes;
};

struct SweepOptions {
  SpaceLayout layout{{3, 3, 3}};
  int grid_n = 16;
  SolverOptions solver;
  int threads = 1;
  /// Per-point g_ge overrides (key: axis value).
  std::map<double, double> g_ge_override;
};

/// g_ge paired with each lifetime in the kappa = Gamma study: 10, 20, 30,
/// 40, 50 us -> 22, 19, 13, 13, 13 MHz. Other lifetimes use the nearest entry.
double paired_g_ge_mhz(double gamma_inv_us);

/// Average gate fidelity of the five-step gate vs kappa^{-1} = Gamma^{-1}.
SweepResult sweep_kappa_gamma(const DeviceParams& base, std::vector<double> gamma_inv_us,
                              const SweepOptions& opts = {});

/// Average gate fidelity of the five-step gate vs anharmonicity delta (GHz).
SweepResult sweep_delta(const DeviceParams& base, std::vector<double> deltas_ghz, const SweepOptions& opts = {});

/// Logical 4x4 block (bus vacuum, qutrit ground) for density-matrix plots.
Eigen::Matrix4cd logical_density_block(const DensityMatrix& rho);

/// Deterministic parallel map over [0, n): results land at their own index.
/// The exception of the lowest failing index is rethrown after all workers join.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace qbus
