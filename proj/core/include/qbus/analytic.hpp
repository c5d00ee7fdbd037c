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

#include <Eigen/Dense>

#include "qbus/dynamics.hpp"
#include "qbus/fockspace.hpp"

// Closed-form Jaynes-Cummings results used as an independent check on the
// numerical integrator. All couplings, detunings and times here are angular
// (rad/ns) and ns. Amplitudes are interaction-picture amplitudes.
namespace qbus::analytic {

/// Amplitudes of the pair {|e, n>, |g, n+1>} coupled by g (a sigma+ + h.c.)
/// with detuning delta = omega_q - omega_r.
struct RabiAmplitudes {
  Complex c_e_n{1.0, 0.0};
  Complex c_g_n1{0.0, 0.0};
  int n = 0;
  double g = 0.0;
  double delta = 0.0;

  /// Omega = sqrt(4 g^2 (n+1) + delta^2)
  double omega_rabi() const;
};

/// Exact solution of the two-amplitude problem after time t, including the
/// e^{+-i delta t/2} phases. The exchange coupling is g sqrt(n+1). The
/// phases refer to absolute time, so amplitudes given at t0 != 0 need t0 to
/// continue a run: rabi_evolve(rabi_evolve(c, t1), t2, t1) equals
/// rabi_evolve(c, t1 + t2).
RabiAmplitudes rabi_evolve(const RabiAmplitudes& c0, double t_ns, double t0_ns = 0.0);

/// Amplitudes on {|0>_R|0>_j, |0>_R|1>_j, |1>_R|0>_j}.
struct SwapAmplitudes {
  Complex vacuum;
  Complex in_resonator;  // |0>_R |1>_j
  Complex in_bus;        // |1>_R |0>_j
};

/// Resonant bus-resonator exchange applied to cos(theta)|0,0> + sin(theta)|0,1>.
SwapAmplitudes swap_state(double theta, double g_j, double t_ns);

enum class Transition { ge, ef };

/// Index of |n>_R |level> in the bus (x) qutrit space used by jc_propagator.
constexpr int jc_index(int n, Level level) { return 3 * n + static_cast<int>(level); }

/// exp(-i t g (a sigma+ + a^dag sigma-)) for one resonant qutrit transition
/// on a bus truncated at n_max photons; dimension 3 (n_max + 1).
Matrix jc_propagator(Transition which, double g, double t_ns, int n_max);

struct ChainPropagator {
  Eigen::Matrix3cd unitary;
  bool equal_couplings = true;
};

/// Propagator of the resonant chain |1,0,g> - |0,1,g> - |0,0,e> with
/// couplings g1 (r1-R) and g_ge (R-q), in closed form.
ChainPropagator three_level_chain(double g1, double g_ge, double t_ns);

/// exp(-i h t) for Hermitian h, via its eigendecomposition.
Matrix hermitian_expm(const Matrix& h, double t_ns);

/// Propagator of one segment keeping only the resonant exchange terms
/// (|Delta| below 1 kHz) and no detuning phases: the idealised step the
/// protocols are designed around.
Operator resonant_propagator(const SpaceLayout& layout, const DeviceParams& dev, const ControlKnobs& knobs,
                             double t_ns);

/// Product of resonant_propagator over the schedule, later segments on the left.
Operator compose_resonant(const SpaceLayout& layout, const DeviceParams& dev, const ControlSchedule& schedule);

/// Basis indices of |n1>_1 |0>_R |n2>_2 |g> in the order 00, 01, 10, 11.
std::array<int, 4> logical_indices(const SpaceLayout& layout);

/// 4x4 block of an operator or density matrix on the logical subspace.
Eigen::Matrix4cd logical_block(const Matrix& m, const SpaceLayout& layout);

/// diag(1, -1, 1, 1) in the order 00, 01, 10, 11.
Eigen::Matrix4cd cphase_target();

/// Max-entry distance between `block` and e^{i phi} target, minimised over
/// the global phase phi (fitted from the trace overlap).
double distance_up_to_phase(const Eigen::Matrix4cd& block, const Eigen::Matrix4cd& target);

}  // namespace qbus::analytic
