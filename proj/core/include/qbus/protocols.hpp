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

#include <numbers>
#include <optional>
#include <string>

#include "qbus/dynamics.hpp"
#include "qbus/fockspace.hpp"

namespace qbus {

enum class ProtocolKind { state_transfer, cphase_5step, cphase_7step };

/// Second-step duration of the transfer: g2 t = pi/2 leaves a minus sign on
/// |1>_2, g2 t = 3 pi/2 does not.
enum class TransferVariant { sign_minus, sign_plus };

std::string to_string(ProtocolKind kind);
std::string to_string(TransferVariant variant);

/// Input angles of a protocol run. Transfer uses theta; the c-phase kinds use
/// theta1 (r1) and theta2 (r2).
struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::state_transfer;
  double theta = std::numbers::pi / 4;
  double theta1 = std::numbers::pi / 4;
  double theta2 = std::numbers::pi / 4;
  TransferVariant variant = TransferVariant::sign_minus;
};

struct CPhaseOptions {
  double swap_mhz = 50.0;  // bus-resonator coupling for the swap steps
  double park_ghz = 5.0;   // qutrit g<->e frequency while parked
  /// Qutrit g<->e frequency used for the e<->f resonance; defaults to
  /// omega_R + delta. Must satisfy omega - delta = omega_R.
  std::optional<double> ef_resonance_ghz;
};

/// Time for g t = phase, with g given as g/2pi in MHz.
double pulse_time_ns(double g_mhz, double phase);

/// Two resonant swaps r1 -> R -> r2 with the qutrit parked far off resonance.
/// Throws DegenerateSchedule for g_op <= 0, InvalidParameter above g_max.
ControlSchedule state_transfer_schedule(const DeviceParams& dev, double g_op_mhz = 50.0,
                                        TransferVariant variant = TransferVariant::sign_minus,
                                        double park_ghz = 5.0);

/// Five steps: r1 -> q chain with g1 = g_ge, r2 -> R swap, e<->f 2pi
/// rotation, R -> r2 swap, q -> r1 chain.
ControlSchedule cphase_schedule_5step(const DeviceParams& dev, const CPhaseOptions& opts = {});

/// Seven-step variant: r1 -> R, R -> q, r2 -> R, e<->f 2pi rotation, R -> r2,
/// q -> R, R -> r1. Durations are the resonant pulse times; the schedule is
/// rejected unless its ideal action is the c-phase gate.
ControlSchedule cphase_schedule_7step(const DeviceParams& dev, const CPhaseOptions& opts = {});

/// Deviation of the composed resonant propagators on the logical subspace
/// from diag(1, -1, 1, 1), up to a global phase.
double cphase_action_deviation(const DeviceParams& dev, const ControlSchedule& schedule,
                               const SpaceLayout& layout = SpaceLayout({3, 3, 3}));

PureState initial_state(const SpaceLayout& layout, const ProtocolSpec& spec);
PureState ideal_final_state(const SpaceLayout& layout, const ProtocolSpec& spec);

}  // namespace qbus
