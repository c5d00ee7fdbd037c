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

#include <cstdint>
#include <string>
#include <vector>

#include "qbus/dynamics.hpp"

// Cross-checks between the numerical integrator and the closed-form results.
namespace qbus {

struct OracleCheck {
  std::string name;
  double deviation = 0.0;  // max amplitude / matrix-element error
  int trials = 0;
};

/// For every segment type the protocols use, integrate a single closed-system
/// segment from random superpositions over random durations and compare with
/// the matching closed-form propagator (resonant swap, three-level chain,
/// resonant g<->e and e<->f Jaynes-Cummings exchange, detuned Rabi
/// oscillation). Each case runs on the device with only the couplings the
/// closed form accounts for, both through propagate() (amplitudes) and
/// evolve() (density matrix).
std::vector<OracleCheck> oracle_checks(const DeviceParams& dev, int trials, std::uint64_t seed,
                                       const SolverOptions& opts = {});

struct FrameCheck {
  std::string name;
  ControlKnobs knobs;
  double t_span_ns = 0.0;
  double deviation = 0.0;
};

/// validate_frame on every knob setting appearing in the protocols plus the
/// all-off and resonant settings.
std::vector<FrameCheck> frame_checks(const DeviceParams& dev, double t_span_ns = 10.0);

}  // namespace qbus
