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

#include "qbus/protocols.hpp"

#include <cmath>

#include "qbus/analytic.hpp"
#include "qbus/errors.hpp"
#include "qbus/units.hpp"

namespace qbus {

namespace {

constexpr double kPi = std::numbers::pi;

void check_tuning_span(const DeviceParams& dev, const ControlSchedule& s) {
  if (s.qutrit_span_ghz() > dev.qutrit_tuning_span_ghz + 1e-9) {
    throw InvalidParameter("schedule '" + s.label + "' tunes the qutrit over " + std::to_string(s.qutrit_span_ghz()) +
                           " GHz, more than the " + std::to_string(dev.qutrit_tuning_span_ghz) + " GHz range");
  }
}

double ef_resonance(const DeviceParams& dev, const CPhaseOptions& opts) {
  const double f = opts.ef_resonance_ghz.value_or(dev.omega_bus_ghz + dev.delta_ghz);
  if (std::abs(f - dev.delta_ghz - dev.omega_bus_ghz) > 1e-9) {
    throw MisconfiguredAnharmonicity("e<->f step at omega_ge = " + std::to_string(f) + " GHz gives omega_ef = " +
                                     std::to_string(f - dev.delta_ghz) + " GHz, not the bus frequency " +
                                     std::to_string(dev.omega_bus_ghz) + " GHz");
  }
  return f;
}

void require_coupling(const char* what, double g_mhz) {
  if (!(g_mhz > 0.0)) throw DegenerateSchedule(std::string(what) + " must be positive to complete a swap");
}

}  // namespace

std::string to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::state_transfer: return "transfer";
    case ProtocolKind::cphase_5step: return "cphase5";
    case ProtocolKind::cphase_7step: return "cphase7";
  }
  return "?";
}

std::string to_string(TransferVariant variant) {
  return variant == TransferVariant::sign_minus ? "sign_minus" : "sign_plus";
}

double pulse_time_ns(double g_mhz, double phase) { return phase / units::mhz_to_rad_per_ns(g_mhz); }

ControlSchedule state_transfer_schedule(const DeviceParams& dev, double g_op_mhz, TransferVariant variant,
                                        double park_ghz) {
  require_coupling("g_op", g_op_mhz);
  const double second = variant == TransferVariant::sign_minus ? kPi / 2 : 3 * kPi / 2;
  ControlSchedule s;
  s.label = "transfer-" + to_string(variant);
  s.segments.push_back({pulse_time_ns(g_op_mhz, kPi / 2), {g_op_mhz, 0.0, park_ghz}, "i"});
  s.segments.push_back({pulse_time_ns(g_op_mhz, second), {0.0, g_op_mhz, park_ghz}, "ii"});
  s.validate(dev);
  check_tuning_span(dev, s);
  return s;
}

ControlSchedule cphase_schedule_5step(const DeviceParams& dev, const CPhaseOptions& opts) {
  require_coupling("g_ge", dev.g_ge_mhz);
  require_coupling("swap coupling", opts.swap_mhz);
  const double ef = ef_resonance(dev, opts);
  const double chain = pulse_time_ns(dev.g_ge_mhz, kPi / std::numbers::sqrt2);
  const double swap = pulse_time_ns(opts.swap_mhz, kPi / 2);
  const double phase = pulse_time_ns(dev.g_ef_mhz(), kPi);

  ControlSchedule s;
  s.label = "cphase5";
  s.segments = {
      {chain, {dev.g_ge_mhz, 0.0, dev.omega_bus_ghz}, "i"},
      {swap, {0.0, opts.swap_mhz, opts.park_ghz}, "ii"},
      {phase, {0.0, 0.0, ef}, "iii"},
      {swap, {0.0, opts.swap_mhz, opts.park_ghz}, "iv"},
      {chain, {dev.g_ge_mhz, 0.0, dev.omega_bus_ghz}, "v"},
  };
  s.validate(dev);
  check_tuning_span(dev, s);
  return s;
}

ControlSchedule cphase_schedule_7step(const DeviceParams& dev, const CPhaseOptions& opts) {
  require_coupling("g_ge", dev.g_ge_mhz);
  require_coupling("swap coupling", opts.swap_mhz);
  const double ef = ef_resonance(dev, opts);
  const double swap = pulse_time_ns(opts.swap_mhz, kPi / 2);
  const double load = pulse_time_ns(dev.g_ge_mhz, kPi / 2);
  const double phase = pulse_time_ns(dev.g_ef_mhz(), kPi);

  ControlSchedule s;
  s.label = "cphase7";
  s.segments = {
      {swap, {opts.swap_mhz, 0.0, opts.park_ghz}, "i"},
      {load, {0.0, 0.0, dev.omega_bus_ghz}, "ii"},
      {swap, {0.0, opts.swap_mhz, opts.park_ghz}, "iii"},
      {phase, {0.0, 0.0, ef}, "iv"},
      {swap, {0.0, opts.swap_mhz, opts.park_ghz}, "v"},
      {load, {0.0, 0.0, dev.omega_bus_ghz}, "vi"},
      {swap, {opts.swap_mhz, 0.0, opts.park_ghz}, "vii"},
  };
  s.validate(dev);
  check_tuning_span(dev, s);
  const double dev_action = cphase_action_deviation(dev, s);
  if (dev_action > 1e-10) {
    throw DegenerateSchedule("seven-step durations do not realize the c-phase gate (deviation " +
                             std::to_string(dev_action) + ")");
  }
  return s;
}

double cphase_action_deviation(const DeviceParams& dev, const ControlSchedule& schedule, const SpaceLayout& layout) {
  const Operator u = analytic::compose_resonant(layout, dev, schedule);
  return analytic::distance_up_to_phase(analytic::logical_block(u.matrix(), layout), analytic::cphase_target());
}

namespace {

std::array<double, 4> alphas(const ProtocolSpec& spec) {
  const double c1 = std::cos(spec.theta1), s1 = std::sin(spec.theta1);
  const double c2 = std::cos(spec.theta2), s2 = std::sin(spec.theta2);
  return {c1 * c2, c1 * s2, s1 * c2, s1 * s2};
}

PureState logical_state(const SpaceLayout& layout, const std::array<double, 4>& amps) {
  const auto idx = analytic::logical_indices(layout);
  Vector v = Vector::Zero(layout.total_dim());
  for (int k = 0; k < 4; ++k) v(idx[k]) = amps[k];
  return PureState::normalized(layout, std::move(v));
}

}  // namespace

PureState initial_state(const SpaceLayout& layout, const ProtocolSpec& spec) {
  if (spec.kind == ProtocolKind::state_transfer) {
    return logical_state(layout, {std::cos(spec.theta), 0.0, std::sin(spec.theta), 0.0});
  }
  return logical_state(layout, alphas(spec));
}

PureState ideal_final_state(const SpaceLayout& layout, const ProtocolSpec& spec) {
  if (spec.kind == ProtocolKind::state_transfer) {
    const double sign = spec.variant == TransferVariant::sign_minus ? -1.0 : 1.0;
    return logical_state(layout, {std::cos(spec.theta), sign * std::sin(spec.theta), 0.0, 0.0});
  }
  const auto a = alphas(spec);
  return logical_state(layout, {a[0], -a[1], a[2], a[3]});
}

}  // namespace qbus
