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

#include <limits>
#include <numbers>

// Inputs follow the lab convention: frequencies quoted as omega/2pi in GHz or
// MHz, lifetimes in microseconds. Internally everything is angular frequency
// in rad/ns and time in ns.
namespace qbus::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double ghz_to_rad_per_ns(double ghz) { return two_pi * ghz; }
constexpr double mhz_to_rad_per_ns(double mhz) { return two_pi * mhz * 1e-3; }

/// Rate in 1/us to rate in 1/ns.
constexpr double per_us_to_per_ns(double rate) { return rate * 1e-3; }

/// Lifetime in us to rate in 1/us; an infinite lifetime means no decay.
constexpr double lifetime_to_rate(double lifetime_us) {
  if (lifetime_us == std::numeric_limits<double>::infinity()) return 0.0;
  return 1.0 / lifetime_us;
}

/// Inverse of lifetime_to_rate; a zero rate maps to an infinite lifetime.
constexpr double rate_to_lifetime(double rate_per_us) {
  if (rate_per_us == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / rate_per_us;
}

}  // namespace qbus::units
