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

#include <stdexcept>
#include <string>

namespace qbus {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Fock truncation below two levels.
class InvalidTruncation : public Error {
 public:
  using Error::Error;
};

/// A ladder operator requested on the qutrit, or similar.
class WrongSubsystem : public Error {
 public:
  using Error::Error;
};

/// An occupation number outside the truncated space.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Negative rate, non-positive frequency, coupling outside [0, g_max], ...
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Operands built on different layouts.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Schedule that cannot realize its protocol (zero coupling, empty list).
class DegenerateSchedule : public Error {
 public:
  using Error::Error;
};

/// The e<->f resonance step does not land on the bus frequency.
class MisconfiguredAnharmonicity : public Error {
 public:
  using Error::Error;
};

/// Integration failed. Carries the segment index and the time of failure.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, int segment, double time_ns)
      : Error(what + " (segment " + std::to_string(segment) + ", t = " +
              std::to_string(time_ns) + " ns)"),
        segment_(segment),
        time_ns_(time_ns) {}

  int segment() const noexcept { return segment_; }
  double time_ns() const noexcept { return time_ns_; }

 private:
  int segment_;
  double time_ns_;
};

}  // namespace qbus
