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

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbus/dynamics.hpp"
#include "qbus/protocols.hpp"

// Experiment configuration: an INI file with [device], [experiment], [solver]
// and [output] sections. Frequencies in GHz, couplings in MHz, lifetimes in
// microseconds ("inf" for a lossless element), angles in radians.
namespace qbus::cli {

enum class Experiment { transfer, cphase5, cphase7, sweep_kappa, sweep_delta, validate };

std::string to_string(Experiment e);

/// Thrown for malformed files and out-of-range fields; the message names the
/// line (syntax errors) or the section.key (field errors).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Expectation {
  std::optional<double> fidelity;
  double fidelity_tol = 0.0;
  std::optional<double> duration_ns;
  double duration_tol_ns = 0.0;
  std::optional<double> max_deviation;  // validate only

  friend bool operator==(const Expectation&, const Expectation&) = default;
};

struct ExperimentConfig {
  DeviceParams device;

  Experiment experiment = Experiment::transfer;
  double theta = std::numbers::pi / 4;
  double theta1 = std::numbers::pi / 4;
  double theta2 = std::numbers::pi / 4;
  TransferVariant variant = TransferVariant::sign_minus;
  double g_op_mhz = 50.0;
  double park_ghz = 5.0;
  int grid_n = 16;
  std::array<int, 3> truncation = {3, 3, 3};
  std::vector<double> sweep_values;  // lifetimes (us) or anharmonicities (GHz)
  int validate_trials = 20;
  std::uint64_t validate_seed = 20160321;
  Expectation expect;

  SolverOptions solver;
  int threads = 1;

  std::string out_dir = ".";
  std::string prefix;  // defaults to the experiment name

  std::string output_prefix() const { return prefix.empty() ? to_string(experiment) : prefix; }
};

/// Parses INI text. Missing keys keep their defaults; unknown keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// INI text listing every field; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// Field-by-field equality (doubles compared exactly).
bool same_config(const ExperimentConfig& a, const ExperimentConfig& b);

/// Parses "d1,dR,d2".
std::array<int, 3> parse_truncation(const std::string& text);

}  // namespace qbus::cli
