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

#include <iosfwd>
#include <string>
#include <vector>

#include "qbus/dynamics.hpp"
#include "qbus_cli/config.hpp"

namespace qbus::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_solver = 3, exit_assert = 4 };

/// Runs the configured experiment, writes its artifacts under out_dir and a
/// short report to `out`. Errors are reported on `err` and mapped to exit
/// codes; with assert_mode a result outside its expectation returns
/// exit_assert.
int run(const ExperimentConfig& config, bool assert_mode, std::ostream& out, std::ostream& err);

/// Frame and closed-form cross-checks; prints one line per check.
int validate(const ExperimentConfig& config, bool assert_mode, std::ostream& out, std::ostream& err);

/// Segment table (step, g1, g2, omega_ge, duration) of the configured
/// protocol; sweeps list the five-step schedule of every point.
std::string schedule_table(const ExperimentConfig& config);

/// CSV with header t_ns,P1,P2,P3,trace,purity: populations of |1,0,0,g>,
/// |0,1,0,g>, |0,0,1,g> at every sample.
std::string trajectory_csv(const Trajectory& traj);

/// Expectations applied by --assert when the config sets none.
Expectation default_expectation(Experiment experiment);

}  // namespace qbus::cli
