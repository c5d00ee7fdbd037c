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

// qbus: run bus-mediated transfer and c-phase experiments from a config file.
//
//   qbus run cphase5.ini --threads 4 --out-dir out
//   qbus schedule cphase5.ini
//   qbus validate transfer.ini --assert

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qbus_cli/config.hpp"
#include "qbus_cli/runner.hpp"

namespace {

struct Overrides {
  int threads = 0;
  std::string out_dir;
  std::string truncation;
  int grid_n = 0;
};

qbus::cli::ExperimentConfig load(const std::string& path, const Overrides& o) {
  auto c = qbus::cli::load_config(path);
  if (o.threads) c.threads = o.threads;
  if (!o.out_dir.empty()) c.out_dir = o.out_dir;
  if (!o.truncation.empty()) c.truncation = qbus::cli::parse_truncation(o.truncation);
  if (o.grid_n) c.grid_n = o.grid_n;
  // Re-run field checks on the overridden values.
  return qbus::cli::parse_config(qbus::cli::serialize_config(c));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bus-mediated state transfer and c-phase gate between two resonators"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides o;
  bool assert_mode = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "INI experiment configuration")->required();
    sub->add_option("--threads", o.threads, "Worker threads for grid and sweep points")->check(CLI::PositiveNumber);
    sub->add_option("--out-dir", o.out_dir, "Directory for CSV/JSON output");
    sub->add_option("--truncation", o.truncation, "Fock cutoffs d1,dR,d2");
    sub->add_option("--grid-n", o.grid_n, "Angles per axis of the average-fidelity grid")->check(CLI::Range(4, 1024));
  };
  auto* run = app.add_subcommand("run", "Run the configured experiment and write its artifacts");
  add_common(run);
  run->add_flag("--assert", assert_mode, "Exit with status 4 when a result misses its expectation");
  auto* schedule = app.add_subcommand("schedule", "Print the control schedule of the configured protocol");
  add_common(schedule);
  auto* validate = app.add_subcommand("validate", "Cross-check frames and closed-form propagators");
  add_common(validate);
  validate->add_flag("--assert", assert_mode, "Exit with status 4 when a deviation exceeds 1e-6");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qbus::cli::exit_config;
  }

  qbus::cli::ExperimentConfig config;
  try {
    config = load(config_path, o);
  } catch (const qbus::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return qbus::cli::exit_config;
  }

  if (*schedule) {
    try {
      std::cout << qbus::cli::schedule_table(config);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return qbus::cli::exit_config;
    }
    return qbus::cli::exit_ok;
  }
  if (*validate) return qbus::cli::validate(config, assert_mode, std::cout, std::cerr);
  return qbus::cli::run(config, assert_mode, std::cout, std::cerr);
}
