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

#include "qbus_cli/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qbus/analytic.hpp"
#include "qbus/errors.hpp"
#include "qbus/metrics.hpp"
#include "qbus/protocols.hpp"
#include "qbus/validation.hpp"

namespace qbus::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kTraceSlack = 1e-6;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> default_sweep(Experiment e) {
  if (e == Experiment::sweep_kappa) return {10, 20, 30, 40, 50};
  return {0.4, 0.5, 0.6, 0.72, 0.8, 0.9, 1.0};
}

ControlSchedule schedule_for(const ExperimentConfig& c) {
  CPhaseOptions cp;
  cp.park_ghz = c.park_ghz;
  switch (c.experiment) {
    case Experiment::transfer: return state_transfer_schedule(c.device, c.g_op_mhz, c.variant, c.park_ghz);
    case Experiment::cphase7: return cphase_schedule_7step(c.device, cp);
    default: return cphase_schedule_5step(c.device, cp);
  }
}

json device_json(const DeviceParams& d) {
  return {{"omega_bus_ghz", d.omega_bus_ghz},
          {"omega_r1_ghz", d.omega_res_ghz[0]},
          {"omega_r2_ghz", d.omega_res_ghz[1]},
          {"g_ge_mhz", d.g_ge_mhz},
          {"g_ef_mhz", d.g_ef_mhz()},
          {"delta_ghz", d.delta_ghz},
          {"g_max_mhz", d.g_max_mhz},
          {"rates_per_us",
           {{"kappa_r1", d.kappa_1},
            {"kappa_r2", d.kappa_2},
            {"kappa_bus", d.kappa_bus},
            {"gamma_ge", d.gamma_ge},
            {"gamma_ef", d.gamma_ef},
            {"gamma_phi_e", d.gamma_phi_e},
            {"gamma_phi_f", d.gamma_phi_f}}}};
}

json solver_json(const ExperimentConfig& c) {
  const auto& s = c.solver;
  json j = {{"method", s.method == Method::rk45 ? "rk45" : "rk4"},
            {"frame", s.frame == Frame::segment_interaction ? "interaction" : "rotating"},
            {"truncation", c.truncation}};
  if (s.method == Method::rk45) {
    j["abs_tol"] = s.abs_tol;
    j["rel_tol"] = s.rel_tol;
    j["max_step_ns"] = s.max_step_ns;
  } else {
    j["dt_ns"] = s.dt_ns;
  }
  return j;
}

json physicality_json(const PhysicalityReport& r) {
  return {{"max_trace_error", r.trace_error},
          {"max_hermiticity_error", r.hermiticity_error},
          {"min_eigenvalue", r.min_eigenvalue}};
}

json schedule_json(const ControlSchedule& s) {
  json rows = json::array();
  for (const auto& seg : s.segments)
    rows.push_back({{"step", seg.step},
                    {"g1_mhz", seg.knobs.g1_mhz},
                    {"g2_mhz", seg.knobs.g2_mhz},
                    {"omega_ge_ghz", seg.knobs.omega_ge_ghz},
                    {"duration_ns", seg.duration_ns}});
  return rows;
}

json density_json(const Eigen::Matrix4cd& block) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < 4; ++r) {
    json rr = json::array(), ii = json::array();
    for (int c = 0; c < 4; ++c) {
      rr.push_back(block(r, c).real());
      ii.push_back(block(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"basis", {"00", "01", "10", "11"}}, {"real", re}, {"imag", im}};
}

struct Writer {
  fs::path dir;
  std::string prefix;
  std::ostream& out;

  void write(const std::string& suffix, const std::string& content) const {
    const fs::path path = dir / (prefix + suffix);
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw ConfigError("output.dir: cannot write '" + path.string() + "'");
    out << "wrote " << path.string() << '\n';
  }
  void write(const std::string& suffix, const json& j) const { write(suffix, j.dump(2) + "\n"); }
};

/// Collects expectation misses for --assert.
struct Checker {
  Expectation expect;
  std::vector<std::string> misses;

  void fidelity(double f) {
    if (!(f >= 0.0 && f <= 1.0)) misses.push_back("fidelity " + g17(f) + " outside [0, 1]");
    if (expect.fidelity && std::abs(f - *expect.fidelity) > expect.fidelity_tol)
      misses.push_back("fidelity " + g17(f) + " not within " + g17(expect.fidelity_tol) + " of " +
                       g17(*expect.fidelity));
  }
  void duration(double t) {
    if (expect.duration_ns && std::abs(t - *expect.duration_ns) > expect.duration_tol_ns)
      misses.push_back("duration " + g17(t) + " ns not within " + g17(expect.duration_tol_ns) + " of " +
                       g17(*expect.duration_ns));
  }
  void trace(const PhysicalityReport& r) {
    if (r.trace_error > kTraceSlack) misses.push_back("trace error " + g17(r.trace_error));
  }
  void deviation(const std::string& name, double d) {
    if (expect.max_deviation && !(d <= *expect.max_deviation))
      misses.push_back(name + " deviation " + g17(d) + " above " + g17(*expect.max_deviation));
  }
};

Expectation effective_expectation(const ExperimentConfig& c) {
  const Expectation none;
  return c.expect == none ? default_expectation(c.experiment) : c.expect;
}

json base_json(const ExperimentConfig& c) {
  return {{"experiment", to_string(c.experiment)}};
}

void run_transfer(const ExperimentConfig& c, const Writer& w, Checker& check) {
  const SpaceLayout layout(c.truncation);
  const ControlSchedule sched = schedule_for(c);

  SolverOptions sampled = c.solver;
  if (sampled.sample_every_ns <= 0.0) sampled.sample_every_ns = 0.1;
  const auto start = DensityMatrix::from_pure(basis_state(layout, 1, 0, 0, Level::g));
  const Trajectory pops = evolve(start, c.device, sched, sampled);
  w.write("_trajectory.csv", trajectory_csv(pops));

  ProtocolSpec spec;
  spec.kind = ProtocolKind::state_transfer;
  spec.theta = c.theta;
  spec.variant = c.variant;
  SolverOptions final_only = c.solver;
  final_only.sample_every_ns = 0.0;
  const Trajectory traj = evolve(DensityMatrix::from_pure(initial_state(layout, spec)), c.device, sched, final_only);
  const double f = state_fidelity(traj.final_state(), ideal_final_state(layout, spec));

  json j = base_json(c);
  j["fidelity"] = f;
  j["duration_ns"] = sched.total_duration_ns();
  j["grid_n"] = nullptr;
  j["params"] = {{"theta", c.theta},
                 {"variant", to_string(c.variant)},
                 {"g_op_mhz", c.g_op_mhz},
                 {"park_ghz", c.park_ghz},
                 {"schedule", schedule_json(sched)},
                 {"device", device_json(c.device)},
                 {"solver", solver_json(c)},
                 {"physicality", physicality_json(traj.worst)},
                 {"population_run_physicality", physicality_json(pops.worst)}};
  w.write("_fidelity.json", j);
  json d = base_json(c);
  d["theta"] = c.theta;
  d["rho"] = density_json(logical_density_block(traj.final_state()));
  w.write("_density.json", d);

  w.out << "fidelity " << g17(f) << " after " << g17(sched.total_duration_ns()) << " ns\n";
  check.fidelity(f);
  check.duration(sched.total_duration_ns());
  check.trace(traj.worst);
  check.trace(pops.worst);
}

void run_cphase(const ExperimentConfig& c, const Writer& w, Checker& check) {
  const SpaceLayout layout(c.truncation);
  const ControlSchedule sched = schedule_for(c);
  SolverOptions opts = c.solver;
  opts.sample_every_ns = 0.0;

  const FidelityReport avg = average_gate_fidelity(layout, c.device, sched, c.grid_n, opts, c.threads);

  ProtocolSpec spec;
  spec.kind = c.experiment == Experiment::cphase7 ? ProtocolKind::cphase_7step : ProtocolKind::cphase_5step;
  spec.theta1 = c.theta1;
  spec.theta2 = c.theta2;
  const Trajectory traj = evolve(DensityMatrix::from_pure(initial_state(layout, spec)), c.device, sched, opts);
  const double f_state = state_fidelity(traj.final_state(), ideal_final_state(layout, spec));

  json j = base_json(c);
  j["fidelity"] = avg.value;
  j["duration_ns"] = avg.duration_ns;
  j["grid_n"] = avg.grid_n;
  j["params"] = {{"theta1", c.theta1},
                 {"theta2", c.theta2},
                 {"state_fidelity", f_state},
                 {"park_ghz", c.park_ghz},
                 {"schedule", schedule_json(sched)},
                 {"ideal_action_deviation", cphase_action_deviation(c.device, sched)},
                 {"device", device_json(c.device)},
                 {"solver", solver_json(c)},
                 {"physicality", physicality_json(avg.solver.worst)}};
  w.write("_fidelity.json", j);
  json d = base_json(c);
  d["theta1"] = c.theta1;
  d["theta2"] = c.theta2;
  d["rho"] = density_json(logical_density_block(traj.final_state()));
  w.write("_density.json", d);

  w.out << "average gate fidelity " << g17(avg.value) << " (" << c.grid_n << "x" << c.grid_n << " grid) after "
        << g17(avg.duration_ns) << " ns\n";
  check.fidelity(avg.value);
  check.duration(avg.duration_ns);
  check.trace(avg.solver.worst);
}

void run_sweep(const ExperimentConfig& c, const Writer& w, Checker& check) {
  SweepOptions so;
  so.layout = SpaceLayout(c.truncation);
  so.grid_n = c.grid_n;
  so.solver = c.solver;
  so.solver.sample_every_ns = 0.0;
  so.threads = c.threads;
  const std::vector<double> xs = c.sweep_values.empty() ? default_sweep(c.experiment) : c.sweep_values;
  const SweepResult r = c.experiment == Experiment::sweep_kappa ? sweep_kappa_gamma(c.device, xs, so)
                                                                : sweep_delta(c.device, xs, so);

  std::string csv = r.axis + ",g_ge_mhz,duration_ns,fidelity\n";
  json points = json::array();
  for (const auto& p : r.points) {
    csv += g17(p.x) + "," + g17(p.g_ge_mhz) + "," + g17(p.duration_ns) + "," + g17(p.fidelity) + "\n";
    points.push_back({{"x", p.x}, {"g_ge_mhz", p.g_ge_mhz}, {"duration_ns", p.duration_ns}, {"fidelity", p.fidelity}});
    w.out << r.axis << " = " << g17(p.x) << ": fidelity " << g17(p.fidelity) << ", duration "
          << g17(p.duration_ns) << " ns\n";
    check.fidelity(p.fidelity);
  }
  w.write("_sweep.csv", csv);
  json j = base_json(c);
  j["axis"] = r.axis;
  j["grid_n"] = c.grid_n;
  j["points"] = points;
  j["notes"] = r.notes;
  j["params"] = {{"device", device_json(c.device)}, {"solver", solver_json(c)}};
  w.write("_sweep.json", j);
}

void run_validate(const ExperimentConfig& c, const Writer* w, std::ostream& out, Checker& check) {
  json frames = json::array(), oracles = json::array();
  double worst = 0.0;
  for (const auto& f : frame_checks(c.device)) {
    out << "frame  " << std::left << std::setw(28) << f.name << ' ' << g17(f.deviation) << '\n';
    frames.push_back({{"name", f.name}, {"t_span_ns", f.t_span_ns}, {"deviation", f.deviation}});
    worst = std::max(worst, f.deviation);
    check.deviation("frame " + f.name, f.deviation);
  }
  for (const auto& o : oracle_checks(c.device, c.validate_trials, c.validate_seed, c.solver)) {
    out << "oracle " << std::left << std::setw(28) << o.name << ' ' << g17(o.deviation) << '\n';
    oracles.push_back({{"name", o.name}, {"trials", o.trials}, {"deviation", o.deviation}});
    worst = std::max(worst, o.deviation);
    check.deviation("oracle " + o.name, o.deviation);
  }
  out << "max deviation " << g17(worst) << '\n';
  if (w) {
    json j = base_json(c);
    j["max_deviation"] = worst;
    j["frame"] = frames;
    j["oracle"] = oracles;
    j["params"] = {{"trials", c.validate_trials}, {"seed", c.validate_seed}, {"device", device_json(c.device)}};
    w->write("_validate.json", j);
  }
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const SolverError& e) {
    err << "solver error in segment " << e.segment() << " at t = " << g17(e.time_ns()) << " ns: " << e.what()
        << '\n';
    return exit_solver;
  } catch (const qbus::Error& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const fs::filesystem_error& e) {
    err << "config error: output.dir: " << e.what() << '\n';
    return exit_config;
  }
}

int finish(const Checker& check, bool assert_mode, std::ostream& err) {
  if (!assert_mode) return exit_ok;
  for (const auto& m : check.misses) err << "assert: " << m << '\n';
  return check.misses.empty() ? exit_ok : exit_assert;
}

}  // namespace

Expectation default_expectation(Experiment experiment) {
  Expectation e;
  switch (experiment) {
    case Experiment::transfer:
      e.fidelity = 0.9997;
      e.fidelity_tol = 0.0005;
      e.duration_ns = 10.0;
      e.duration_tol_ns = 0.1;
      break;
    case Experiment::cphase5:
      e.fidelity = 0.9966;
      e.fidelity_tol = 0.001;
      e.duration_ns = 91.5;
      e.duration_tol_ns = 0.1;
      break;
    case Experiment::validate: e.max_deviation = 1e-6; break;
    default: break;
  }
  return e;
}

std::string trajectory_csv(const Trajectory& traj) {
  const SpaceLayout& layout = traj.final_state().layout();
  const int i1 = layout.index({1, 0, 0, Level::g});
  const int i2 = layout.index({0, 1, 0, Level::g});
  const int i3 = layout.index({0, 0, 1, Level::g});
  std::string csv = "t_ns,P1,P2,P3,trace,purity\n";
  for (std::size_t k = 0; k < traj.times_ns.size(); ++k) {
    const Matrix& rho = traj.states[k].matrix();
    csv += g17(traj.times_ns[k]) + "," + g17(rho(i1, i1).real()) + "," + g17(rho(i2, i2).real()) + "," +
           g17(rho(i3, i3).real()) + "," + g17(traj.observables.at("trace")[k]) + "," +
           g17(traj.observables.at("purity")[k]) + "\n";
  }
  return csv;
}

std::string schedule_table(const ExperimentConfig& c) {
  std::ostringstream out;
  auto table = [&out](const ControlSchedule& s) {
    out << s.label << '\n';
    out << std::left << std::setw(6) << "step" << std::right << std::setw(10) << "g1 MHz" << std::setw(10)
        << "g2 MHz" << std::setw(14) << "omega_ge GHz" << std::setw(14) << "duration ns" << '\n';
    char line[96];
    for (const auto& seg : s.segments) {
      std::snprintf(line, sizeof line, "%-6s%10.2f%10.2f%14.4f%14.4f\n", seg.step.c_str(), seg.knobs.g1_mhz,
                    seg.knobs.g2_mhz, seg.knobs.omega_ge_ghz, seg.duration_ns);
      out << line;
    }
    std::snprintf(line, sizeof line, "total %.4f ns\n", s.total_duration_ns());
    out << line;
  };

  switch (c.experiment) {
    case Experiment::validate: out << "validate runs no schedule\n"; break;
    case Experiment::sweep_kappa:
    case Experiment::sweep_delta: {
      const auto xs = c.sweep_values.empty() ? default_sweep(c.experiment) : c.sweep_values;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        DeviceParams dev = c.device;
        if (c.experiment == Experiment::sweep_kappa) {
          dev.set_lifetimes(xs[i], xs[i]);
          dev.g_ge_mhz = paired_g_ge_mhz(xs[i]);
        } else {
          dev.delta_ghz = xs[i];
          dev.qutrit_tuning_span_ghz = std::numeric_limits<double>::infinity();
        }
        CPhaseOptions cp;
        cp.park_ghz = c.park_ghz;
        if (i) out << '\n';
        out << (c.experiment == Experiment::sweep_kappa ? "lifetime_us = " : "delta_ghz = ") << g17(xs[i])
            << '\n';
        table(cphase_schedule_5step(dev, cp));
      }
      break;
    }
    default: table(schedule_for(c));
  }
  return out.str();
}

int run(const ExperimentConfig& c, bool assert_mode, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const fs::path dir(c.out_dir);
    fs::create_directories(dir);
    const Writer w{dir, c.output_prefix(), out};
    Checker check{effective_expectation(c), {}};
    switch (c.experiment) {
      case Experiment::transfer: run_transfer(c, w, check); break;
      case Experiment::cphase5:
      case Experiment::cphase7: run_cphase(c, w, check); break;
      case Experiment::sweep_kappa:
      case Experiment::sweep_delta: run_sweep(c, w, check); break;
      case Experiment::validate: run_validate(c, &w, out, check); break;
    }
    return finish(check, assert_mode, err);
  });
}

int validate(const ExperimentConfig& c, bool assert_mode, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Checker check{c.expect.max_deviation ? c.expect : default_expectation(Experiment::validate), {}};
    run_validate(c, nullptr, out, check);
    return finish(check, assert_mode, err);
  });
}

}  // namespace qbus::cli
