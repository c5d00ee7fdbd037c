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

#include "qbus/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "qbus/analytic.hpp"
#include "qbus/errors.hpp"
#include "qbus/protocols.hpp"

namespace qbus {

std::vector<double> population(const Trajectory& traj, const PureState& target) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& rho : traj.states) out.push_back(state_fidelity(rho, target));
  return out;
}

double state_fidelity(const DensityMatrix& rho, const PureState& target) {
  if (!(rho.layout() == target.layout())) throw DimensionMismatch("state and target layouts differ");
  const Vector& psi = target.amplitudes();
  return psi.dot(rho.matrix() * psi).real();
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(n, 0)));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(threads, 1, std::max(n, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

FidelityReport average_gate_fidelity(const SpaceLayout& layout, const GateChannel& channel, int grid_n, int threads) {
  if (grid_n < 4) throw InvalidParameter("grid_n must be at least 4, got " + std::to_string(grid_n));
  const int points = grid_n * grid_n;
  std::vector<double> values(points, 0.0);
  parallel_for(points, threads, [&](int idx) {
    ProtocolSpec spec;
    spec.kind = ProtocolKind::cphase_5step;
    spec.theta1 = 2.0 * std::numbers::pi * (idx / grid_n) / grid_n;
    spec.theta2 = 2.0 * std::numbers::pi * (idx % grid_n) / grid_n;
    try {
      const DensityMatrix out = channel(initial_state(layout, spec));
      values[idx] = state_fidelity(out, ideal_final_state(layout, spec));
    } catch (const SolverError& e) {
      std::ostringstream os;
      os << e.what() << " at theta1 = " << spec.theta1 << ", theta2 = " << spec.theta2;
      throw SolverError(os.str(), e.segment(), e.time_ns());
    }
  });

  FidelityReport rep;
  rep.kind = FidelityKind::average_gate;
  rep.grid_n = grid_n;
  double sum = 0.0;
  for (double v : values) sum += v;
  rep.value = sum / points;
  return rep;
}

FidelityReport average_gate_fidelity(const SpaceLayout& layout, const DeviceParams& dev,
                                     const ControlSchedule& schedule, int grid_n, const SolverOptions& opts,
                                     int threads) {
  SolverOptions final_only = opts;
  final_only.sample_every_ns = 0.0;
  const int points = grid_n * grid_n;
  std::vector<SolverSummary> summaries(static_cast<std::size_t>(std::max(points, 0)));
  std::atomic<int> counter{0};

  // Summaries are combined with integer sums and min/max only, so the result
  // does not depend on which worker filled which slot.
  GateChannel channel = [&](const PureState& psi) {
    const Trajectory traj = evolve(DensityMatrix::from_pure(psi), dev, schedule, final_only);
    const int slot = counter++;
    SolverSummary& s = summaries[slot];
    s.rhs_evaluations = traj.rhs_evaluations;
    s.steps_accepted = traj.steps_accepted;
    s.steps_rejected = traj.steps_rejected;
    s.integrated_dim = traj.integrated_dim;
    s.worst = traj.worst;
    return traj.final_state();
  };
  FidelityReport rep = average_gate_fidelity(layout, channel, grid_n, threads);
  rep.schedule_label = schedule.label;
  rep.duration_ns = schedule.total_duration_ns();

  SolverSummary total;
  for (const auto& s : summaries) {
    total.rhs_evaluations += s.rhs_evaluations;
    total.steps_accepted += s.steps_accepted;
    total.steps_rejected += s.steps_rejected;
    total.integrated_dim = std::max(total.integrated_dim, s.integrated_dim);
    total.worst.trace_error = std::max(total.worst.trace_error, s.worst.trace_error);
    total.worst.hermiticity_error = std::max(total.worst.hermiticity_error, s.worst.hermiticity_error);
    total.worst.min_eigenvalue = std::min(total.worst.min_eigenvalue, s.worst.min_eigenvalue);
  }
  rep.solver = total;
  return rep;
}

double paired_g_ge_mhz(double gamma_inv_us) {
  static constexpr std::array<std::pair<double, double>, 5> kPairs = {
      {{10.0, 22.0}, {20.0, 19.0}, {30.0, 13.0}, {40.0, 13.0}, {50.0, 13.0}}};
  auto best = kPairs.front();
  for (const auto& p : kPairs)
    if (std::abs(p.first - gamma_inv_us) < std::abs(best.first - gamma_inv_us)) best = p;
  return best.second;
}

namespace {

SweepPoint run_point(double x, const DeviceParams& dev, const SweepOptions& opts) {
  const ControlSchedule s = cphase_schedule_5step(dev);
  const FidelityReport r = average_gate_fidelity(opts.layout, dev, s, opts.grid_n, opts.solver, opts.threads);
  return {x, r.value, dev.g_ge_mhz, s.total_duration_ns()};
}

}  // namespace

SweepResult sweep_kappa_gamma(const DeviceParams& base, std::vector<double> gamma_inv_us, const SweepOptions& opts) {
  std::sort(gamma_inv_us.begin(), gamma_inv_us.end());
  SweepResult out;
  out.axis = "gamma_inv_us";
  out.notes.push_back("kappa = Gamma; gamma_ef = Gamma/2; g_ge paired per lifetime unless overridden");
  for (double x : gamma_inv_us) {
    if (!(x > 0.0)) throw InvalidParameter("sweep lifetime must be positive");
    DeviceParams dev = base;
    dev.set_lifetimes(x, x);
    const auto it = opts.g_ge_override.find(x);
    dev.g_ge_mhz = it != opts.g_ge_override.end() ? it->second : paired_g_ge_mhz(x);
    out.points.push_back(run_point(x, dev, opts));
  }
  return out;
}

SweepResult sweep_delta(const DeviceParams& base, std::vector<double> deltas_ghz, const SweepOptions& opts) {
  std::sort(deltas_ghz.begin(), deltas_ghz.end());
  SweepResult out;
  out.axis = "delta_ghz";
  out.notes.push_back("e<->f step at omega_R + delta; tuning-span limit lifted for the sweep");
  for (double x : deltas_ghz) {
    if (!(x > 0.0)) throw InvalidParameter("anharmonicity must be positive");
    DeviceParams dev = base;
    dev.delta_ghz = x;
    dev.qutrit_tuning_span_ghz = std::numeric_limits<double>::infinity();
    const auto it = opts.g_ge_override.find(x);
    if (it != opts.g_ge_override.end()) dev.g_ge_mhz = it->second;
    out.points.push_back(run_point(x, dev, opts));
  }
  return out;
}

Eigen::Matrix4cd logical_density_block(const DensityMatrix& rho) {
  return analytic::logical_block(rho.matrix(), rho.layout());
}

}  // namespace qbus
