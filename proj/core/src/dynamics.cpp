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

#include "qbus/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Sparse>

#include "qbus/errors.hpp"
#include "qbus/integrator.hpp"
#include "qbus/units.hpp"

namespace qbus {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kGSlack = 1e-9;

void require_non_negative(const char* name, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string(name) + " must be finite and non-negative, got " + std::to_string(v));
  }
}

void require_positive(const char* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string(name) + " must be positive, got " + std::to_string(v));
  }
}

}  // namespace

DeviceParams& DeviceParams::set_lifetimes(double kappa_inv_us, double gamma_inv_us) {
  const double kappa = units::lifetime_to_rate(kappa_inv_us);
  const double gamma = units::lifetime_to_rate(gamma_inv_us);
  kappa_1 = kappa_2 = kappa_bus = kappa;
  gamma_ge = gamma_phi_e = gamma_phi_f = gamma;
  gamma_ef = 0.5 * gamma;
  return *this;
}

DeviceParams& DeviceParams::set_lossless() {
  return set_lifetimes(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
}

void DeviceParams::validate() const {
  require_positive("omega_bus_ghz", omega_bus_ghz);
  require_positive("omega_r1_ghz", omega_res_ghz[0]);
  require_positive("omega_r2_ghz", omega_res_ghz[1]);
  require_positive("delta_ghz", delta_ghz);
  require_positive("g_max_mhz", g_max_mhz);
  if (!(qutrit_tuning_span_ghz > 0.0)) throw InvalidParameter("qutrit_tuning_span_ghz must be positive");
  require_non_negative("g_ge_mhz", g_ge_mhz);
  require_non_negative("kappa_1", kappa_1);
  require_non_negative("kappa_2", kappa_2);
  require_non_negative("kappa_bus", kappa_bus);
  require_non_negative("gamma_ge", gamma_ge);
  require_non_negative("gamma_ef", gamma_ef);
  require_non_negative("gamma_phi_e", gamma_phi_e);
  require_non_negative("gamma_phi_f", gamma_phi_f);
}

void ControlKnobs::validate(const DeviceParams& dev) const {
  for (double g : {g1_mhz, g2_mhz}) {
    if (!(g >= 0.0) || g > dev.g_max_mhz + kGSlack) {
      throw InvalidParameter("coupling " + std::to_string(g) + " MHz outside [0, " +
                             std::to_string(dev.g_max_mhz) + "] MHz");
    }
  }
  require_positive("omega_ge_ghz", omega_ge_ghz);
  require_positive("omega_ef_ghz", omega_ef_ghz(dev));
}

double ControlSchedule::total_duration_ns() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration_ns;
  return total;
}

double ControlSchedule::qutrit_span_ghz() const {
  if (segments.empty()) return 0.0;
  double lo = segments.front().knobs.omega_ge_ghz, hi = lo;
  for (const auto& s : segments) {
    lo = std::min(lo, s.knobs.omega_ge_ghz);
    hi = std::max(hi, s.knobs.omega_ge_ghz);
  }
  return hi - lo;
}

void ControlSchedule::validate(const DeviceParams& dev) const {
  if (segments.empty()) throw DegenerateSchedule("schedule '" + label + "' has no segments");
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const double d = segments[k].duration_ns;
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw DegenerateSchedule("segment " + std::to_string(k) + " of '" + label + "' has duration " +
                               std::to_string(d) + " ns");
    }
    segments[k].knobs.validate(dev);
  }
}

void SolverOptions::validate() const {
  require_positive("abs_tol", abs_tol);
  require_positive("rel_tol", rel_tol);
  require_positive("max_step_ns", max_step_ns);
  require_positive("dt_ns", dt_ns);
  if (!(sample_every_ns >= 0.0)) throw InvalidParameter("sample_every_ns must be >= 0");
}

// ---------------------------------------------------------------------------

Operator build_hamiltonian(const SpaceLayout& layout, const DeviceParams& dev, const ControlKnobs& knobs) {
  using units::ghz_to_rad_per_ns;
  using units::mhz_to_rad_per_ns;
  const Operator a = annihilation(layout, Subsystem::bus);
  const Operator b1 = annihilation(layout, Subsystem::r1);
  const Operator b2 = annihilation(layout, Subsystem::r2);
  const Operator s_ge = qutrit_transition(layout, QutritOp::raise_ge);
  const Operator s_ef = qutrit_transition(layout, QutritOp::raise_ef);

  const double g_ge = mhz_to_rad_per_ns(dev.g_ge_mhz);
  const double g_ef = mhz_to_rad_per_ns(dev.g_ef_mhz());
  const double g1 = mhz_to_rad_per_ns(knobs.g1_mhz);
  const double g2 = mhz_to_rad_per_ns(knobs.g2_mhz);

  Operator h = free_hamiltonian(layout, dev, knobs);
  const Operator qe = a * s_ge;
  const Operator qf = a * s_ef;
  const Operator c1 = b1.adjoint() * a;
  const Operator c2 = b2.adjoint() * a;
  h = h + Complex(g_ge) * (qe + qe.adjoint());
  h = h + Complex(g_ef) * (qf + qf.adjoint());
  h = h + Complex(g1) * (c1 + c1.adjoint());
  h = h + Complex(g2) * (c2 + c2.adjoint());
  return h;
}

Operator free_hamiltonian(const SpaceLayout& layout, const DeviceParams& dev, const ControlKnobs& knobs) {
  const double d_ge = units::ghz_to_rad_per_ns(knobs.omega_ge_ghz - dev.omega_bus_ghz);
  const double d_ef = units::ghz_to_rad_per_ns(knobs.omega_ef_ghz(dev) - dev.omega_bus_ghz);
  const double d_1 = units::ghz_to_rad_per_ns(dev.omega_res_ghz[0] - dev.omega_bus_ghz);
  const double d_2 = units::ghz_to_rad_per_ns(dev.omega_res_ghz[1] - dev.omega_bus_ghz);

  const int n = layout.total_dim();
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const BasisLabel l = layout.label(i);
    double e = d_1 * l.n1 + d_2 * l.n2;
    if (l.level == Level::e) e += d_ge;
    if (l.level == Level::f) e += d_ge + d_ef;
    m(i, i) = e;
  }
  return Operator(layout, std::move(m));
}

std::vector<DissipationChannel> build_dissipators(const SpaceLayout& layout, const DeviceParams& dev) {
  dev.validate();
  using units::per_us_to_per_ns;
  std::vector<DissipationChannel> out;
  out.push_back({"kappa_1", annihilation(layout, Subsystem::r1), per_us_to_per_ns(dev.kappa_1)});
  out.push_back({"kappa_2", annihilation(layout, Subsystem::r2), per_us_to_per_ns(dev.kappa_2)});
  out.push_back({"kappa_R", annihilation(layout, Subsystem::bus), per_us_to_per_ns(dev.kappa_bus)});
  out.push_back({"gamma_ge", qutrit_transition(layout, QutritOp::raise_ge).adjoint(), per_us_to_per_ns(dev.gamma_ge)});
  out.push_back({"gamma_ef", qutrit_transition(layout, QutritOp::raise_ef).adjoint(), per_us_to_per_ns(dev.gamma_ef)});
  out.push_back({"gamma_phi_e", qutrit_transition(layout, QutritOp::proj_e), per_us_to_per_ns(dev.gamma_phi_e)});
  out.push_back({"gamma_phi_f", qutrit_transition(layout, QutritOp::proj_f), per_us_to_per_ns(dev.gamma_phi_f)});
  return out;
}

std::vector<DissipationChannel> active_channels(std::vector<DissipationChannel> channels) {
  std::erase_if(channels, [](const DissipationChannel& c) { return c.rate_per_ns == 0.0; });
  return channels;
}

Matrix lindblad_rhs(const Matrix& rho, const Operator& hamiltonian, std::span<const DissipationChannel> channels) {
  const Matrix& h = hamiltonian.matrix();
  if (rho.rows() != h.rows() || rho.cols() != h.cols()) {
    throw DimensionMismatch("density matrix and Hamiltonian shapes differ");
  }
  Matrix out = -kI * (h * rho - rho * h);
  for (const auto& c : channels) {
    const Matrix& l = c.op.matrix();
    const Matrix ldl = l.adjoint() * l;
    out += c.rate_per_ns * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using SparseRowMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

SparseRowMatrix to_sparse(const Matrix& m) {
  std::vector<Eigen::Triplet<Complex>> t;
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r)
      if (m(r, c) != Complex(0.0)) t.emplace_back(r, c, m(r, c));
  SparseRowMatrix s(m.rows(), m.cols());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

/// Basis indices whose excitation number does not exceed that of any state in
/// the support of `weights` (indices with nonzero entries).
std::vector<int> excitation_sector(const SpaceLayout& layout, const std::vector<int>& support) {
  int cap = 0;
  for (int i : support) cap = std::max(cap, layout.excitations(i));
  std::vector<int> kept;
  for (int i = 0; i < layout.total_dim(); ++i)
    if (layout.excitations(i) <= cap) kept.push_back(i);
  return kept;
}

std::vector<int> all_indices(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

Matrix restrict(const Matrix& m, const std::vector<int>& kept) { return m(kept, kept); }

/// Lindblad generator on a (possibly reduced) basis, specialised for
/// Hermitian rho: drho = X + X^dag + sum_k r_k L_k rho L_k^dag with
/// X = -i H_eff rho and H_eff = H - (i/2) sum_k r_k L_k^dag L_k.
class LindbladGenerator {
 public:
  LindbladGenerator(const Matrix& h, const std::vector<std::pair<Matrix, double>>& jumps) {
    Matrix heff = h;
    for (const auto& [l, rate] : jumps) heff -= (0.5 * rate) * kI * (l.adjoint() * l);
    a_ = to_sparse(-kI * heff);
    for (const auto& [l, rate] : jumps) {
      Jump j;
      j.rate = rate;
      for (int c = 0; c < l.cols(); ++c) {
        std::vector<std::pair<int, Complex>> entries;
        for (int r = 0; r < l.rows(); ++r)
          if (l(r, c) != Complex(0.0)) entries.emplace_back(r, l(r, c));
        if (!entries.empty()) {
          j.src.push_back(c);
          j.cols.push_back(std::move(entries));
        }
      }
      jumps_.push_back(std::move(j));
    }
    x_.resize(h.rows(), h.cols());
  }

  void operator()(double, const Matrix& rho, Matrix& out) const {
    x_.noalias() = a_ * rho;
    out.noalias() = x_ + x_.adjoint();
    for (const auto& j : jumps_) {
      const std::size_t m = j.src.size();
      for (std::size_t u = 0; u < m; ++u) {
        for (std::size_t v = 0; v < m; ++v) {
          const Complex r = j.rate * rho(j.src[u], j.src[v]);
          if (r == Complex(0.0)) continue;
          for (const auto& [p, cp] : j.cols[u])
            for (const auto& [q, cq] : j.cols[v]) out(p, q) += cp * r * std::conj(cq);
        }
      }
    }
  }

 private:
  struct Jump {
    double rate = 0.0;
    std::vector<int> src;
    std::vector<std::vector<std::pair<int, Complex>>> cols;
  };
  SparseRowMatrix a_;
  std::vector<Jump> jumps_;
  mutable Matrix x_;
};

class SchrodingerGenerator {
 public:
  explicit SchrodingerGenerator(const Matrix& h) : a_(to_sparse(-kI * h)) {}
  void operator()(double, const Vector& psi, Vector& out) const { out.noalias() = a_ * psi; }

 private:
  SparseRowMatrix a_;
};

void apply_frame(Matrix& rho, const Eigen::VectorXd& energy, double tau) {
  const Eigen::VectorXcd phase = (kI * tau * energy.cast<Complex>()).array().exp();
  rho = phase.asDiagonal() * rho * phase.conjugate().asDiagonal();
}

void apply_frame(Vector& psi, const Eigen::VectorXd& energy, double tau) {
  psi = (kI * tau * energy.cast<Complex>()).array().exp().matrix().cwiseProduct(psi);
}

Eigen::VectorXd free_energies(const SpaceLayout& layout, const DeviceParams& dev, const ControlKnobs& knobs,
                              const std::vector<int>& kept) {
  const Matrix h0 = free_hamiltonian(layout, dev, knobs).matrix();
  Eigen::VectorXd e(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) e(i) = h0(kept[i], kept[i]).real();
  return e;
}

std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

const char* describe(ode::Status s) {
  switch (s) {
    case ode::Status::ok: return "ok";
    case ode::Status::step_underflow: return "step size underflow";
    case ode::Status::too_many_steps: return "step budget exhausted";
    case ode::Status::non_finite: return "non-finite state";
  }
  return "?";
}

/// Drives one state through every segment, hitting segment boundaries and
/// sample times exactly. make_rhs(knobs) returns the generator of a segment.
template <class State, class MakeRhs, class OnSample>
ode::Stats run_schedule(State& y, const SpaceLayout& layout, const std::vector<int>& kept, const DeviceParams& dev,
                        const ControlSchedule& schedule, const SolverOptions& opts, MakeRhs&& make_rhs,
                        OnSample&& on_sample) {
  ode::Stats stats;
  const ode::AdaptiveOptions aopt{opts.abs_tol, opts.rel_tol, opts.max_step_ns, 1e-12, opts.max_steps};
  const double every = opts.sample_every_ns;
  const double total = schedule.total_duration_ns();
  constexpr double kTimeEps = 1e-9;

  double h = 0.0;
  double t = 0.0;
  long sample_k = 1;
  auto next_sample = [&] { return every > 0.0 ? every * static_cast<double>(sample_k) : total + 1.0; };

  on_sample(0.0, y);
  for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
    const Segment& seg = schedule.segments[k];
    const auto rhs = make_rhs(seg.knobs);
    const Eigen::VectorXd energy = free_energies(layout, dev, seg.knobs, kept);
    const double start = t;
    const double end = start + seg.duration_ns;

    auto advance = [&](double target) {
      const ode::Outcome o = opts.method == Method::rk45 ? ode::dopri5(y, t, target, rhs, aopt, h, stats)
                                                         : ode::rk4(y, t, target, rhs, opts.dt_ns, stats);
      if (o.status != ode::Status::ok) throw SolverError(describe(o.status), static_cast<int>(k), o.t);
      t = target;
    };

    while (next_sample() < end - kTimeEps) {
      advance(next_sample());
      ++sample_k;
      if (opts.frame == Frame::segment_interaction) {
        State copy = y;
        apply_frame(copy, energy, t - start);
        on_sample(t, copy);
      } else {
        on_sample(t, y);
      }
    }
    advance(end);
    if (opts.frame == Frame::segment_interaction) apply_frame(y, energy, seg.duration_ns);
    if (std::abs(next_sample() - end) <= kTimeEps) {
      ++sample_k;
      if (k + 1 < schedule.segments.size()) on_sample(t, y);
    }
  }
  on_sample(t, y);
  return stats;
}

std::vector<std::pair<Matrix, double>> reduced_jumps(const SpaceLayout& layout, const DeviceParams& dev,
                                                     const std::vector<int>& kept) {
  std::vector<std::pair<Matrix, double>> out;
  for (const auto& c : active_channels(build_dissipators(layout, dev))) {
    out.emplace_back(restrict(c.op.matrix(), kept), c.rate_per_ns);
  }
  return out;
}

}  // namespace

Trajectory evolve(const DensityMatrix& rho0, const DeviceParams& dev, const ControlSchedule& schedule,
                  const SolverOptions& opts) {
  dev.validate();
  schedule.validate(dev);
  opts.validate();
  const SpaceLayout& layout = rho0.layout();
  const int n = layout.total_dim();

  std::vector<int> kept = all_indices(n);
  if (opts.restrict_excitations) {
    std::vector<int> support;
    for (int i = 0; i < n; ++i)
      if (rho0.matrix().row(i).cwiseAbs().maxCoeff() > 0.0) support.push_back(i);
    kept = excitation_sector(layout, support);
  }
  const int m = static_cast<int>(kept.size());
  const auto jumps = reduced_jumps(layout, dev, kept);

  Trajectory traj;
  traj.integrated_dim = m;
  traj.worst = {0.0, 0.0, std::numeric_limits<double>::infinity()};
  auto& trace_series = traj.observables["trace"];
  auto& purity_series = traj.observables["purity"];
  int segment_of_sample = 0;

  auto on_sample = [&](double t, const Matrix& red) {
    Matrix full = Matrix::Zero(n, n);
    full(kept, kept) = red;
    DensityMatrix rho(layout, std::move(full));

    PhysicalityReport rep;
    rep.trace_error = std::abs(red.trace() - 1.0);
    rep.hermiticity_error = max_abs(red - red.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (red + red.adjoint()), Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    if (m < n) rep.min_eigenvalue = std::min(rep.min_eigenvalue, 0.0);

    traj.worst.trace_error = std::max(traj.worst.trace_error, rep.trace_error);
    traj.worst.hermiticity_error = std::max(traj.worst.hermiticity_error, rep.hermiticity_error);
    traj.worst.min_eigenvalue = std::min(traj.worst.min_eigenvalue, rep.min_eigenvalue);
    if (opts.check_physicality && !rep.within(opts.tolerance)) {
      throw SolverError("density matrix left the physical set (trace err " + std::to_string(rep.trace_error) +
                            ", hermiticity err " + std::to_string(rep.hermiticity_error) + ", min eig " +
                            std::to_string(rep.min_eigenvalue) + ")",
                        std::max(segment_of_sample, 0), t);
    }
    traj.times_ns.push_back(t);
    trace_series.push_back(red.trace().real());
    purity_series.push_back(rho.purity());
    traj.states.push_back(std::move(rho));
  };

  Matrix y = restrict(rho0.matrix(), kept);
  auto make_rhs = [&](const ControlKnobs& knobs) {
    ++segment_of_sample;
    return LindbladGenerator(restrict(build_hamiltonian(layout, dev, knobs).matrix(), kept), jumps);
  };
  segment_of_sample = -1;
  const ode::Stats stats = run_schedule(y, layout, kept, dev, schedule, opts, make_rhs, on_sample);
  traj.rhs_evaluations = stats.rhs_evaluations;
  traj.steps_accepted = stats.accepted;
  traj.steps_rejected = stats.rejected;
  return traj;
}

PureState propagate(const PureState& psi0, const DeviceParams& dev, const ControlSchedule& schedule,
                    const SolverOptions& opts) {
  dev.validate();
  schedule.validate(dev);
  opts.validate();
  const SpaceLayout& layout = psi0.layout();
  const int n = layout.total_dim();

  std::vector<int> kept = all_indices(n);
  if (opts.restrict_excitations) {
    std::vector<int> support;
    for (int i = 0; i < n; ++i)
      if (psi0.amplitudes()(i) != Complex(0.0)) support.push_back(i);
    kept = excitation_sector(layout, support);
  }

  Vector y = psi0.amplitudes()(kept);
  auto make_rhs = [&](const ControlKnobs& knobs) {
    return SchrodingerGenerator(restrict(build_hamiltonian(layout, dev, knobs).matrix(), kept));
  };
  run_schedule(y, layout, kept, dev, schedule, opts, make_rhs, [](double, const Vector&) {});

  // Runge-Kutta keeps the trace of rho exactly but not |psi|^2; the drift is
  // ~1e-8 over 10^4 steps, so only a gross loss of norm signals a failure.
  const double norm = y.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw SolverError("closed-system norm drifted by " + format_sci(norm - 1.0),
                      static_cast<int>(schedule.segments.size()) - 1, schedule.total_duration_ns());
  }
  Vector full = Vector::Zero(n);
  full(kept) = y / norm;
  return PureState(layout, std::move(full));
}

double validate_frame(const SpaceLayout& layout, const DeviceParams& dev, const ControlKnobs& knobs,
                      double t_span_ns) {
  dev.validate();
  knobs.validate(dev);
  if (!(t_span_ns > 0.0)) throw InvalidParameter("t_span_ns must be positive");

  std::vector<int> kept;
  for (int i = 0; i < layout.total_dim(); ++i)
    if (layout.excitations(i) <= 2) kept.push_back(i);
  const int m = static_cast<int>(kept.size());

  const Matrix h = restrict(build_hamiltonian(layout, dev, knobs).matrix(), kept);
  const Eigen::VectorXd energy = free_energies(layout, dev, knobs, kept);
  const Matrix coupling = h - energy.cast<Complex>().asDiagonal().toDenseMatrix();

  Vector probe(m);
  for (int i = 0; i < m; ++i) probe(i) = Complex(1.0 + 0.1 * i, (i % 3) - 1.0);
  probe.normalize();

  const ode::AdaptiveOptions aopt{1e-12, 1e-12, 0.01, 1e-14, 50'000'000};
  SchrodingerGenerator rotating_rhs(h);
  auto interaction_rhs = [&](double t, const Vector& psi, Vector& out) {
    const Vector phase = (kI * t * energy.cast<Complex>()).array().exp();
    out.noalias() = phase.cwiseProduct(coupling * phase.conjugate().cwiseProduct(psi));
    out *= -kI;
  };

  Vector rot = probe, inter = probe;
  double h_rot = 0.0, h_int = 0.0, t = 0.0, worst = 0.0;
  ode::Stats stats;
  const int checkpoints = std::max(1, static_cast<int>(std::ceil(t_span_ns - 1e-9)));
  for (int c = 1; c <= checkpoints; ++c) {
    const double target = std::min(t_span_ns, static_cast<double>(c));
    const auto o1 = ode::dopri5(rot, t, target, rotating_rhs, aopt, h_rot, stats);
    const auto o2 = ode::dopri5(inter, t, target, interaction_rhs, aopt, h_int, stats);
    if (o1.status != ode::Status::ok || o2.status != ode::Status::ok) {
      throw SolverError("frame validation integration failed", 0, t);
    }
    t = target;
    Vector mapped = rot;
    apply_frame(mapped, energy, t);
    worst = std::max(worst, (mapped - inter).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace qbus
