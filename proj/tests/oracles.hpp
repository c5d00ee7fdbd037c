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

// Reference constructions for the tests, written independently of the
// library: operators from explicit Kronecker products, propagators from a
// Pade matrix exponential, and the master equation as a vectorised
// superoperator.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline M lowering(int d) {
  M a = M::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline M ket_bra(int d, int i, int j) {
  M m = M::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

/// A (x) B (x) C (x) D with r1 leftmost, qutrit rightmost.
inline M kron4(const M& a, const M& b, const M& c, const M& d) {
  M ab = Eigen::kroneckerProduct(a, b).eval();
  M abc = Eigen::kroneckerProduct(ab, c).eval();
  return Eigen::kroneckerProduct(abc, d).eval();
}

struct Space {
  int d1, dR, d2;
  int dim() const { return d1 * dR * d2 * 3; }
  M id(int d) const { return M::Identity(d, d); }
  M b1() const { return kron4(lowering(d1), id(dR), id(d2), id(3)); }
  M a() const { return kron4(id(d1), lowering(dR), id(d2), id(3)); }
  M b2() const { return kron4(id(d1), id(dR), lowering(d2), id(3)); }
  M q(int i, int j) const { return kron4(id(d1), id(dR), id(d2), ket_bra(3, i, j)); }
  /// Basis ket |n1, nR, n2, l> as a Kronecker product of unit vectors.
  V ket(int n1, int nR, int n2, int l) const {
    auto e = [](int d, int i) {
      V v = V::Zero(d);
      v(i) = 1.0;
      return v;
    };
    V ab = Eigen::kroneckerProduct(e(d1, n1), e(dR, nR)).eval();
    V abc = Eigen::kroneckerProduct(ab, e(d2, n2)).eval();
    return Eigen::kroneckerProduct(abc, e(3, l)).eval();
  }
};

struct Params {
  double w_bus = 6.65, w1 = 6.65, w2 = 6.65;  // GHz
  double g_ge = 13.0, delta = 0.72;            // MHz, GHz
  double g1 = 0.0, g2 = 0.0, w_ge = 5.0;       // MHz, MHz, GHz
  std::array<double, 7> rates_per_us{};        // b1, b2, a, ge, ef, phi_e, phi_f
};

/// Rotating-frame Hamiltonian in rad/ns.
inline M hamiltonian(const Space& s, const Params& p) {
  const double ge = kTwoPi * (p.w_ge - p.w_bus);
  const double ef = kTwoPi * (p.w_ge - p.delta - p.w_bus);
  const double mhz = kTwoPi * 1e-3;
  const M a = s.a(), b1 = s.b1(), b2 = s.b2();
  const M sge = s.q(1, 0), sef = s.q(2, 1);
  M h = ge * s.q(1, 1) + (ge + ef) * s.q(2, 2);
  h += kTwoPi * (p.w1 - p.w_bus) * b1.adjoint() * b1 + kTwoPi * (p.w2 - p.w_bus) * b2.adjoint() * b2;
  const M x = p.g_ge * mhz * a * sge + std::sqrt(2.0) * p.g_ge * mhz * a * sef + p.g1 * mhz * b1.adjoint() * a +
              p.g2 * mhz * b2.adjoint() * a;
  return h + x + x.adjoint();
}

inline std::vector<std::pair<M, double>> jumps(const Space& s, const Params& p) {
  const std::array<M, 7> ops = {s.b1(), s.b2(), s.a(), s.q(0, 1), s.q(1, 2), s.q(1, 1), s.q(2, 2)};
  std::vector<std::pair<M, double>> out;
  for (int k = 0; k < 7; ++k) out.emplace_back(ops[k], p.rates_per_us[k] * 1e-3);
  return out;
}

/// Column-stacking vectorisation: vec(A X B) = (B^T (x) A) vec(X).
inline M liouvillian(const M& h, const std::vector<std::pair<M, double>>& ls) {
  const int n = static_cast<int>(h.rows());
  const M id = M::Identity(n, n);
  M l = -C(0, 1) * (Eigen::kroneckerProduct(id, h).eval() - Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const auto& [op, rate] : ls) {
    const M ld = op.adjoint() * op;
    l += rate * (Eigen::kroneckerProduct(op.conjugate(), op).eval() -
                 0.5 * Eigen::kroneckerProduct(id, ld).eval() - 0.5 * Eigen::kroneckerProduct(ld.transpose(), id).eval());
  }
  return l;
}

inline M expm(const M& m) { return m.exp(); }

/// rho(t) = exp(L t) rho0 for a constant Liouvillian.
inline M evolve(const M& liouv, const M& rho0, double t) {
  const int n = static_cast<int>(rho0.rows());
  const V v = expm(liouv * t) * Eigen::Map<const V>(rho0.data(), n * n);
  return Eigen::Map<const M>(v.data(), n, n);
}

inline M random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  M a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = C(g(rng), g(rng));
  M rho = a * a.adjoint();
  return rho / rho.trace();
}

inline V random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  V v(n);
  for (int i = 0; i < n; ++i) v(i) = C(g(rng), g(rng));
  return v.normalized();
}

inline double max_abs(const M& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
