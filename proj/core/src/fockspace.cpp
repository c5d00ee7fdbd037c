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

#include "qbus/fockspace.hpp"

#include <cmath>
#include <sstream>

#include "qbus/errors.hpp"

namespace qbus {

std::string to_string(Subsystem s) {
  switch (s) {
    case Subsystem::r1: return "r1";
    case Subsystem::bus: return "R";
    case Subsystem::r2: return "r2";
    case Subsystem::qutrit: return "q";
  }
  return "?";
}

char to_char(Level l) {
  switch (l) {
    case Level::g: return 'g';
    case Level::e: return 'e';
    case Level::f: return 'f';
  }
  return '?';
}

SpaceLayout::SpaceLayout(std::array<int, 3> resonator_dims) : dims_(resonator_dims), total_(kQutritDim) {
  for (int d : dims_) {
    if (d < 2) {
      throw InvalidTruncation("resonator truncation must be at least 2, got " + std::to_string(d));
    }
    total_ *= d;
  }
}

int SpaceLayout::dim(Subsystem s) const noexcept {
  return s == Subsystem::qutrit ? kQutritDim : dims_[static_cast<int>(s)];
}

int SpaceLayout::index(const BasisLabel& l) const {
  const int lv = static_cast<int>(l.level);
  if (l.n1 < 0 || l.n1 >= dims_[0] || l.n_bus < 0 || l.n_bus >= dims_[1] || l.n2 < 0 ||
      l.n2 >= dims_[2] || lv < 0 || lv >= kQutritDim) {
    throw OutOfRange("basis label (" + std::to_string(l.n1) + "," + std::to_string(l.n_bus) + "," +
                     std::to_string(l.n2) + ") outside truncation");
  }
  return ((l.n1 * dims_[1] + l.n_bus) * dims_[2] + l.n2) * kQutritDim + lv;
}

BasisLabel SpaceLayout::label(int index) const {
  if (index < 0 || index >= total_) throw OutOfRange("basis index " + std::to_string(index));
  BasisLabel l;
  l.level = static_cast<Level>(index % kQutritDim);
  index /= kQutritDim;
  l.n2 = index % dims_[2];
  index /= dims_[2];
  l.n_bus = index % dims_[1];
  l.n1 = index / dims_[1];
  return l;
}

int SpaceLayout::excitations(int index) const {
  const BasisLabel l = label(index);
  return l.n1 + l.n_bus + l.n2 + static_cast<int>(l.level);
}

std::string SpaceLayout::ket(int index) const {
  const BasisLabel l = label(index);
  std::ostringstream os;
  os << '|' << l.n1 << ',' << l.n_bus << ',' << l.n2 << ',' << to_char(l.level) << '>';
  return os.str();
}

SpaceLayout build_space(std::array<int, 3> resonator_dims) { return SpaceLayout(resonator_dims); }

// ---------------------------------------------------------------------------

Operator::Operator(SpaceLayout layout, Matrix matrix) : layout_(layout), matrix_(std::move(matrix)) {
  const int n = layout_.total_dim();
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw DimensionMismatch("operator matrix is " + std::to_string(matrix_.rows()) + "x" +
                            std::to_string(matrix_.cols()) + ", layout needs " + std::to_string(n));
  }
}

Operator Operator::zero(const SpaceLayout& layout) {
  return Operator(layout, Matrix::Zero(layout.total_dim(), layout.total_dim()));
}

Operator Operator::identity(const SpaceLayout& layout) {
  return Operator(layout, Matrix::Identity(layout.total_dim(), layout.total_dim()));
}

Operator Operator::adjoint() const { return Operator(layout_, matrix_.adjoint()); }

bool Operator::is_hermitian(double rel_tol) const {
  const double scale = std::max(matrix_.norm(), 1.0);
  return (matrix_ - matrix_.adjoint()).norm() <= rel_tol * scale;
}

namespace {
void require_same_layout(const SpaceLayout& a, const SpaceLayout& b) {
  if (!(a == b)) throw DimensionMismatch("operands live on different layouts");
}
}  // namespace

Operator operator+(const Operator& a, const Operator& b) {
  require_same_layout(a.layout_, b.layout_);
  return Operator(a.layout_, a.matrix_ + b.matrix_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_layout(a.layout_, b.layout_);
  return Operator(a.layout_, a.matrix_ - b.matrix_);
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_layout(a.layout_, b.layout_);
  return Operator(a.layout_, a.matrix_ * b.matrix_);
}

Operator operator*(Complex s, const Operator& a) { return Operator(a.layout_, s * a.matrix_); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator embed(const SpaceLayout& layout, Subsystem s, const Matrix& local) {
  const int d = layout.dim(s);
  if (local.rows() != d || local.cols() != d) {
    throw DimensionMismatch("local operator on " + to_string(s) + " must be " + std::to_string(d) + "x" +
                            std::to_string(d));
  }
  const int n = layout.total_dim();
  Matrix m = Matrix::Zero(n, n);
  auto local_index = [s](const BasisLabel& l) {
    switch (s) {
      case Subsystem::r1: return l.n1;
      case Subsystem::bus: return l.n_bus;
      case Subsystem::r2: return l.n2;
      case Subsystem::qutrit: return static_cast<int>(l.level);
    }
    return 0;
  };
  auto with_local = [s](BasisLabel l, int k) {
    switch (s) {
      case Subsystem::r1: l.n1 = k; break;
      case Subsystem::bus: l.n_bus = k; break;
      case Subsystem::r2: l.n2 = k; break;
      case Subsystem::qutrit: l.level = static_cast<Level>(k); break;
    }
    return l;
  };
  for (int col = 0; col < n; ++col) {
    const BasisLabel lc = layout.label(col);
    const int kc = local_index(lc);
    for (int kr = 0; kr < d; ++kr) {
      const Complex v = local(kr, kc);
      if (v != Complex(0.0)) m(layout.index(with_local(lc, kr)), col) = v;
    }
  }
  return Operator(layout, std::move(m));
}

Operator annihilation(const SpaceLayout& layout, Subsystem mode) {
  if (mode == Subsystem::qutrit) {
    throw WrongSubsystem("annihilation operator requested on the qutrit; use qutrit_transition");
  }
  const int d = layout.dim(mode);
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return embed(layout, mode, a);
}

Operator creation(const SpaceLayout& layout, Subsystem mode) { return annihilation(layout, mode).adjoint(); }

Operator number(const SpaceLayout& layout, Subsystem mode) {
  const Operator a = annihilation(layout, mode);
  return a.adjoint() * a;
}

Operator qutrit_transition(const SpaceLayout& layout, QutritOp which) {
  Matrix q = Matrix::Zero(3, 3);
  const int g = 0, e = 1, f = 2;
  switch (which) {
    case QutritOp::raise_ge: q(e, g) = 1.0; break;
    case QutritOp::raise_ef: q(f, e) = 1.0; break;
    case QutritOp::proj_e: q(e, e) = 1.0; break;
    case QutritOp::proj_f: q(f, f) = 1.0; break;
  }
  return embed(layout, Subsystem::qutrit, q);
}

// ---------------------------------------------------------------------------

PureState::PureState(SpaceLayout layout, Vector amplitudes) : layout_(layout), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != layout_.total_dim()) {
    throw DimensionMismatch("state vector length " + std::to_string(amplitudes_.size()) + " vs layout " +
                            std::to_string(layout_.total_dim()));
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw InvalidParameter("state vector is not normalized (norm " + std::to_string(norm) + ")");
  }
}

PureState PureState::normalized(SpaceLayout layout, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw InvalidParameter("cannot normalize the zero vector");
  amplitudes /= norm;
  return PureState(layout, std::move(amplitudes));
}

Complex PureState::inner(const PureState& other) const {
  require_same_layout(layout_, other.layout_);
  return amplitudes_.dot(other.amplitudes_);
}

PureState basis_state(const SpaceLayout& layout, int n1, int n_bus, int n2, Level level) {
  Vector v = Vector::Zero(layout.total_dim());
  v(layout.index({n1, n_bus, n2, level})) = 1.0;
  return PureState(layout, std::move(v));
}

// ---------------------------------------------------------------------------

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

DensityMatrix::DensityMatrix(SpaceLayout layout, Matrix matrix) : layout_(layout), matrix_(std::move(matrix)) {
  const int n = layout_.total_dim();
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw DimensionMismatch("density matrix is " + std::to_string(matrix_.rows()) + "x" +
                            std::to_string(matrix_.cols()) + ", layout needs " + std::to_string(n));
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.layout(), psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
  return (matrix_.cwiseProduct(matrix_.transpose())).sum().real();
}

double DensityMatrix::hermiticity_error() const { return max_abs(matrix_ - matrix_.adjoint()); }

double DensityMatrix::min_eigenvalue() const {
  const Matrix h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

PhysicalityReport DensityMatrix::physicality() const {
  return {std::abs(trace() - 1.0), hermiticity_error(), min_eigenvalue()};
}

Complex DensityMatrix::expectation(const Operator& op) const {
  require_same_layout(layout_, op.layout());
  return (op.matrix() * matrix_).trace();
}

}  // namespace qbus
