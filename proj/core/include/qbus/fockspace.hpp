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
#include <complex>
#include <string>

#include <Eigen/Dense>

namespace qbus {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Subsystems in canonical tensor order: r1, bus R, r2, qutrit q.
enum class Subsystem { r1 = 0, bus = 1, r2 = 2, qutrit = 3 };

enum class Level { g = 0, e = 1, f = 2 };

/// Qutrit operators appearing in the Hamiltonian and the dephasing terms.
enum class QutritOp {
  raise_ge,  // |e><g|
  raise_ef,  // |f><e|
  proj_e,    // |e><e|
  proj_f,    // |f><f|
};

std::string to_string(Subsystem s);
char to_char(Level l);

/// Occupation numbers (n1, n_R, n2) and qutrit level of one product basis ket.
struct BasisLabel {
  int n1 = 0;
  int n_bus = 0;
  int n2 = 0;
  Level level = Level::g;

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

/// Tensor-product bookkeeping for three truncated bosonic modes and one
/// qutrit. The qutrit index varies fastest, r1 slowest.
class SpaceLayout {
 public:
  static constexpr int kQutritDim = 3;

  /// Throws InvalidTruncation if any resonator dimension is below 2.
  explicit SpaceLayout(std::array<int, 3> resonator_dims = {3, 3, 3});

  const std::array<int, 3>& resonator_dims() const noexcept { return dims_; }
  int dim(Subsystem s) const noexcept;
  int total_dim() const noexcept { return total_; }

  /// Throws OutOfRange when an occupation exceeds its truncation.
  int index(const BasisLabel& label) const;
  BasisLabel label(int index) const;

  /// Total excitation number n1 + n_R + n2 + (0, 1, 2 for g, e, f). The
  /// rotating-wave Hamiltonian conserves it.
  int excitations(int index) const;

  /// Printable ket in the canonical order, e.g. "|1,0,0,g>".
  std::string ket(int index) const;

  friend bool operator==(const SpaceLayout& a, const SpaceLayout& b) { return a.dims_ == b.dims_; }

 private:
  std::array<int, 3> dims_;
  int total_;
};

SpaceLayout build_space(std::array<int, 3> resonator_dims);

/// Dense operator on the full tensor-product space.
class Operator {
 public:
  Operator(SpaceLayout layout, Matrix matrix);

  static Operator zero(const SpaceLayout& layout);
  static Operator identity(const SpaceLayout& layout);

  const SpaceLayout& layout() const noexcept { return layout_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  Complex operator()(int row, int col) const { return matrix_(row, col); }

  Operator adjoint() const;

  /// ||A - A^dagger|| / max(||A||, 1) <= rel_tol (Frobenius norms).
  bool is_hermitian(double rel_tol = 1e-12) const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);

 private:
  SpaceLayout layout_;
  Matrix matrix_;
};

Operator commutator(const Operator& a, const Operator& b);

/// Embed a local operator acting on one subsystem (identity elsewhere).
Operator embed(const SpaceLayout& layout, Subsystem s, const Matrix& local);

/// a or b_j on the named resonator. Throws WrongSubsystem for the qutrit.
Operator annihilation(const SpaceLayout& layout, Subsystem mode);
Operator creation(const SpaceLayout& layout, Subsystem mode);
Operator number(const SpaceLayout& layout, Subsystem mode);

Operator qutrit_transition(const SpaceLayout& layout, QutritOp which);

/// Normalized state vector.
class PureState {
 public:
  /// Throws InvalidParameter unless | ||amplitudes|| - 1 | <= 1e-12.
  PureState(SpaceLayout layout, Vector amplitudes);

  /// Rescales to unit norm; throws InvalidParameter on a zero vector.
  static PureState normalized(SpaceLayout layout, Vector amplitudes);

  const SpaceLayout& layout() const noexcept { return layout_; }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Complex amplitude(const BasisLabel& label) const { return amplitudes_(layout_.index(label)); }

  /// <this|other>
  Complex inner(const PureState& other) const;

 private:
  SpaceLayout layout_;
  Vector amplitudes_;
};

/// |n1>_1 |n_R>_R |n2>_2 |level>. Throws OutOfRange past the truncation.
PureState basis_state(const SpaceLayout& layout, int n1, int n_bus, int n2, Level level);

struct PhysicalityTolerance {
  double trace = 1e-9;
  double hermiticity = 1e-10;
  double positivity = 1e-8;
};

struct PhysicalityReport {
  double trace_error = 0.0;        // |Tr rho - 1|
  double hermiticity_error = 0.0;  // max |rho - rho^dagger|
  double min_eigenvalue = 1.0;

  bool within(const PhysicalityTolerance& tol) const {
    return trace_error <= tol.trace && hermiticity_error <= tol.hermiticity &&
           min_eigenvalue >= -tol.positivity;
  }
};

class DensityMatrix {
 public:
  DensityMatrix(SpaceLayout layout, Matrix matrix);

  static DensityMatrix from_pure(const PureState& psi);

  const SpaceLayout& layout() const noexcept { return layout_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  Complex operator()(int row, int col) const { return matrix_(row, col); }

  Complex trace() const { return matrix_.trace(); }
  double purity() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  PhysicalityReport physicality() const;

  Complex expectation(const Operator& op) const;

 private:
  SpaceLayout layout_;
  Matrix matrix_;
};

/// Max-norm distance used for hermiticity checks and commutator tests.
double max_abs(const Matrix& m);

}  // namespace qbus
