// Copyright 2026 the rio-cqed authors
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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rio {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Hard cap on composite Hilbert-space dimension (12 qubits / 7 qutrits).
inline constexpr Eigen::Index kMaxDimension = 4096;

/// Tolerance for identities that hold by construction (exact algebra).
inline constexpr double kConstructiveTol = 1e-12;
/// Tolerance for quantities accumulated through eigendecompositions.
inline constexpr double kDerivedTol = 1e-10;

namespace detail {

inline bool all_finite(const Matrix& m) { return m.allFinite(); }
inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline void check_dimension(Eigen::Index dim, const char* what) {
  if (dim > kMaxDimension)
    throw std::length_error(std::string(what) + ": space too large (" +
                            std::to_string(dim) + " > " +
                            std::to_string(kMaxDimension) + ")");
}

}  // namespace detail

/// Kronecker product, row-major composite index convention: the left factor
/// owns the most significant digit. Associative bit-for-bit whenever entries
/// are dyadic rationals scaled by powers of sqrt(2) (every gate in this
/// library); for general matrices reassociation drifts at rounding level.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  detail::check_dimension(a.rows() * b.rows(), "kron");
  if (!detail::all_finite(a) || !detail::all_finite(b))
    throw std::invalid_argument("kron: non-finite entries");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Square matrix validated as Hermitian on construction.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix m, double tol = kConstructiveTol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("HermitianMatrix: not square");
    if (!detail::all_finite(m_)) throw std::invalid_argument("HermitianMatrix: non-finite entries");
    detail::check_dimension(m_.rows(), "HermitianMatrix");
    double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol)
      throw std::invalid_argument("HermitianMatrix: deviation from H = H^dag is " +
                                  std::to_string(dev));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

/// Square matrix validated as unitary on construction. Evolution operators
/// built spectrally are unitary by construction and enter through
/// from_evolution, which only checks finiteness.
class UnitaryMatrix {
 public:
  static UnitaryMatrix checked(Matrix m, double tol = kDerivedTol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("UnitaryMatrix: not square");
    if (!detail::all_finite(m)) throw std::invalid_argument("UnitaryMatrix: non-finite entries");
    detail::check_dimension(m.rows(), "UnitaryMatrix");
    Matrix gram = m.adjoint() * m;
    gram -= Matrix::Identity(m.rows(), m.cols());
    double dev = gram.cwiseAbs().maxCoeff();
    if (dev > tol)
      throw std::invalid_argument("UnitaryMatrix: deviation from U^dag U = I is " +
                                  std::to_string(dev));
    return UnitaryMatrix(std::move(m));
  }

  static UnitaryMatrix from_evolution(Matrix m) {
    if (!detail::all_finite(m)) throw std::invalid_argument("UnitaryMatrix: non-finite entries");
    detail::check_dimension(m.rows(), "UnitaryMatrix");
    return UnitaryMatrix(std::move(m));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  Matrix adjoint() const { return m_.adjoint(); }

 private:
  explicit UnitaryMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// exp(-i H t) through the spectral theorem. Exact on the eigenbasis, so the
/// result is unitary to solver precision regardless of t.
inline UnitaryMatrix expm_hermitian(const HermitianMatrix& h, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("expm_hermitian: non-finite time");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.mat());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("expm_hermitian: eigendecomposition failed (dim " +
                             std::to_string(h.dim()) + ", max |H| = " +
                             std::to_string(h.mat().cwiseAbs().maxCoeff()) + ")");
  const auto& vals = solver.eigenvalues();
  const Matrix& vecs = solver.eigenvectors();
  Vector phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k)
    phases(k) = std::exp(cxd(0.0, -vals(k) * t));
  return UnitaryMatrix::from_evolution(vecs * phases.asDiagonal() * vecs.adjoint());
}

/// Normalized state over a list of subsystem dimensions (leftmost subsystem
/// is the most significant digit of the composite index).
class StateVector {
 public:
  StateVector(std::vector<int> dims, Vector amps)
      : dims_(std::move(dims)), amps_(std::move(amps)) {
    validate();
    double n = amps_.norm();
    if (n < 1e-14) throw std::invalid_argument("StateVector: zero vector");
    amps_ /= n;
  }

  /// Adopts amplitudes as-is (no renormalization). For unitary pipelines that
  /// must preserve phases and norm bit-for-bit.
  static StateVector unchecked(std::vector<int> dims, Vector amps) {
    return StateVector(std::move(dims), std::move(amps), Unchecked{});
  }

  static StateVector basis(std::vector<int> dims, Eigen::Index index) {
    Eigen::Index total = 1;
    for (int d : dims) total *= d;
    if (index < 0 || index >= total) throw std::invalid_argument("StateVector: basis index out of range");
    Vector amps = Vector::Zero(total);
    amps(index) = 1.0;
    return StateVector(std::move(dims), std::move(amps));
  }

  const std::vector<int>& dims() const { return dims_; }
  const Vector& amps() const { return amps_; }
  Eigen::Index dim() const { return amps_.size(); }
  int subsystems() const { return static_cast<int>(dims_.size()); }
  double norm() const { return amps_.norm(); }

 private:
  struct Unchecked {};
  StateVector(std::vector<int> dims, Vector amps, Unchecked)
      : dims_(std::move(dims)), amps_(std::move(amps)) {
    validate();
  }

  void validate() const {
    if (dims_.empty()) throw std::invalid_argument("StateVector: no subsystems");
    Eigen::Index total = 1;
    for (int d : dims_) {
      if (d < 2) throw std::invalid_argument("StateVector: subsystem dimension < 2");
      total *= d;
      detail::check_dimension(total, "StateVector");
    }
    if (amps_.size() != total)
      throw std::invalid_argument("StateVector: amplitude count " +
                                  std::to_string(amps_.size()) + " does not match space size " +
                                  std::to_string(total));
    if (!detail::all_finite(amps_)) throw std::invalid_argument("StateVector: non-finite amplitudes");
  }

  std::vector<int> dims_;
  Vector amps_;
};

inline StateVector kron(const StateVector& a, const StateVector& b) {
  detail::check_dimension(a.dim() * b.dim(), "kron");
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  Vector amps(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    amps.segment(i * b.dim(), b.dim()) = a.amps()(i) * b.amps();
  return StateVector::unchecked(std::move(dims), std::move(amps));
}

/// |<a|b>|^2. Insensitive to global phase on either argument.
inline double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("fidelity: mismatched spaces");
  return std::norm(a.amps().dot(b.amps()));
}

struct PhaseAlignment {
  cxd phase;        ///< unimodular c maximizing overlap of a with c*b
  double residual;  ///< || a - c*b ||
};

/// Best global-phase match of b onto a: the unimodular c minimizing
/// || a - c*b ||, together with that minimum.
inline PhaseAlignment global_phase_align(const StateVector& a, const StateVector& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("global_phase_align: mismatched spaces");
  cxd overlap = b.amps().dot(a.amps());
  if (std::abs(overlap) < 1e-14)
    throw std::invalid_argument("global_phase_align: no alignment (orthogonal inputs)");
  cxd phase = overlap / std::abs(overlap);
  double residual = (a.amps() - phase * b.amps()).norm();
  return {phase, residual};
}

}  // namespace rio
