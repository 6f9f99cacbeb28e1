#pragma once

// Complex linear algebra shared by every module: Kronecker products,
// matrix exponentials (full and action-on-vector), operator norms and the
// Hermitian / anti-Hermitian split.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>

#include "schro/errors.hpp"

namespace schro {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Largest dense operator the oracle path will materialize: 2^14 x 2^14.
inline constexpr int kMaxOracleQubits = 14;
inline constexpr Eigen::Index kMaxOracleDim = Eigen::Index{1} << kMaxOracleQubits;

inline void check_budget(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows > kMaxOracleDim || cols > kMaxOracleDim) {
    throw BudgetError(std::string(what) + ": dimension " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " exceeds the dense oracle budget of 2^" +
                      std::to_string(kMaxOracleQubits));
  }
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(what) + ": matrix must be square, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

/// Kronecker product; `a` indexes the more significant block.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() == 0 || b.size() == 0) throw ShapeError("kron: operands must be nonempty");
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  check_budget(rows, cols, "kron");
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

/// (m + m^dagger)/2 and (m - m^dagger)/(2i), so that m = first + i*second.
inline std::pair<ComplexMatrix, ComplexMatrix> hermitian_split(const ComplexMatrix& m) {
  require_square(m, "hermitian_split");
  ComplexMatrix h1 = 0.5 * (m + m.adjoint());
  ComplexMatrix h2 = (m - m.adjoint()) / Complex(0.0, 2.0);
  // Symmetrize exactly so that the outputs are Hermitian bit-for-bit.
  h1 = (0.5 * (h1 + h1.adjoint())).eval();
  h2 = (0.5 * (h2 + h2.adjoint())).eval();
  return {std::move(h1), std::move(h2)};
}

/// exp(i * t * h) for Hermitian h via eigendecomposition.
inline ComplexMatrix unitary_exp(const ComplexMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const RealVector& lambda = es.eigenvalues();
  ComplexVector phases(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) phases(i) = std::exp(kI * (t * lambda(i)));
  const ComplexMatrix& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

/// exp(t * m). Hermitian and skew-Hermitian inputs go through an
/// eigendecomposition; everything else through scaling-and-squaring Pade.
inline ComplexMatrix matexp(const ComplexMatrix& m, double t) {
  require_square(m, "matexp");
  check_budget(m.rows(), m.cols(), "matexp");
  if (m.size() == 0) return m;
  const double scale = std::max(1.0, max_abs(m));
  const double tol = 1e-14 * scale;
  if (max_abs(m - m.adjoint()) <= tol) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
    RealVector e = (t * es.eigenvalues().array()).exp();
    const ComplexMatrix& v = es.eigenvectors();
    return v * e.cast<Complex>().asDiagonal() * v.adjoint();
  }
  if (max_abs(m + m.adjoint()) <= tol) {
    // m = i*h with h Hermitian.
    ComplexMatrix h = -kI * m;
    return unitary_exp(0.5 * (h + h.adjoint()), t);
  }
  ComplexMatrix tm = t * m;
  return tm.exp();
}

/// Largest singular value.
///
/// Computed as sqrt(lambda_max(m^dagger m)) with a Hermitian eigensolver up to
/// 2048 rows; larger inputs fall back to power iteration on m^dagger m.
inline double opnorm2(const ComplexMatrix& m) {
  require_square(m, "opnorm2");
  if (m.size() == 0) return 0.0;
  const ComplexMatrix g = m.adjoint() * m;
  if (g.rows() <= 2048) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  // Deterministic start vector that is not orthogonal to structured singular
  // vectors (an all-equal start is annihilated by e.g. [[1,-1],[-1,1]]).
  ComplexVector v(g.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = Complex(1.0 + std::fmod(0.6180339887498949 * double(i + 1), 1.0),
                   std::fmod(0.4142135623730951 * double(i + 1), 1.0));
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    ComplexVector w = g * v;
    const double next = std::real(v.dot(w));
    const double nrm = w.norm();
    if (nrm == 0.0) return 0.0;
    v = w / nrm;
    if (std::abs(next - lambda) <= 1e-12 * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(0.0, lambda));
}

/// Induced 1-norm (max column sum); cheap upper bound used for step control.
inline double norm1(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().colwise().sum().maxCoeff();
}

inline double norm1(const SparseMatrix& m) {
  RealVector col = RealVector::Zero(m.cols());
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) col(it.col()) += std::abs(it.value());
  return m.cols() == 0 ? 0.0 : col.maxCoeff();
}

/// exp(t * M) v for an operator given only through its action, using a
/// truncated Taylor series on s sub-steps with s = ceil(t * bound).
///
/// `apply(x)` must return M x; `bound` is any upper bound on ||M||.
template <class ApplyFn>
ComplexVector expm_action(ApplyFn&& apply, const ComplexVector& v, double t, double bound,
                          double tol = 1e-15) {
  const double a = std::abs(t) * bound;
  const int steps = std::max(1, static_cast<int>(std::ceil(a)));
  const double dt = t / steps;
  ComplexVector x = v;
  for (int s = 0; s < steps; ++s) {
    ComplexVector term = x;
    ComplexVector sum = x;
    for (int k = 1; k <= 60; ++k) {
      term = (dt / k) * apply(term);
      sum += term;
      if (term.norm() <= tol * sum.norm()) break;
    }
    x = std::move(sum);
  }
  return x;
}

inline SparseMatrix to_sparse(const ComplexMatrix& m) {
  return m.sparseView(Complex(0.0), 0.0);
}

inline ComplexMatrix to_dense(const SparseMatrix& m) {
  check_budget(m.rows(), m.cols(), "to_dense");
  return ComplexMatrix(m);
}

inline SparseMatrix sparse_identity(Eigen::Index n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return m;
}

inline SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out = Eigen::kroneckerProduct(a, b);
  out.makeCompressed();
  return out;
}

inline double max_abs(const SparseMatrix& m) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

/// Sparse counterpart of hermitian_split.
inline std::pair<SparseMatrix, SparseMatrix> hermitian_split(const SparseMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("hermitian_split: matrix is not square");
  const SparseMatrix adj = m.adjoint();
  SparseMatrix h1 = 0.5 * (m + adj);
  SparseMatrix h2 = (m - adj) * Complex(0.0, -0.5);
  const SparseMatrix h1a = h1.adjoint(), h2a = h2.adjoint();
  h1 = 0.5 * (h1 + h1a);
  h2 = 0.5 * (h2 + h2a);
  h1.prune(Complex(0.0), 0.0);
  h2.prune(Complex(0.0), 0.0);
  return {std::move(h1), std::move(h2)};
}

}  // namespace schro
