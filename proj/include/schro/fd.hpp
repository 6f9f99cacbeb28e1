#pragma once

// Finite-difference discretization of the (log-price) Black-Scholes equation:
// spatial grids, the qubit-local shift operators s_j^-/s_j^+ and their sums,
// difference operators and the semi-discrete ODE systems du/dtau = A u + b.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schro/linalg.hpp"

namespace schro {

enum class BoundaryKind { dirichlet, mixed };
enum class DiffKind { forward, backward, central, laplacian };
enum class PayoffKind { call, cash_or_nothing };

inline std::string_view to_string(BoundaryKind b) {
  return b == BoundaryKind::dirichlet ? "dirichlet" : "mixed";
}

inline BoundaryKind parse_boundary(std::string_view s) {
  if (s == "dirichlet") return BoundaryKind::dirichlet;
  if (s == "mixed") return BoundaryKind::mixed;
  throw ConfigError("unknown boundary kind '" + std::string(s) + "' (expected dirichlet|mixed)");
}

/// Uniform log-price grid x_j = left + j h, j = 0..2^n_x + 1.
///
/// The 2^n_x nodes x_1..x_{2^n_x} are the interior unknowns; x_0 and
/// x_{2^n_x+1} are boundary nodes. A mixed boundary additionally promotes the
/// right boundary node to an unknown.
struct SpatialGrid {
  double left = 0.0;
  double right = 1.0;
  int n_x = 1;

  SpatialGrid() = default;
  SpatialGrid(double left_, double right_, int n_x_) : left(left_), right(right_), n_x(n_x_) {
    if (!(left < right)) throw ConfigError("SpatialGrid: left must be < right");
    if (n_x < 1 || n_x > kMaxOracleQubits) throw RangeError("SpatialGrid: n_x out of range");
  }

  Eigen::Index interior_count() const { return Eigen::Index{1} << n_x; }
  /// Number of intervals N_x between left and right.
  Eigen::Index intervals() const { return interior_count() + 1; }
  double h() const { return (right - left) / double(intervals()); }
  double node(Eigen::Index j) const { return left + double(j) * h(); }

  /// Count of unknowns for the given boundary kind.
  Eigen::Index unknowns(BoundaryKind b) const {
    return b == BoundaryKind::mixed ? interior_count() + 1 : interior_count();
  }
  /// Coordinates of the unknowns, x_1..x_{unknowns}.
  RealVector unknown_nodes(BoundaryKind b) const {
    RealVector x(unknowns(b));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = node(i + 1);
    return x;
  }
};

struct BsParams1D {
  double r = 0.02;
  double sigma = 0.3;
  double strike = 30.0;
  double maturity = 1.0;

  void validate() const {
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (!(maturity > 0.0)) throw ConfigError("maturity must be positive");
    if (!(strike > 0.0)) throw ConfigError("strike must be positive");
  }
};

struct BsParamsD {
  int dim = 2;
  double r = 0.03;
  std::vector<double> sigmas{0.3, 0.3};
  /// Row-major dim x dim correlation matrix.
  std::vector<double> rho{1.0, 0.0, 0.0, 1.0};
  std::vector<double> strikes{50.0, 50.0};
  PayoffKind payoff = PayoffKind::cash_or_nothing;
  double cash = 1.0;

  double corr(int m, int n) const { return rho[std::size_t(m * dim + n)]; }

  void validate() const {
    if (dim < 1) throw ConfigError("dim must be >= 1");
    const auto d = std::size_t(dim);
    if (sigmas.size() != d || strikes.size() != d || rho.size() != d * d)
      throw ConfigError("BsParamsD: sigmas/strikes/rho sizes inconsistent with dim");
    for (int m = 0; m < dim; ++m) {
      if (!(sigmas[std::size_t(m)] > 0.0)) throw ConfigError("sigmas must be positive");
      if (!(strikes[std::size_t(m)] > 0.0)) throw ConfigError("strikes must be positive");
      if (std::abs(corr(m, m) - 1.0) > 1e-12) throw ConfigError("rho must have unit diagonal");
      for (int n = 0; n < dim; ++n) {
        if (std::abs(corr(m, n) - corr(n, m)) > 1e-12) throw ConfigError("rho must be symmetric");
        if (corr(m, n) < -1.0 || corr(m, n) > 1.0) throw ConfigError("rho entries must lie in [-1,1]");
      }
    }
  }

  bool diagonal_correlation() const {
    for (int m = 0; m < dim; ++m)
      for (int n = 0; n < dim; ++n)
        if (m != n && corr(m, n) != 0.0) return false;
    return true;
  }
};

/// Semi-discrete system du/dtau = A u + b(tau), b(tau) = exp(-decay_rate tau) b(0).
struct OdeSystem {
  SparseMatrix a;
  ComplexVector b;
  ComplexVector u0;
  std::vector<SpatialGrid> axes;
  BoundaryKind boundary = BoundaryKind::dirichlet;
  double decay_rate = 0.0;

  int dim() const { return int(axes.size()); }
  Eigen::Index size() const { return a.rows(); }
  bool homogeneous() const { return b.size() == 0 || b.isZero(0.0); }
};

// ---------------------------------------------------------------------------
// Shift operators

/// Dense S^- = sum_{j=1}^{n-1} |j-1><j| of size n (superdiagonal of ones).
inline ComplexMatrix shift_minus_dense(Eigen::Index n) {
  check_budget(n, n, "shift_minus");
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 1; j < n; ++j) s(j - 1, j) = 1.0;
  return s;
}

inline ComplexMatrix sigma01() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

inline ComplexMatrix sigma10() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

namespace detail {
inline ComplexMatrix kron_power(const ComplexMatrix& m, int count) {
  ComplexMatrix out = identity(1);
  for (int i = 0; i < count; ++i) out = kron(out, m);
  return out;
}

inline ComplexMatrix shift_term(int n_x, int j, const ComplexMatrix& head, const ComplexMatrix& tail) {
  if (n_x < 1 || n_x > kMaxOracleQubits) throw BudgetError("shift term: n_x outside the oracle budget");
  if (j < 1 || j > n_x) throw RangeError("shift term: j must satisfy 1 <= j <= n_x");
  return kron(kron(identity(Eigen::Index{1} << (n_x - j)), head), kron_power(tail, j - 1));
}
}  // namespace detail

/// s_j^- = I^{(n_x-j)} (x) sigma01 (x) sigma10^{(j-1)}; j = 1 acts on the least significant qubit.
inline ComplexMatrix shift_term_minus(int n_x, int j) {
  return detail::shift_term(n_x, j, sigma01(), sigma10());
}

/// s_j^+ = I^{(n_x-j)} (x) sigma10 (x) sigma01^{(j-1)}.
inline ComplexMatrix shift_term_plus(int n_x, int j) {
  return detail::shift_term(n_x, j, sigma10(), sigma01());
}

inline ComplexMatrix shift_minus(int n_x) {
  if (n_x < 1 || n_x > kMaxOracleQubits) throw BudgetError("shift_minus: n_x outside the oracle budget");
  return shift_minus_dense(Eigen::Index{1} << n_x);
}

inline ComplexMatrix shift_plus(int n_x) { return shift_minus(n_x).adjoint(); }

/// Sum of the MPO terms s_j^- (equals shift_minus exactly).
inline ComplexMatrix shift_minus_mpo(int n_x) {
  ComplexMatrix s = ComplexMatrix::Zero(Eigen::Index{1} << n_x, Eigen::Index{1} << n_x);
  for (int j = 1; j <= n_x; ++j) s += shift_term_minus(n_x, j);
  return s;
}

// ---------------------------------------------------------------------------
// Difference operators

/// Dirichlet difference operators on n unknowns with spacing h.
inline ComplexMatrix diff_op(DiffKind kind, Eigen::Index n, double h) {
  const ComplexMatrix sm = shift_minus_dense(n);
  const ComplexMatrix sp = sm.adjoint();
  const ComplexMatrix id = identity(n);
  switch (kind) {
    case DiffKind::forward: return (sm - id) / h;
    case DiffKind::backward: return (id - sp) / h;
    case DiffKind::central: return (sm - sp) / (2.0 * h);
    case DiffKind::laplacian: return (sm + sp - 2.0 * id) / (h * h);
  }
  throw RangeError("diff_op: unknown kind");
}

inline ComplexMatrix diff_op(DiffKind kind, const SpatialGrid& grid) {
  return diff_op(kind, grid.interior_count(), grid.h());
}

namespace detail {
/// Central first difference / Laplacian on the unknowns of `grid` for the given
/// boundary. The mixed variant keeps the right boundary node as an unknown and
/// eliminates the virtual node through u_{N+1} = u_{N-1}.
inline ComplexMatrix axis_central(const SpatialGrid& grid, BoundaryKind b) {
  const Eigen::Index n = grid.unknowns(b);
  ComplexMatrix d = diff_op(DiffKind::central, n, grid.h());
  if (b == BoundaryKind::mixed) d.row(n - 1).setZero();
  return d;
}

inline ComplexMatrix axis_laplacian(const SpatialGrid& grid, BoundaryKind b) {
  const Eigen::Index n = grid.unknowns(b);
  const double h2 = grid.h() * grid.h();
  ComplexMatrix l = diff_op(DiffKind::laplacian, n, grid.h());
  if (b == BoundaryKind::mixed) l(n - 1, n - 2) = 2.0 / h2;
  return l;
}

/// I^{(m)} (x) op (x) I^{(dim-m-1)} with every axis of size `n`.
inline SparseMatrix embed_axis(const ComplexMatrix& op, int m, int dim, Eigen::Index n) {
  Eigen::Index before = 1, after = 1;
  for (int i = 0; i < m; ++i) before *= n;
  for (int i = m + 1; i < dim; ++i) after *= n;
  check_budget(before * n * after, before * n * after, "embed_axis");
  return kron(kron(sparse_identity(before), to_sparse(op)), sparse_identity(after));
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Black-Scholes assembly

/// 1-D call in the variable u = w - e^x. With a Dirichlet boundary the two
/// boundary values u(x_0) = -e^{x_0}, u(x_{N_x}) = -K e^{-r tau} are folded into
/// b; `neglect_left_boundary` drops the (tiny) left contribution. The mixed
/// boundary keeps zero slope at the right end (b carries only the left term).
inline OdeSystem assemble_bs_1d(const BsParams1D& p, const SpatialGrid& grid, BoundaryKind boundary,
                                bool neglect_left_boundary = true) {
  p.validate();
  const double h = grid.h();
  const double conv = p.r - 0.5 * p.sigma * p.sigma;
  const double diff = 0.5 * p.sigma * p.sigma;

  OdeSystem sys;
  sys.axes = {grid};
  sys.boundary = boundary;
  sys.decay_rate = p.r;

  const Eigen::Index n = grid.unknowns(boundary);
  sys.a = to_sparse(conv * detail::axis_central(grid, boundary) + diff * detail::axis_laplacian(grid, boundary) -
                    p.r * identity(n));

  const double left_coef = -conv / (2.0 * h) + diff / (h * h);
  const double right_coef = conv / (2.0 * h) + diff / (h * h);
  sys.b = ComplexVector::Zero(n);
  if (!neglect_left_boundary) sys.b(0) += left_coef * (-std::exp(grid.node(0)));
  if (boundary == BoundaryKind::dirichlet) sys.b(n - 1) += right_coef * (-p.strike);

  const RealVector x = grid.unknown_nodes(boundary);
  sys.u0.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = std::exp(x(i));
    sys.u0(i) = std::max(s - p.strike, 0.0) - s;
  }
  return sys;
}

/// d-dimensional operator
///   A = sum_m (r - sigma_m^2/2) (D^pm)_m + sum_{m,n} sigma_m sigma_n rho_mn / 2 (D^Delta)_mn - r I
/// with (D^Delta)_mn = (D^pm)_m (D^pm)_n for m != n. The source is homogeneous
/// (zero value on the left face; zero slope on the right face for `mixed`, zero
/// value for `dirichlet`). `diagonal_only` drops the cross-derivative terms.
inline OdeSystem assemble_bs_ddim(const BsParamsD& p, const SpatialGrid& grid, bool diagonal_only,
                                  BoundaryKind boundary = BoundaryKind::mixed) {
  p.validate();
  if (!diagonal_only && p.dim > 2 && !p.diagonal_correlation())
    throw UnsupportedError("assemble_bs_ddim: cross terms are implemented for d <= 2 only");
  if (p.payoff == PayoffKind::call && p.dim != 1)
    throw UnsupportedError("assemble_bs_ddim: call payoff is supported for d = 1 only");

  const int d = p.dim;
  const Eigen::Index n = grid.unknowns(boundary);
  Eigen::Index total = 1;
  for (int m = 0; m < d; ++m) total *= n;
  check_budget(total, total, "assemble_bs_ddim");

  const ComplexMatrix central = detail::axis_central(grid, boundary);
  const ComplexMatrix lap = detail::axis_laplacian(grid, boundary);

  OdeSystem sys;
  sys.axes.assign(std::size_t(d), grid);
  sys.boundary = boundary;
  sys.decay_rate = p.r;
  sys.a = -p.r * sparse_identity(total);
  for (int m = 0; m < d; ++m) {
    const double s = p.sigmas[std::size_t(m)];
    sys.a += (p.r - 0.5 * s * s) * detail::embed_axis(central, m, d, n);
    sys.a += 0.5 * s * s * p.corr(m, m) * detail::embed_axis(lap, m, d, n);
  }
  if (!diagonal_only) {
    for (int m = 0; m < d; ++m)
      for (int k = 0; k < d; ++k) {
        if (m == k || p.corr(m, k) == 0.0) continue;
        const double coef = 0.5 * p.sigmas[std::size_t(m)] * p.sigmas[std::size_t(k)] * p.corr(m, k);
        const SparseMatrix cross = detail::embed_axis(central, m, d, n) * detail::embed_axis(central, k, d, n);
        sys.a += coef * cross;
      }
  }
  sys.b = ComplexVector::Zero(total);

  const RealVector x = grid.unknown_nodes(boundary);
  sys.u0.resize(total);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx;
    bool in_money = true;
    double s_first = 0.0;
    for (int m = d - 1; m >= 0; --m) {
      const double xm = x(rem % n);
      rem /= n;
      if (m == 0) s_first = std::exp(xm);
      if (!(xm > std::log(p.strikes[std::size_t(m)]))) in_money = false;
    }
    if (p.payoff == PayoffKind::cash_or_nothing) {
      sys.u0(idx) = in_money ? p.cash : 0.0;
    } else {
      sys.u0(idx) = std::max(s_first - p.strikes[0], 0.0) - s_first;
    }
  }
  return sys;
}

}  // namespace schro
