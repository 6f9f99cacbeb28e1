#pragma once

// Schrodingerisation of du/dtau = A u + b: dilation to a homogeneous system,
// Hermitian split C = C1 + i C2, warped phase transform v = e^{-p} u_bar on a
// periodic p-grid, and the Hamiltonian H = C1 (x) D_eta + C2 (x) I that
// drives the Fourier-side evolution d v_hat / dtau = i H v_hat.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schro/fd.hpp"
#include "schro/linalg.hpp"

namespace schro {

enum class Profile { exponential, smooth };
enum class Representation { p_space, eta_space };

inline Profile parse_profile(std::string_view s) {
  if (s == "exponential" || s == "nonsmooth") return Profile::exponential;
  if (s == "smooth") return Profile::smooth;
  throw ConfigError("unknown profile '" + std::string(s) + "' (expected exponential|smooth)");
}

inline std::string_view to_string(Profile p) {
  return p == Profile::exponential ? "exponential" : "smooth";
}

/// Periodic p-grid on [-pi L_p, pi L_p) with N_p = 2^n_p nodes and the dual
/// frequencies eta_k = (k - N_p/2) / L_p.
struct PGrid {
  double l_p = 1.0;
  int n_p = 1;

  PGrid() = default;
  PGrid(double l_p_, int n_p_) : l_p(l_p_), n_p(n_p_) {
    if (!(l_p > 0.0)) throw ConfigError("PGrid: L_p must be positive");
    if (n_p < 1 || n_p > 20) throw RangeError("PGrid: n_p out of range");
  }

  Eigen::Index size() const { return Eigen::Index{1} << n_p; }
  double half_width() const { return kPi * l_p; }
  double delta_p() const { return 2.0 * kPi * l_p / double(size()); }
  double p(Eigen::Index k) const { return -half_width() + double(k) * delta_p(); }
  double eta(Eigen::Index k) const { return (double(k) - double(size() / 2)) / l_p; }

  RealVector nodes() const {
    RealVector out(size());
    for (Eigen::Index k = 0; k < size(); ++k) out(k) = p(k);
    return out;
  }
  RealVector etas() const {
    RealVector out(size());
    for (Eigen::Index k = 0; k < size(); ++k) out(k) = eta(k);
    return out;
  }
};

inline PGrid build_pgrid(double l_p, int n_p) { return PGrid(l_p, n_p); }

/// Initial p-profile: e^{-|p|} or the C^1 variant whose branch on (-1, 0) is the
/// cubic (-3 + 3/e) p^3 + (-5 + 4/e) p^2 - p + 1.
inline double profile_value(Profile profile, double p) {
  if (profile == Profile::smooth && p > -1.0 && p < 0.0) {
    const double e1 = std::exp(-1.0);
    return ((-3.0 + 3.0 * e1) * p + (-5.0 + 4.0 * e1)) * p * p - p + 1.0;
  }
  return std::exp(-std::abs(p));
}

struct DilatedSystem {
  SparseMatrix c;
  SparseMatrix c1;
  SparseMatrix c2;
  /// Diagonal coupling B (base_dim x base_dim); zero when not dilated.
  SparseMatrix b_diag;
  /// Initial dilated vector u(0) (x) |0> + R(0) (x) |1>, or u(0) when not dilated.
  ComplexVector u_bar0;
  Eigen::Index base_dim = 0;
  bool dilated = false;
  double decay_rate = 0.0;
  /// The single nonzero entry of B (0 when not dilated).
  double beta = 0.0;
  std::vector<SpatialGrid> axes;
  BoundaryKind boundary = BoundaryKind::dirichlet;

  Eigen::Index dim() const { return c.rows(); }
};

/// Embed du/dtau = A u + B R(tau), dR/dtau = -r R, R(0) = (1,..,1), into
/// d u_bar / dtau = C u_bar with C = [[A, B], [0, -r I]]. Homogeneous systems
/// pass through undilated with C = A.
inline DilatedSystem dilate(const OdeSystem& sys) {
  if (sys.a.rows() != sys.a.cols()) throw ShapeError("dilate: A is not square");
  DilatedSystem d;
  d.base_dim = sys.size();
  d.decay_rate = sys.decay_rate;
  d.axes = sys.axes;
  d.boundary = sys.boundary;
  if (sys.homogeneous()) {
    d.dilated = false;
    d.c = sys.a;
    d.b_diag = SparseMatrix(d.base_dim, d.base_dim);
    d.u_bar0 = sys.u0;
  } else {
    Eigen::Index nonzero = 0, where = -1;
    for (Eigen::Index i = 0; i < sys.b.size(); ++i)
      if (sys.b(i) != Complex(0.0)) {
        ++nonzero;
        where = i;
      }
    if (nonzero != 1 || where != sys.b.size() - 1 || sys.b(where).imag() != 0.0)
      throw UnsupportedError(
          "dilate: source must be a single real entry at the last node so that b = B (1,..,1); "
          "drop the left boundary term (neglect_left_boundary)");
    const Eigen::Index n = d.base_dim;
    check_budget(2 * n, 2 * n, "dilate");
    d.dilated = true;
    d.beta = sys.b(where).real();
    d.b_diag = SparseMatrix(n, n);
    d.b_diag.insert(where, where) = d.beta;
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(std::size_t(sys.a.nonZeros() + n + 1));
    for (Eigen::Index r = 0; r < sys.a.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(sys.a, r); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
    trip.emplace_back(where, n + where, d.beta);
    for (Eigen::Index i = 0; i < n; ++i) trip.emplace_back(n + i, n + i, -sys.decay_rate);
    d.c = SparseMatrix(2 * n, 2 * n);
    d.c.setFromTriplets(trip.begin(), trip.end());
    d.u_bar0.resize(2 * n);
    d.u_bar0.head(n) = sys.u0;
    d.u_bar0.tail(n).setOnes();
  }
  std::tie(d.c1, d.c2) = hermitian_split(d.c);
  return d;
}

namespace detail {
/// Largest eigenvalue of a Hermitian matrix; Lanczos with full
/// reorthogonalization beyond 2048 rows.
inline double lambda_max_hermitian(const SparseMatrix& hs) {
  if (hs.rows() <= 2048) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ComplexMatrix(hs), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
  }
  const Eigen::Index n = hs.rows();
  const int max_iter = 300;
  std::vector<ComplexVector> basis;
  std::vector<double> alpha, beta;
  ComplexVector q(n);
  for (Eigen::Index i = 0; i < n; ++i) q(i) = 1.0 + 0.5 * std::sin(0.37 * double(i) + 0.1);
  q.normalize();
  double last = -1e300;
  for (int it = 0; it < max_iter; ++it) {
    basis.push_back(q);
    ComplexVector w = hs * q;
    alpha.push_back(std::real(q.dot(w)));
    for (const auto& v : basis) w -= v.dot(w) * v;
    for (const auto& v : basis) w -= v.dot(w) * v;
    const double bnorm = w.norm();
    const int m = int(alpha.size());
    if (bnorm >= 1e-12 && m % 10 != 0 && it + 1 < max_iter) {
      beta.push_back(bnorm);
      q = w / bnorm;
      continue;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[std::size_t(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[std::size_t(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
    const double est = es.eigenvalues().maxCoeff();
    if (bnorm < 1e-12 || (m > 10 && std::abs(est - last) <= 1e-12 * std::max(1.0, std::abs(est))))
      return est;
    last = est;
    beta.push_back(bnorm);
    q = w / bnorm;
  }
  return last;
}
}  // namespace detail

inline double lambda_max_c1(const DilatedSystem& d) { return detail::lambda_max_hermitian(d.c1); }

/// Which Hermitian part sets the recovery threshold: the full dilated C1, or
/// only the A1 block of the unknowns (the dilation block is left out).
enum class ThresholdRule { c1, a1 };

inline ThresholdRule parse_threshold_rule(std::string_view s) {
  if (s == "c1") return ThresholdRule::c1;
  if (s == "a1") return ThresholdRule::a1;
  throw ConfigError("unknown threshold rule '" + std::string(s) + "' (expected c1|a1)");
}

inline std::string_view to_string(ThresholdRule r) { return r == ThresholdRule::c1 ? "c1" : "a1"; }

inline double lambda_max_a1(const DilatedSystem& d) {
  const SparseMatrix a1 = d.c1.topLeftCorner(d.base_dim, d.base_dim);
  return detail::lambda_max_hermitian(a1);
}

/// lambda_max(.) T under `rule`.
inline double recovery_threshold(const DilatedSystem& d, double t, ThresholdRule rule = ThresholdRule::c1) {
  return (rule == ThresholdRule::c1 ? lambda_max_c1(d) : lambda_max_a1(d)) * t;
}

/// Amplitudes over (base (x) p) with base = (dilation, x); flat index
/// base_index * N_p + k. The represented vector is norm_factor * amplitudes.
struct WarpedState {
  ComplexVector amplitudes;
  double norm_factor = 1.0;
  Representation representation = Representation::p_space;
  Eigen::Index base_dim = 0;
  PGrid pgrid;

  ComplexVector physical() const { return norm_factor * amplitudes; }
};

inline WarpedState initial_v(const DilatedSystem& d, const PGrid& g, Profile profile) {
  ComplexVector w(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) w(k) = profile_value(profile, g.p(k));
  WarpedState s;
  s.amplitudes = kron(d.u_bar0, w);
  s.norm_factor = s.amplitudes.norm();
  if (s.norm_factor == 0.0) throw ConfigError("initial_v: initial data is identically zero");
  s.amplitudes /= s.norm_factor;
  s.representation = Representation::p_space;
  s.base_dim = d.u_bar0.size();
  s.pgrid = g;
  return s;
}

/// Unitary centered DFT F[k, j] = exp(i eta_k p_j) / sqrt(N_p) taking p-samples
/// to eta-coefficients. Equal to (-1)^{N_p/2} Z QFT Z, Z the sign flip (-1)^j.
inline ComplexMatrix centered_dft(const PGrid& g) {
  const Eigen::Index n = g.size();
  ComplexMatrix f(n, n);
  const double inv = 1.0 / std::sqrt(double(n));
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j) {
      // eta_k p_j = 2 pi (k - N/2)(j - N/2) / N exactly; reduce the integer
      // product modulo N before converting to an angle.
      const long long kk = (long long)k - (long long)(n / 2);
      const long long jj = (long long)j - (long long)(n / 2);
      long long prod = (kk * jj) % (long long)n;
      if (prod < 0) prod += (long long)n;
      const double angle = 2.0 * kPi * double(prod) / double(n);
      f(k, j) = inv * Complex(std::cos(angle), std::sin(angle));
    }
  return f;
}

namespace detail {
inline WarpedState apply_p_transform(const WarpedState& s, const ComplexMatrix& f, Representation to) {
  const Eigen::Index n = s.pgrid.size();
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> in(s.amplitudes.data(), s.base_dim, n);
  WarpedState out = s;
  Eigen::Map<RowMat> res(out.amplitudes.data(), s.base_dim, n);
  res = in * f.transpose();
  out.representation = to;
  return out;
}
}  // namespace detail

inline WarpedState p_to_eta(const WarpedState& s) {
  if (s.representation != Representation::p_space)
    throw ConfigError("p_to_eta: state is not in p-space representation");
  return detail::apply_p_transform(s, centered_dft(s.pgrid), Representation::eta_space);
}

inline WarpedState eta_to_p(const WarpedState& s) {
  if (s.representation != Representation::eta_space)
    throw ConfigError("eta_to_p: state is not in eta-space representation");
  return detail::apply_p_transform(s, centered_dft(s.pgrid).adjoint(), Representation::p_space);
}

/// H_BS = C1 (x) D_eta + C2 (x) I together with the x-register pieces
/// H1 = gamma1 [sum_j (s_j^- + s_j^+) - 2 I] and H2 = -i gamma2 sum_j (s_j^- - s_j^+).
struct HamiltonianBS {
  SparseMatrix c1;
  SparseMatrix c2;
  PGrid pgrid;
  ComplexMatrix h1;
  ComplexMatrix h2;
  double gamma1 = 0.0;
  double gamma2 = 0.0;

  Eigen::Index base_dim() const { return c1.rows(); }
  Eigen::Index dim() const { return c1.rows() * pgrid.size(); }

  /// eta_k C1 + C2, the generator on the k-th eta block.
  SparseMatrix block(Eigen::Index k) const { return pgrid.eta(k) * c1 + c2; }

  /// Dense H_BS; subject to the oracle budget.
  ComplexMatrix full() const {
    check_budget(dim(), dim(), "HamiltonianBS::full");
    ComplexMatrix d_eta = ComplexMatrix::Zero(pgrid.size(), pgrid.size());
    for (Eigen::Index k = 0; k < pgrid.size(); ++k) d_eta(k, k) = pgrid.eta(k);
    return kron(to_dense(c1), d_eta) + kron(to_dense(c2), identity(pgrid.size()));
  }
};

inline HamiltonianBS assemble_hbs(const DilatedSystem& d, const PGrid& g) {
  HamiltonianBS h;
  h.c1 = d.c1;
  h.c2 = d.c2;
  h.pgrid = g;
  if (!d.axes.empty()) {
    const SpatialGrid& grid = d.axes.front();
    const double hx = grid.h();
    h.gamma1 = 1.0 / (hx * hx * g.l_p);
    h.gamma2 = 1.0 / (2.0 * hx);
    const int n_x = grid.n_x;
    const ComplexMatrix sm = shift_minus(n_x);
    const ComplexMatrix sp = sm.adjoint();
    const Eigen::Index nx = sm.rows();
    h.h1 = h.gamma1 * (sm + sp - 2.0 * identity(nx));
    h.h2 = -kI * h.gamma2 * (sm - sp);
  }
  return h;
}

/// exp(i T (eta_k C1 + C2)) applied block by block to an eta-space state.
inline WarpedState evolve_exact(const HamiltonianBS& h, const WarpedState& v0, double t) {
  if (v0.representation != Representation::eta_space)
    throw ConfigError("evolve_exact: state must be in eta-space representation");
  if (v0.base_dim != h.base_dim()) throw ShapeError("evolve_exact: state / Hamiltonian size mismatch");
  check_budget(h.base_dim(), h.base_dim(), "evolve_exact block");
  WarpedState out = v0;
  if (t == 0.0) return out;
  const Eigen::Index n = h.pgrid.size();
  const Eigen::Index base = h.base_dim();
  const SparseMatrix& c1 = h.c1;
  const SparseMatrix& c2 = h.c2;
  const double n1 = norm1(c1), n2 = norm1(c2);
  ComplexVector x(base);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index b = 0; b < base; ++b) x(b) = v0.amplitudes(b * n + k);
    const double eta = h.pgrid.eta(k);
    auto apply = [&](const ComplexVector& y) -> ComplexVector {
      return kI * (eta * (c1 * y) + c2 * y);
    };
    ComplexVector y = expm_action(apply, x, t, std::abs(eta) * n1 + n2);
    for (Eigen::Index b = 0; b < base; ++b) out.amplitudes(b * n + k) = y(b);
  }
  return out;
}

namespace detail {
/// Valid nodes satisfy p_k >= max(threshold, 0) + Delta p, with a relative
/// slack so that a node sitting exactly on the margin counts.
inline double recovery_bound(const PGrid& g, double threshold) {
  return std::max(threshold, 0.0) + g.delta_p() * (1.0 - 1e-9);
}
}  // namespace detail

/// Smallest p-node at or above max(lambda_max(C1) T, 0) + Delta p.
inline Eigen::Index smallest_valid_node(const PGrid& g, double threshold) {
  const double bound = detail::recovery_bound(g, threshold);
  for (Eigen::Index k = 0; k < g.size(); ++k)
    if (g.p(k) >= bound) return k;
  throw ThresholdError("no p-node reaches max(lambda_max T, 0) + dp = " + std::to_string(bound) +
                           " inside the p-domain (half width " + std::to_string(g.half_width()) + ")",
                       threshold);
}

inline Eigen::Index node_index(const PGrid& g, double p_star) {
  const double kf = (p_star + g.half_width()) / g.delta_p();
  const double kr = std::round(kf);
  if (std::abs(kf - kr) > 1e-9 || kr < 0 || kr >= double(g.size()))
    throw RangeError("p* = " + std::to_string(p_star) + " is not a node of the p-grid");
  return Eigen::Index(kr);
}

/// Recover u(T) = e^{p*} v(T, p*) from the dilation-|0> slice of a p-space state.
/// `threshold` is lambda_max(C1) T; pass it when already known to skip the eigensolve.
inline ComplexVector recover_u(const WarpedState& s, const PGrid& g, double p_star, const DilatedSystem& d,
                               double t, std::optional<double> threshold = std::nullopt) {
  if (s.representation != Representation::p_space)
    throw ConfigError("recover_u: state must be in p-space representation");
  const Eigen::Index k = node_index(g, p_star);
  const double thr = threshold ? *threshold : lambda_max_c1(d) * t;
  const double bound = detail::recovery_bound(g, thr);
  if (!(g.p(k) >= bound))
    throw ThresholdError("recovery node p* = " + std::to_string(g.p(k)) +
                             " is below max(lambda_max T, 0) + dp = " + std::to_string(bound),
                         thr);
  const Eigen::Index n = d.base_dim;
  const Eigen::Index np = g.size();
  ComplexVector u(n);
  const double scale = std::exp(g.p(k)) * s.norm_factor;
  for (Eigen::Index i = 0; i < n; ++i) u(i) = scale * s.amplitudes(i * np + k);
  return u;
}

}  // namespace schro
