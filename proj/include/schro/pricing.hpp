#pragma once

// Reference prices: the univariate call, the two-asset cash-or-nothing price
// through the bivariate normal CDF, and the classical solution of the
// semi-discrete system by the exponential of its dilated generator.

#include <array>
#include <cmath>

#include "schro/fd.hpp"
#include "schro/linalg.hpp"
#include "schro/schrodingerise.hpp"

namespace schro {

/// Standard normal CDF through erfc (relative accuracy near machine epsilon).
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

/// e^x N(d1) - K e^{-rt} N(d2); the payoff at t = 0.
inline double bs_call_analytic(double x, double t, const BsParams1D& p) {
  const double s = std::exp(x);
  if (t <= 0.0) return std::max(s - p.strike, 0.0);
  const double vol = p.sigma * std::sqrt(t);
  const double d1 = (x - std::log(p.strike) + (p.r + 0.5 * p.sigma * p.sigma) * t) / vol;
  const double d2 = d1 - vol;
  return s * norm_cdf(d1) - p.strike * std::exp(-p.r * t) * norm_cdf(d2);
}

namespace detail {
struct GaussLegendre20 {
  std::array<double, 20> x{}, w{};
  GaussLegendre20() {
    // Newton on P_20 from Chebyshev guesses.
    const int n = 20;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[std::size_t(i)] = z;
      w[std::size_t(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

inline const GaussLegendre20& gauss_legendre20() {
  static const GaussLegendre20 rule;
  return rule;
}
}  // namespace detail

/// P(X <= a, Y <= b) for standard normals with correlation rho, from
///   B = N(a) N(b) + 1/(2 pi) int_0^{asin rho} exp(-(a^2 + b^2 - 2ab sin t) / (2 cos^2 t)) dt
/// on 32 panels of 20-point Gauss-Legendre.
inline double bivariate_normal_cdf(double a, double b, double rho) {
  if (rho < -1.0 || rho > 1.0) throw RangeError("bivariate_normal_cdf: rho outside [-1,1]");
  if (std::isinf(a) || std::isinf(b)) {
    if (a == -INFINITY || b == -INFINITY) return 0.0;
    if (a == INFINITY) return b == INFINITY ? 1.0 : norm_cdf(b);
    return norm_cdf(a);
  }
  if (rho == 1.0) return norm_cdf(std::min(a, b));
  if (rho == -1.0) return std::max(0.0, norm_cdf(a) - norm_cdf(-b));
  const double upper = std::asin(rho);
  const auto& gl = detail::gauss_legendre20();
  const int panels = 32;
  const double width = upper / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = (k + 0.5) * width;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double t = mid + 0.5 * width * gl.x[i];
      const double c = std::cos(t);
      sum += gl.w[i] * std::exp(-(a * a + b * b - 2.0 * a * b * std::sin(t)) / (2.0 * c * c));
    }
  }
  return norm_cdf(a) * norm_cdf(b) + 0.5 * width * sum / (2.0 * kPi);
}

/// Tetrachoric series N(a)N(b) + phi(a)phi(b) sum_n rho^n/n! He_{n-1}(a) He_{n-1}(b),
/// with He normalized by sqrt(n!) for stability. Converges for |rho| < 1.
inline double bivariate_normal_cdf_series(double a, double b, double rho, int terms = 2000) {
  if (!(std::abs(rho) < 1.0)) throw RangeError("bivariate_normal_cdf_series: need |rho| < 1");
  double ha_prev = 0.0, ha = 1.0, hb_prev = 0.0, hb = 1.0;  // h_{n-1}
  double rho_n = 1.0, sum = 0.0;
  for (int n = 1; n <= terms; ++n) {
    rho_n *= rho;
    const double term = rho_n / n * ha * hb;
    sum += term;
    const double k = n - 1;  // advance h_k -> h_{k+1}
    const double na = (a * ha - std::sqrt(k) * ha_prev) / std::sqrt(k + 1.0);
    const double nb = (b * hb - std::sqrt(k) * hb_prev) / std::sqrt(k + 1.0);
    ha_prev = ha;
    ha = na;
    hb_prev = hb;
    hb = nb;
    if (n > 20 && std::abs(term) < 1e-18) break;
  }
  return norm_cdf(a) * norm_cdf(b) + norm_pdf(a) * norm_pdf(b) * sum;
}

/// c e^{-r tau} B(d_x, d_y, rho_12) for d = 2; the payoff at tau = 0.
inline double cash_or_nothing_2d_analytic(double x, double y, double tau, const BsParamsD& p) {
  if (p.dim != 2) throw UnsupportedError("cash_or_nothing_2d_analytic: dim must be 2");
  p.validate();
  const double k1 = std::log(p.strikes[0]), k2 = std::log(p.strikes[1]);
  if (tau <= 0.0) return (x > k1 && y > k2) ? p.cash : 0.0;
  const double s1 = p.sigmas[0], s2 = p.sigmas[1];
  const double dx = (x - k1 + (p.r - 0.5 * s1 * s1) * tau) / (s1 * std::sqrt(tau));
  const double dy = (y - k2 + (p.r - 0.5 * s2 * s2) * tau) / (s2 * std::sqrt(tau));
  return p.cash * std::exp(-p.r * tau) * bivariate_normal_cdf(dx, dy, p.corr(0, 1));
}

/// u-block of exp(C T) u_bar(0) for the dilated generator C.
inline ComplexVector classical_reference(const OdeSystem& sys, double t) {
  check_budget(sys.size(), sys.size(), "classical_reference");
  const DilatedSystem d = dilate(sys);
  const SparseMatrix& c = d.c;
  const ComplexVector u = expm_action([&](const ComplexVector& v) -> ComplexVector { return c * v; },
                                      d.u_bar0, t, norm1(c));
  return u.head(d.base_dim);
}

}  // namespace schro
