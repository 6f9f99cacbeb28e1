#pragma once

// Independent reference computations used by the tests: an RK4 integrator and
// the V_BS matrix assembled from matrix exponentials of the shift terms.

#include <random>

#include "schro/builders.hpp"
#include "schro/fd.hpp"
#include "schro/linalg.hpp"

namespace schro::oracle {

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

inline ComplexMatrix hadamard() {
  ComplexMatrix m(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  m << r, r, r, -r;
  return m;
}

/// exp(i gt (e^{i lambda} s_j^- + e^{-i lambda} s_j^+))
inline ComplexMatrix w_matrix(int j, double gamma_tau, double lambda, int n_x) {
  const ComplexMatrix g =
      std::exp(kI * lambda) * shift_term_minus(n_x, j) + std::exp(-kI * lambda) * shift_term_plus(n_x, j);
  return matexp(kI * g, gamma_tau);
}

inline ComplexMatrix v1_matrix(double t, double gamma, int n_x) {
  ComplexMatrix m = identity(Eigen::Index{1} << n_x);
  for (int j = 1; j <= n_x; ++j) m = w_matrix(j, gamma * t, 0.0, n_x) * m;
  return std::exp(-2.0 * kI * gamma * t) * m;
}

inline ComplexMatrix v2_matrix(double t, double gamma, int n_x) {
  ComplexMatrix m = identity(Eigen::Index{1} << n_x);
  for (int j = 1; j <= n_x; ++j) m = w_matrix(j, gamma * t, -0.5 * kPi, n_x) * m;
  return m;
}

inline ComplexMatrix b_matrix(const CircuitParams1D& p) {
  const Eigen::Index nx = Eigen::Index{1} << p.n_x;
  ComplexMatrix b = ComplexMatrix::Zero(nx, nx);
  b(nx - 1, nx - 1) = p.beta;
  return b;
}

inline ComplexMatrix tilde_v1_matrix(double tau, const CircuitParams1D& p) {
  const Eigen::Index nx = Eigen::Index{1} << p.n_x;
  const Complex ph = std::exp(-kI * tau * p.r / p.l_p);
  const ComplexMatrix v1 = ph * v1_matrix(0.5 * p.sigma * p.sigma * tau, p.gamma1(), p.n_x);
  if (!p.dilated) return v1;
  ComplexMatrix t = ComplexMatrix::Zero(2 * nx, 2 * nx);
  t.topLeftCorner(nx, nx) = v1;
  t.bottomRightCorner(nx, nx) = ph * identity(nx);
  return t * matexp(kI * kron(pauli_x(), b_matrix(p)) / 2.0, tau / p.l_p);
}

inline ComplexMatrix tilde_v2_matrix(double tau, const CircuitParams1D& p) {
  const Eigen::Index nx = Eigen::Index{1} << p.n_x;
  const ComplexMatrix v2 = v2_matrix((p.r - 0.5 * p.sigma * p.sigma) * tau, p.gamma2(), p.n_x);
  if (!p.dilated) return v2;
  ComplexMatrix t = identity(2 * nx);
  t.topLeftCorner(nx, nx) = v2;
  return t * matexp(kI * kron(pauli_y(), b_matrix(p)) / 2.0, tau);
}

/// sum_k V2 V1^{k - N/2} (x) |k><k| with the p index least significant.
inline ComplexMatrix binary_power_matrix(const ComplexMatrix& v1, const ComplexMatrix& v2, int n_p) {
  const Eigen::Index n = Eigen::Index{1} << n_p;
  const Eigen::Index b = v1.rows();
  const ComplexMatrix inv = v1.adjoint();
  ComplexMatrix out = ComplexMatrix::Zero(b * n, b * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    ComplexMatrix pw = identity(b);
    const Eigen::Index e = k - n / 2;
    for (Eigen::Index i = 0; i < std::abs(e); ++i) pw = pw * (e > 0 ? v1 : inv);
    const ComplexMatrix blk = v2 * pw;
    for (Eigen::Index r = 0; r < b; ++r)
      for (Eigen::Index c = 0; c < b; ++c) out(r * n + k, c * n + k) = blk(r, c);
  }
  return out;
}

inline ComplexMatrix vbs_matrix(double tau, const CircuitParams1D& p, int n_p) {
  return binary_power_matrix(tilde_v1_matrix(tau, p), tilde_v2_matrix(tau, p), n_p);
}

/// Classical RK4 for du/dtau = A u + e^{-r tau} b(0).
inline ComplexVector rk4(const OdeSystem& sys, double t, long steps) {
  const double dt = t / double(steps);
  ComplexVector u = sys.u0;
  const ComplexVector b = sys.b.size() ? sys.b : ComplexVector::Zero(sys.size());
  auto f = [&](double s, const ComplexVector& y) -> ComplexVector {
    return sys.a * y + std::exp(-sys.decay_rate * s) * b;
  };
  for (long i = 0; i < steps; ++i) {
    const double s = dt * double(i);
    const ComplexVector k1 = f(s, u);
    const ComplexVector k2 = f(s + 0.5 * dt, u + 0.5 * dt * k1);
    const ComplexVector k3 = f(s + 0.5 * dt, u + 0.5 * dt * k2);
    const ComplexVector k4 = f(s + dt, u + dt * k3);
    u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

inline ComplexMatrix random_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline ComplexVector random_state(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

/// Log-price grid of the reference call runs, [ln 1e-4, ln 10K].
inline SpatialGrid example1_grid(int n_x, double strike = 30.0) {
  return SpatialGrid(std::log(1e-4), std::log(10.0 * strike), n_x);
}

}  // namespace schro::oracle
