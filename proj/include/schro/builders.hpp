#pragma once

// Circuit synthesis for the Black-Scholes Hamiltonian simulation.
//
// Layout of the full 1-D register (qubit 0 = LSB):
//   p   : 0 .. n_p-1
//   x   : n_p .. n_p+n_x-1        (x qubit j-1 carries s_j^{+-})
//   dil : n_p+n_x                 (only when the system is dilated)
// so the basis index is (dil * 2^n_x + x) * 2^n_p + k, matching WarpedState.
// The d-dimensional layout stacks axis registers with axis 0 most significant.

#include <cmath>
#include <vector>

#include "schro/circuit.hpp"
#include "schro/fd.hpp"
#include "schro/schrodingerise.hpp"

namespace schro {

/// Scalars the 1-D circuits depend on.
struct CircuitParams1D {
  int n_x = 1;
  double h = 1.0;
  double l_p = 1.0;
  double r = 0.0;
  double sigma = 0.0;
  /// Single nonzero entry of B; ignored unless dilated.
  double beta = 0.0;
  bool dilated = true;

  double gamma1() const { return 1.0 / (h * h * l_p); }
  double gamma2() const { return 1.0 / (2.0 * h); }

  static CircuitParams1D from(const BsParams1D& p, const SpatialGrid& grid, const PGrid& g, bool dilated = true) {
    CircuitParams1D c;
    c.n_x = grid.n_x;
    c.h = grid.h();
    c.l_p = g.l_p;
    c.r = p.r;
    c.sigma = p.sigma;
    c.dilated = dilated;
    const double s2 = p.sigma * p.sigma;
    c.beta = dilated ? -p.strike * (s2 / (2.0 * c.h * c.h) + (p.r - 0.5 * s2) / (2.0 * c.h)) : 0.0;
    return c;
  }
};

struct CircuitParamsD {
  int dim = 2;
  int n_x = 1;
  double h = 1.0;
  double l_p = 1.0;
  double r = 0.0;
  std::vector<double> sigmas;
  std::vector<double> rho_diag;

  double gamma1() const { return 1.0 / (h * h * l_p); }
  double gamma2() const { return 1.0 / (2.0 * h); }

  static CircuitParamsD from(const BsParamsD& p, const SpatialGrid& grid, const PGrid& g) {
    p.validate();
    if (!p.diagonal_correlation())
      throw UnsupportedError("circuit path needs rho_mn = 0 for m != n; use the dense engine");
    CircuitParamsD c;
    c.dim = p.dim;
    c.n_x = grid.n_x;
    c.h = grid.h();
    c.l_p = g.l_p;
    c.r = p.r;
    c.sigmas = p.sigmas;
    for (int m = 0; m < p.dim; ++m) c.rho_diag.push_back(p.corr(m, m));
    return c;
  }
};

namespace detail {
inline void check_index(int j, int n_x) {
  if (n_x < 1) throw RangeError("n_x must be >= 1");
  if (j < 1 || j > n_x) throw RangeError("qubit index j must satisfy 1 <= j <= n_x");
}

inline std::vector<Control> ones(int lo, int count) {
  std::vector<Control> c;
  for (int q = lo; q < lo + count; ++q) c.push_back(Control{q, true});
  return c;
}

inline std::vector<int> span_map(int width, int offset) {
  std::vector<int> m(static_cast<std::size_t>(width));
  for (int q = 0; q < width; ++q) m[std::size_t(q)] = offset + q;
  return m;
}

inline void cnot_fan(Circuit& c, int j) {
  for (int i = 1; i < j; ++i) c.add(cnot(j - 1, i - 1));
}
}  // namespace detail

/// B_j(lambda) = (prod CNOT) P_j(-lambda) H_j: H first, then the phase, then the fan.
inline Circuit bell_basis(int j, double lambda, int n_x) {
  detail::check_index(j, n_x);
  Circuit c(n_x);
  c.add(make_gate(GateKind::h, j - 1));
  c.add(make_gate(GateKind::phase, j - 1, -lambda));
  detail::cnot_fan(c, j);
  return c;
}

/// W_j(gt, lambda) = B_j RZ_j(-2 gt)[controls q_1..q_{j-1}] B_j^dagger
///                 = exp(i gt (e^{i lambda} s_j^- + e^{-i lambda} s_j^+)).
inline Circuit w_gate(int j, double gamma_tau, double lambda, int n_x) {
  detail::check_index(j, n_x);
  Circuit c(n_x);
  detail::cnot_fan(c, j);
  c.add(make_gate(GateKind::phase, j - 1, lambda));
  c.add(make_gate(GateKind::h, j - 1));
  c.add(make_gate(GateKind::rz, j - 1, -2.0 * gamma_tau, detail::ones(0, j - 1)));
  c.add(make_gate(GateKind::h, j - 1));
  c.add(make_gate(GateKind::phase, j - 1, -lambda));
  detail::cnot_fan(c, j);
  return c;
}

/// V1(tau) = Ph(-2 gamma tau) W_{n_x} ... W_1, approximating exp(i tau gamma (S^- + S^+ - 2I)).
inline Circuit build_v1(double tau, double gamma, int n_x) {
  Circuit c(n_x);
  c.add(global_phase(-2.0 * gamma * tau));
  for (int j = 1; j <= n_x; ++j) c.append(w_gate(j, gamma * tau, 0.0, n_x));
  return c;
}

/// V2(tau) = W_{n_x}(gamma tau, -pi/2) ... W_1, approximating exp(tau gamma (S^- - S^+)).
inline Circuit build_v2(double tau, double gamma, int n_x) {
  Circuit c(n_x);
  for (int j = 1; j <= n_x; ++j) c.append(w_gate(j, gamma * tau, -0.5 * kPi, n_x));
  return c;
}

namespace detail {
/// `body` on x qubits 0..n_x-1, applied only when dilation qubit n_x is |0>.
inline void add_on_dilation_zero(Circuit& c, const Circuit& body, int n_x) {
  c.add(make_gate(GateKind::x, n_x));
  Circuit wide(n_x + 1);
  wide.append(body);
  c.append(wide.controlled(Control{n_x, true}));
  c.add(make_gate(GateKind::x, n_x));
}
}  // namespace detail

/// One power of the p-block generator on (x, dil):
///   [|0><0| (x) Ph(-tau r/L_p) V1(sigma^2 tau/2) + |1><1| (x) Ph(-tau r/L_p)] U1(tau),
/// U1(tau) = exp(i tau/L_p X (x) B/2) = RX(-tau beta/L_p) on dil, controlled by x = 1..1.
inline Circuit build_tilde_v1(double tau, const CircuitParams1D& p) {
  const int n = p.n_x;
  const double v1_time = 0.5 * p.sigma * p.sigma * tau;
  if (!p.dilated) {
    Circuit c(n);
    c.add(global_phase(-tau * p.r / p.l_p));
    c.append(build_v1(v1_time, p.gamma1(), n));
    return c;
  }
  Circuit c(n + 1);
  const double theta = tau * p.beta / (2.0 * p.l_p);
  c.add(make_gate(GateKind::rx, n, -2.0 * theta, detail::ones(0, n)));
  c.add(global_phase(-tau * p.r / p.l_p));
  detail::add_on_dilation_zero(c, build_v1(v1_time, p.gamma1(), n), n);
  return c;
}

/// [|0><0| (x) V2((r - sigma^2/2) tau) + |1><1| (x) I] U2(tau),
/// U2(tau) = exp(i tau Y (x) B/2) = RY(-tau beta) on dil, controlled by x = 1..1.
inline Circuit build_tilde_v2(double tau, const CircuitParams1D& p) {
  const int n = p.n_x;
  const double v2_time = (p.r - 0.5 * p.sigma * p.sigma) * tau;
  if (!p.dilated) return build_v2(v2_time, p.gamma2(), n);
  Circuit c(n + 1);
  c.add(make_gate(GateKind::ry, n, -tau * p.beta, detail::ones(0, n)));
  detail::add_on_dilation_zero(c, build_v2(v2_time, p.gamma2(), n), n);
  return c;
}

namespace detail {
/// sum_k V2 V1^{k - N_p/2} (x) |k><k| from single-power circuits on the block
/// register (qubits n_p .. n_p + block_width - 1).
inline Circuit assemble_binary_powers(const Circuit& v1, const Circuit& v2, int n_p) {
  if (n_p < 1) throw RangeError("n_p must be >= 1");
  const int bw = v1.width();
  Circuit c(n_p + bw);
  const auto map = span_map(bw, n_p);
  Circuit wide(n_p + bw);
  wide.append_mapped(v1, map);
  for (int m = 0; m < n_p; ++m) c.append(wide.controlled(Control{m, true}).repeated(1LL << m));
  c.append(wide.dagger().repeated(1LL << (n_p - 1)));
  c.append_mapped(v2, map);
  return c;
}
}  // namespace detail

/// One Trotter step of the Hamiltonian H = C1 (x) D_eta + C2 (x) I.
inline Circuit build_vbs(double tau, const CircuitParams1D& p, int n_p) {
  Circuit c = detail::assemble_binary_powers(build_tilde_v1(tau, p), build_tilde_v2(tau, p), n_p);
  c.add_register("p", 0, n_p - 1);
  c.add_register("x", n_p, n_p + p.n_x - 1);
  if (p.dilated) c.add_register("dil", n_p + p.n_x, n_p + p.n_x);
  return c;
}

/// d-dimensional blocks for rho_mn = 0 (m != n); axis m occupies x qubits
/// (dim - 1 - m) n_x .. (dim - m) n_x - 1 of the block register.
inline Circuit build_tilde_v1_ddim(double tau, const CircuitParamsD& p) {
  const int w = p.dim * p.n_x;
  Circuit c(w);
  c.add(global_phase(-tau * p.r / p.l_p));
  for (int m = 0; m < p.dim; ++m) {
    const double s = p.sigmas[std::size_t(m)];
    const double t = 0.5 * s * s * p.rho_diag[std::size_t(m)] * tau;
    c.append_mapped(build_v1(t, p.gamma1(), p.n_x), detail::span_map(p.n_x, (p.dim - 1 - m) * p.n_x));
  }
  return c;
}

inline Circuit build_tilde_v2_ddim(double tau, const CircuitParamsD& p) {
  const int w = p.dim * p.n_x;
  Circuit c(w);
  for (int m = 0; m < p.dim; ++m) {
    const double s = p.sigmas[std::size_t(m)];
    const double t = (p.r - 0.5 * s * s) * tau;
    c.append_mapped(build_v2(t, p.gamma2(), p.n_x), detail::span_map(p.n_x, (p.dim - 1 - m) * p.n_x));
  }
  return c;
}

inline Circuit build_vbs_ddim(double tau, const CircuitParamsD& p, int n_p) {
  if (p.dim < 1) throw RangeError("dim must be >= 1");
  Circuit c =
      detail::assemble_binary_powers(build_tilde_v1_ddim(tau, p), build_tilde_v2_ddim(tau, p), n_p);
  c.add_register("p", 0, n_p - 1);
  for (int m = p.dim - 1; m >= 0; --m) {
    const int lo = n_p + (p.dim - 1 - m) * p.n_x;
    c.add_register("x" + std::to_string(m), lo, lo + p.n_x - 1);
  }
  return c;
}

/// Centered transform on n_p qubits: (-1)^{N/2} Z_0 QFT Z_0 with
/// QFT|j> = sum_k e^{2 pi i jk/N}|k>/sqrt(N); equals centered_dft(PGrid(., n_p)).
inline Circuit build_qft(int n_p) {
  if (n_p < 1) throw RangeError("build_qft: n_p must be >= 1");
  Circuit c(n_p);
  c.add(make_gate(GateKind::phase, 0, kPi));
  for (int i = n_p - 1; i >= 0; --i) {
    c.add(make_gate(GateKind::h, i));
    for (int m = i - 1; m >= 0; --m)
      c.add(make_gate(GateKind::phase, i, kPi / double(1LL << (i - m)), {Control{m, true}}));
  }
  for (int i = 0; i < n_p / 2; ++i) {
    const int j = n_p - 1 - i;
    c.add(cnot(i, j));
    c.add(cnot(j, i));
    c.add(cnot(i, j));
  }
  c.add(make_gate(GateKind::phase, 0, kPi));
  if (n_p == 1) c.add(global_phase(kPi));
  c.add_register("p", 0, n_p - 1);
  return c;
}

inline Circuit build_iqft(int n_p) { return build_qft(n_p).dagger(); }

/// Transform acting on the p-register (qubits 0..n_p-1) of a wider circuit.
inline Circuit embed_low(const Circuit& c, int width) {
  Circuit out(width);
  out.append_mapped(c, detail::span_map(c.width(), 0));
  return out;
}

}  // namespace schro
