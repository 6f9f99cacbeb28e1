#pragma once

// Statevector engine. Amplitudes are indexed with qubit 0 as the least
// significant bit; controls are folded into a (mask, value) pair so that a
// gate only visits amplitude pairs inside its control subspace.

#include <array>
#include <cmath>
#include <cstdint>

#include "schro/circuit.hpp"
#include "schro/linalg.hpp"

namespace schro {

inline constexpr int kMaxStateQubits = 28;

struct StateVector {
  int width = 0;
  ComplexVector amplitudes;
  double norm_factor = 1.0;

  StateVector() = default;
  explicit StateVector(int w) : width(w) {
    if (w < 0 || w > kMaxStateQubits) throw BudgetError("StateVector: width outside 0.." + std::to_string(kMaxStateQubits));
    amplitudes = ComplexVector::Zero(Eigen::Index{1} << w);
    amplitudes(0) = 1.0;
  }

  /// Normalized copy of `v` with its norm moved into norm_factor.
  static StateVector from_vector(const ComplexVector& v, double norm_factor = 1.0) {
    const Eigen::Index n = v.size();
    int w = 0;
    while ((Eigen::Index{1} << w) < n) ++w;
    if ((Eigen::Index{1} << w) != n) throw ShapeError("StateVector: length is not a power of two");
    StateVector s(w);
    const double nrm = v.norm();
    if (nrm == 0.0) throw ConfigError("StateVector: zero vector");
    s.amplitudes = v / nrm;
    s.norm_factor = norm_factor * nrm;
    return s;
  }

  ComplexVector physical() const { return norm_factor * amplitudes; }
};

using Mat2 = std::array<Complex, 4>;  // row-major 2x2

inline Mat2 gate_matrix(const Gate& g) {
  const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
  const double r = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::x: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::h: return {r, r, r, -r};
    case GateKind::phase: return {1.0, 0.0, 0.0, std::exp(kI * g.angle)};
    case GateKind::rz: return {Complex(c, -s), 0.0, 0.0, Complex(c, s)};
    case GateKind::rx: return {c, Complex(0.0, -s), Complex(0.0, -s), c};
    case GateKind::ry: return {c, -s, s, c};
    case GateKind::global_phase: {
      const Complex e = std::exp(kI * g.angle);
      return {e, 0.0, 0.0, e};
    }
  }
  throw RangeError("gate_matrix: unknown kind");
}

namespace detail {
/// Insert a zero bit at position `bit` of `i`.
inline std::uint64_t insert_zero(std::uint64_t i, int bit) {
  const std::uint64_t low = i & ((std::uint64_t{1} << bit) - 1);
  return ((i >> bit) << (bit + 1)) | low;
}
}  // namespace detail

/// Apply `g` to a raw amplitude buffer of `width` qubits.
inline void apply_gate(Complex* amp, int width, const Gate& g) {
  std::uint64_t mask = 0, value = 0;
  for (const auto& c : g.controls) {
    if (c.qubit < 0 || c.qubit >= width) throw RangeError("apply_gate: control outside state width");
    mask |= std::uint64_t{1} << c.qubit;
    if (c.on_one) value |= std::uint64_t{1} << c.qubit;
  }
  const std::uint64_t dim = std::uint64_t{1} << width;
  if (g.kind == GateKind::global_phase) {
    const Complex e = std::exp(kI * g.angle);
    for (std::uint64_t i = 0; i < dim; ++i)
      if ((i & mask) == value) amp[i] *= e;
    return;
  }
  if (g.target < 0 || g.target >= width) throw RangeError("apply_gate: target outside state width");
  const Mat2 m = gate_matrix(g);
  const std::uint64_t tbit = std::uint64_t{1} << g.target;
  const std::uint64_t half = dim >> 1;
  const bool diagonal = m[1] == Complex(0.0) && m[2] == Complex(0.0);
  for (std::uint64_t k = 0; k < half; ++k) {
    const std::uint64_t i0 = detail::insert_zero(k, g.target);
    if ((i0 & mask) != value) continue;
    const std::uint64_t i1 = i0 | tbit;
    if (diagonal) {
      amp[i0] *= m[0];
      amp[i1] *= m[3];
    } else {
      const Complex a0 = amp[i0], a1 = amp[i1];
      amp[i0] = m[0] * a0 + m[1] * a1;
      amp[i1] = m[2] * a0 + m[3] * a1;
    }
  }
}

inline void apply_gate(StateVector& s, const Gate& g) { apply_gate(s.amplitudes.data(), s.width, g); }

inline void apply_circuit(StateVector& s, const Circuit& c) {
  if (c.width() != s.width) throw ShapeError("apply_circuit: circuit width differs from state width");
  for (const auto& g : c.gates()) apply_gate(s.amplitudes.data(), s.width, g);
}

/// Dense unitary of `c`, one basis column at a time.
inline ComplexMatrix circuit_to_unitary(const Circuit& c) {
  if (c.width() > kMaxOracleQubits) throw BudgetError("circuit_to_unitary: width exceeds the oracle budget");
  const Eigen::Index n = Eigen::Index{1} << c.width();
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    u(col, col) = 1.0;
    Complex* data = u.col(col).data();
    for (const auto& g : c.gates()) apply_gate(data, c.width(), g);
  }
  return u;
}

}  // namespace schro
