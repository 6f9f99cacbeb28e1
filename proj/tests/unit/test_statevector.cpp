#include <gtest/gtest.h>

#include <random>

#include "schro/builders.hpp"
#include "schro/statevector.hpp"
#include "support/oracles.hpp"

using namespace schro;

TEST(ApplyGate, XOnLeastSignificantBit) {
  StateVector s(3);
  apply_gate(s, make_gate(GateKind::x, 0));
  EXPECT_EQ(s.amplitudes(1), Complex(1.0));
  EXPECT_EQ(s.amplitudes.norm(), 1.0);
}

TEST(ApplyGate, HadamardTwiceIsIdentity) {
  std::mt19937_64 rng(31);
  StateVector s = StateVector::from_vector(oracle::random_state(32, rng));
  const ComplexVector before = s.amplitudes;
  apply_gate(s, make_gate(GateKind::h, 2));
  apply_gate(s, make_gate(GateKind::h, 2));
  EXPECT_LE((s.amplitudes - before).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ApplyGate, ControlsLeaveOtherSubspaceUntouched) {
  std::mt19937_64 rng(32);
  StateVector s = StateVector::from_vector(oracle::random_state(64, rng));
  const ComplexVector before = s.amplitudes;
  apply_gate(s, make_gate(GateKind::rz, 5, 0.8, {Control{0, true}, Control{2, true}, Control{3, false}}));
  for (Eigen::Index i = 0; i < 64; ++i) {
    const bool on = (i & 1) && (i & 4) && !(i & 8);
    if (!on) {
      EXPECT_EQ(s.amplitudes(i), before(i)) << i;
    }
  }
  EXPECT_NEAR(s.amplitudes.norm(), 1.0, 1e-12);
}

TEST(ApplyGate, MatchesKroneckerMatrices) {
  std::mt19937_64 rng(33);
  const ComplexVector v = oracle::random_state(8, rng);
  const double a = 0.47;
  const std::vector<std::pair<Gate, ComplexMatrix>> cases = {
      {make_gate(GateKind::rz, 1, a), matexp(-0.5 * kI * oracle::pauli_z(), a)},
      {make_gate(GateKind::rx, 1, a), matexp(-0.5 * kI * oracle::pauli_x(), a)},
      {make_gate(GateKind::ry, 1, a), matexp(-0.5 * kI * oracle::pauli_y(), a)},
      {make_gate(GateKind::h, 1), oracle::hadamard()},
  };
  for (const auto& [g, m] : cases) {
    StateVector s = StateVector::from_vector(v);
    apply_gate(s, g);
    const ComplexVector expected = kron(kron(identity(2), m), identity(2)) * v;
    EXPECT_LE((s.amplitudes - expected).norm(), 1e-14);
  }
}

TEST(ApplyGate, OutOfRange) {
  StateVector s(2);
  EXPECT_THROW(apply_gate(s, make_gate(GateKind::h, 2)), RangeError);
  EXPECT_THROW(apply_gate(s, make_gate(GateKind::h, 0, 0.0, {Control{4, true}})), RangeError);
}

TEST(Unitary, EmptyAndCnot) {
  EXPECT_LE(max_abs(circuit_to_unitary(Circuit(3)) - identity(8)), 0.0);
  Circuit c(2);
  c.add(cnot(0, 1));
  ComplexMatrix p = ComplexMatrix::Zero(4, 4);
  p(0, 0) = p(2, 2) = 1.0;
  p(3, 1) = p(1, 3) = 1.0;
  EXPECT_EQ(max_abs(circuit_to_unitary(c) - p), 0.0);
  EXPECT_THROW(circuit_to_unitary(Circuit(15)), BudgetError);
}

TEST(StateVectorNorm, LongGateSequencePreservesNorm) {
  const CircuitParams1D p = CircuitParams1D::from(BsParams1D{}, oracle::example1_grid(3), PGrid(4.0, 3));
  const Circuit step = build_vbs(0.01, p, 3);
  std::mt19937_64 rng(34);
  StateVector s = StateVector::from_vector(oracle::random_state(Eigen::Index{1} << step.width(), rng), 2.5);
  long applied = 0;
  while (applied < 100000) {
    apply_circuit(s, step);
    applied += long(step.size());
  }
  EXPECT_NEAR(s.amplitudes.norm(), 1.0, 1e-10);
  EXPECT_DOUBLE_EQ(s.norm_factor, 2.5);
}

TEST(StateVectorNorm, FromVectorCarriesNorm) {
  ComplexVector v(4);
  v << 3.0, 0.0, 4.0, 0.0;
  const StateVector s = StateVector::from_vector(v);
  EXPECT_DOUBLE_EQ(s.norm_factor, 5.0);
  EXPECT_LE((s.physical() - v).norm(), 1e-15);
  EXPECT_THROW(StateVector::from_vector(ComplexVector::Ones(3)), ShapeError);
}
