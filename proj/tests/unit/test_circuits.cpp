#include <gtest/gtest.h>

#include <random>

#include "schro/builders.hpp"
#include "schro/gate_count.hpp"
#include "schro/statevector.hpp"
#include "support/oracles.hpp"

using namespace schro;

namespace {
CircuitParams1D example1_params(int n_x, int n_p, bool dilated = true) {
  return CircuitParams1D::from(BsParams1D{}, oracle::example1_grid(n_x), PGrid(4.0, n_p), dilated);
}

ComplexMatrix unitary(const Circuit& c) { return circuit_to_unitary(c); }

double unitarity_defect(const ComplexMatrix& u) { return max_abs(u.adjoint() * u - identity(u.rows())); }
}  // namespace

TEST(Ir, RejectsInvalidGates) {
  Circuit c(3);
  EXPECT_THROW(c.add(make_gate(GateKind::h, 3)), RangeError);
  EXPECT_THROW(c.add(make_gate(GateKind::x, 1, 0.0, {Control{1, true}})), RangeError);
  EXPECT_THROW(c.add(make_gate(GateKind::rz, 0, NAN)), RangeError);
  EXPECT_THROW(c.add(make_gate(GateKind::x, 0, 0.0, {Control{1, true}, Control{1, false}})), RangeError);
  EXPECT_THROW(c.add_register("a", 0, 3), RangeError);
  c.add_register("a", 0, 1);
  EXPECT_THROW(c.add_register("b", 1, 2), RangeError);
}

TEST(Ir, DaggerInvertsUnitary) {
  Circuit c(2);
  c.add(make_gate(GateKind::h, 0)).add(cnot(0, 1)).add(make_gate(GateKind::ry, 1, 0.3)).add(make_gate(GateKind::phase, 0, 1.1, {Control{1, false}}));
  c.add(global_phase(0.4));
  EXPECT_LE(max_abs(unitary(c.dagger()) * unitary(c) - identity(4)), 1e-14);
}

TEST(Ir, ControlledGlobalPhaseIsPhaseOnControl) {
  Circuit a(1), b(1);
  a.add(Gate{GateKind::global_phase, -1, {Control{0, true}}, 0.7});
  b.add(make_gate(GateKind::phase, 0, 0.7));
  EXPECT_LE(max_abs(unitary(a) - unitary(b)), 1e-15);
}

TEST(Dump, RoundTripsExactly) {
  const std::vector<Circuit> cs = {build_vbs(0.013, example1_params(3, 2), 2), build_qft(4),
                                   w_gate(3, 0.25, -0.5 * kPi, 4)};
  for (const auto& c : cs) {
    const std::string text = dump(c);
    const Circuit back = parse_circuit(text);
    EXPECT_TRUE(back == c);
    EXPECT_EQ(dump(back), text);
  }
}

TEST(Dump, Format) {
  Circuit c(3);
  c.add_register("x", 0, 2);
  c.add(make_gate(GateKind::rz, 2, 0.1, {Control{0, true}, Control{1, false}}));
  c.add(global_phase(-1.0));
  const std::string text = dump(c);
  EXPECT_EQ(text,
            "QUBITS 3\nREG x 0..2\nGATE RZ target=2 controls=0:1,1:0 angle=0.10000000000000001\n"
            "GATE GPHASE angle=-1\n");
}

TEST(Dump, ParseErrors) {
  EXPECT_THROW(parse_circuit("GATE H target=0\n"), ParseError);
  EXPECT_THROW(parse_circuit("QUBITS 2\nGATE RZ target=0\n"), ParseError);
  EXPECT_THROW(parse_circuit("QUBITS 2\nGATE H target=5\n"), ParseError);
  EXPECT_THROW(parse_circuit("QUBITS 2\nGATE FOO target=0\n"), ParseError);
  EXPECT_THROW(parse_circuit("QUBITS 2\nGATE X target=0 controls=1:2\n"), ParseError);
}

TEST(BellBasis, SmallestCaseHasNoFan) {
  const Circuit b = bell_basis(1, 0.4, 3);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b.gates()[0].kind, GateKind::h);
  EXPECT_EQ(b.gates()[1].kind, GateKind::phase);
  EXPECT_DOUBLE_EQ(b.gates()[1].angle, -0.4);
  EXPECT_THROW(bell_basis(4, 0.0, 3), RangeError);
}

TEST(BellBasis, ZeroPhaseIsIdentityFactorAndUnitary) {
  for (int j = 1; j <= 3; ++j) {
    const ComplexMatrix u = unitary(bell_basis(j, 0.0, 3));
    Circuit plain(3);
    plain.add(make_gate(GateKind::h, j - 1));
    for (int i = 1; i < j; ++i) plain.add(cnot(j - 1, i - 1));
    EXPECT_LE(max_abs(u - unitary(plain)), 1e-15);
    const ComplexMatrix v = unitary(bell_basis(j, 0.9, 3));
    EXPECT_LE(max_abs(v * v.adjoint() - identity(8)), 1e-14);
  }
}

TEST(WGate, MatchesShiftExponential) {
  for (int n = 1; n <= 4; ++n)
    for (int j = 1; j <= n; ++j)
      for (double lambda : {0.0, -0.5 * kPi, 0.7}) {
        const double gt = 0.37;
        EXPECT_LE(max_abs(unitary(w_gate(j, gt, lambda, n)) - oracle::w_matrix(j, gt, lambda, n)), 1e-12)
            << n << ' ' << j << ' ' << lambda;
      }
}

TEST(WGate, ZeroTimeIsIdentity) { EXPECT_LE(max_abs(unitary(w_gate(3, 0.0, 0.3, 3)) - identity(8)), 1e-14); }

TEST(WGate, LowestQubitIsXRotation) {
  const ComplexMatrix expected = kron(identity(4), matexp(kI * oracle::pauli_x(), 0.2));
  EXPECT_LE(max_abs(unitary(w_gate(1, 0.2, 0.0, 3)) - expected), 1e-12);
}

TEST(V1V2, TrotterErrorBound) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 3;
  const double gamma1 = 3.0, gamma2 = 2.0;
  const ComplexMatrix sm = shift_minus(n), sp = shift_plus(n);
  const ComplexMatrix h1 = gamma1 * (sm + sp - 2.0 * identity(8));
  const ComplexMatrix h2 = -kI * gamma2 * (sm - sp);
  for (int i = 0; i < 50; ++i) {
    const double tau = 0.1 * (1.0 - u(rng));
    const double e1 = opnorm2(matexp(kI * h1, tau) - unitary(build_v1(tau, gamma1, n)));
    const double e2 = opnorm2(matexp(kI * h2, tau) - unitary(build_v2(tau, gamma2, n)));
    EXPECT_LE(e1, gamma1 * gamma1 * tau * tau * (n - 1) / 2.0);
    EXPECT_LE(e2, gamma2 * gamma2 * tau * tau * (n - 1) / 2.0);
  }
  EXPECT_LE(max_abs(unitary(build_v1(0.0, gamma1, n)) - identity(8)), 1e-15);
}

TEST(V1V2, V2IsRealOrthogonal) {
  const ComplexMatrix v = unitary(build_v2(0.07, 1.7, 3));
  EXPECT_LE(v.imag().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(unitarity_defect(v), 1e-12);
}

TEST(TildeV, MatchesMatrixFormula) {
  for (int n : {2, 3}) {
    const auto p = example1_params(n, 2);
    EXPECT_LE(max_abs(unitary(build_tilde_v1(0.04, p)) - oracle::tilde_v1_matrix(0.04, p)), 1e-12);
    EXPECT_LE(max_abs(unitary(build_tilde_v2(0.04, p)) - oracle::tilde_v2_matrix(0.04, p)), 1e-12);
  }
}

TEST(TildeV, RxAngleIsTwoByTwoExponential) {
  const double theta = 0.31;
  Circuit c(1);
  c.add(make_gate(GateKind::rx, 0, -2.0 * theta));
  EXPECT_LE(max_abs(unitary(c) - matexp(kI * oracle::pauli_x(), theta)), 1e-15);
}

TEST(TildeV, UndilatedIsPhasedV1) {
  const auto p = example1_params(3, 2, false);
  const double tau = 0.05;
  const ComplexMatrix expected =
      std::exp(-kI * tau * p.r / p.l_p) * oracle::v1_matrix(0.5 * p.sigma * p.sigma * tau, p.gamma1(), 3);
  EXPECT_LE(max_abs(unitary(build_tilde_v1(tau, p)) - expected), 1e-12);
}

TEST(Vbs, SmallestPRegister) {
  const auto p = example1_params(2, 1);
  const Circuit c = build_vbs(0.05, p, 1);
  EXPECT_LE(max_abs(unitary(c) - oracle::vbs_matrix(0.05, p, 1)), 1e-12);
  EXPECT_EQ(c.reg("dil").lo, 3);
}

TEST(Vbs, BlockDiagonalPowers) {
  const auto p = example1_params(2, 2);
  const ComplexMatrix u = unitary(build_vbs(0.05, p, 2));
  const ComplexMatrix v1 = oracle::tilde_v1_matrix(0.05, p), v2 = oracle::tilde_v2_matrix(0.05, p);
  const Eigen::Index n = 4, b = v1.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    ComplexMatrix expected = v2;
    const Eigen::Index e = k - n / 2;
    for (Eigen::Index i = 0; i < std::abs(e); ++i) expected = expected * (e > 0 ? v1 : v1.inverse());
    ComplexMatrix blk(b, b);
    for (Eigen::Index r = 0; r < b; ++r)
      for (Eigen::Index c = 0; c < b; ++c) blk(r, c) = u(r * n + k, c * n + k);
    EXPECT_LE(max_abs(blk - expected), 1e-12) << k;
  }
  EXPECT_LE(unitarity_defect(u), 1e-11);
}

TEST(Vbs, InversePowerIsDagger) {
  const auto p = example1_params(2, 2);
  const Circuit v1 = build_tilde_v1(0.05, p);
  const ComplexMatrix fwd = unitary(v1.repeated(2));
  const ComplexMatrix inv = unitary(v1.dagger().repeated(2));
  EXPECT_LE(max_abs(fwd * inv - identity(fwd.rows())), 1e-12);
}

TEST(VbsDdim, OneDimensionMatchesUndilatedBuilder) {
  BsParamsD pd;
  pd.dim = 1;
  pd.r = 0.02;
  pd.sigmas = {0.3};
  pd.rho = {1.0};
  pd.strikes = {30.0};
  pd.payoff = PayoffKind::call;
  const SpatialGrid g = oracle::example1_grid(2);
  const PGrid pg(4.0, 2);
  const auto cd = CircuitParamsD::from(pd, g, pg);
  const auto c1 = CircuitParams1D::from(BsParams1D{}, g, pg, false);
  EXPECT_LE(max_abs(unitary(build_vbs_ddim(0.05, cd, 2)) - unitary(build_vbs(0.05, c1, 2))), 1e-12);
}

TEST(VbsDdim, TwoDimensionsMatchMatrix) {
  BsParamsD pd;
  pd.sigmas = {0.3, 0.2};
  pd.rho = {1.0, 0.0, 0.0, 1.0};
  const SpatialGrid g(std::log(1e-6), std::log(200.0), 2);
  const PGrid pg(15.0, 2);
  const auto cd = CircuitParamsD::from(pd, g, pg);
  const double tau = 0.03;
  ComplexMatrix v1 = std::exp(-kI * tau * pd.r / pg.l_p) * identity(16);
  ComplexMatrix v2 = identity(16);
  for (int m = 0; m < 2; ++m) {
    const double s = pd.sigmas[std::size_t(m)];
    const ComplexMatrix a1 = oracle::v1_matrix(0.5 * s * s * tau, cd.gamma1(), 2);
    const ComplexMatrix a2 = oracle::v2_matrix((pd.r - 0.5 * s * s) * tau, cd.gamma2(), 2);
    v1 = v1 * (m == 0 ? kron(a1, identity(4)) : kron(identity(4), a1));
    v2 = v2 * (m == 0 ? kron(a2, identity(4)) : kron(identity(4), a2));
  }
  EXPECT_LE(max_abs(unitary(build_vbs_ddim(tau, cd, 2)) - oracle::binary_power_matrix(v1, v2, 2)), 1e-12);
}

TEST(VbsDdim, AxisRegistersAreDisjoint) {
  BsParamsD pd;
  const auto cd = CircuitParamsD::from(pd, SpatialGrid(0.0, 5.0, 2), PGrid(15.0, 2));
  const Circuit c = build_tilde_v1_ddim(0.1, cd);
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::global_phase) continue;
    const int axis = g.target / 2;
    for (const auto& ctl : g.controls) EXPECT_EQ(ctl.qubit / 2, axis);
  }
}

TEST(VbsDdim, RejectsCorrelation) {
  BsParamsD pd;
  pd.rho = {1.0, 0.6, 0.6, 1.0};
  EXPECT_THROW(CircuitParamsD::from(pd, SpatialGrid(0.0, 1.0, 2), PGrid(15.0, 2)), UnsupportedError);
}

TEST(Qft, MatchesCenteredDft) {
  for (int n = 1; n <= 5; ++n) EXPECT_LE(max_abs(unitary(build_qft(n)) - centered_dft(PGrid(2.0, n))), 1e-12) << n;
}

TEST(Qft, InverseComposesToIdentity) {
  EXPECT_LE(max_abs(unitary(build_iqft(4)) * unitary(build_qft(4)) - identity(16)), 1e-12);
}

TEST(Qft, ColumnsMatchDirectDft) {
  const PGrid g(1.0, 3);
  const ComplexMatrix u = unitary(build_qft(3));
  for (Eigen::Index k = 0; k < 8; ++k)
    for (Eigen::Index j = 0; j < 8; ++j) {
      const Complex e = std::exp(kI * g.eta(k) * g.p(j)) / std::sqrt(8.0);
      EXPECT_LE(std::abs(u(k, j) - e), 1e-12);
    }
}

TEST(GateCount, RawMode) {
  const GateCountReport r = count_gates(w_gate(3, 0.1, 0.2, 3), CountMode::raw);
  EXPECT_EQ(r.cnot, 4);
  EXPECT_EQ(r.single_qubit, 4);
  EXPECT_EQ(r.multi, 1);
  EXPECT_EQ(r.by_kind.at("RZ/c2"), 1);
}

TEST(GateCount, PowerBlockMatchesClosedForm) {
  for (int n = 3; n <= 8; ++n) {
    const GateCountReport r = count_gates(build_tilde_v1(0.01, example1_params(n, 2)), CountMode::cnot_basis);
    EXPECT_EQ(r.cnot, predicted_q_v1(n)) << n;
  }
  EXPECT_EQ(predicted_q_v1(3), 118);
  EXPECT_EQ(predicted_q_cv1(3), 186);
}

TEST(GateCount, SingleQubitTotalMatchesClosedForm) {
  for (int n = 3; n <= 8; ++n)
    for (int np = 1; np <= 4; ++np) {
      const GateCountReport r = count_gates(build_vbs(0.01, example1_params(n, np), np), CountMode::cnot_basis);
      EXPECT_EQ(r.single_qubit, predicted_q_single(n, np)) << n << ' ' << np;
    }
}

TEST(GateCount, ZeroPolarityIsOutsideAccounting) {
  Circuit c(2);
  c.add(make_gate(GateKind::x, 0, 0.0, {Control{1, false}}));
  EXPECT_THROW(count_gates(c, CountMode::cnot_basis), UnsupportedError);
  EXPECT_EQ(count_gates(c, CountMode::raw).multi, 1);
}
