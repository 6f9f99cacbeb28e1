#pragma once

// Gate-count auditor.
//
// raw        : IR gates as stored. Uncontrolled gates are single-qubit, X with
//              one control is a CNOT, every other controlled gate is tallied
//              under "multi".
// cnot_basis : accounting used for the closed-form counts
//                X, 1 control            -> 1 CNOT
//                H or P, 1 control       -> 1 CNOT + 1 single-qubit gate
//                rotation, 1 control     -> 2 CNOTs
//                any gate, c >= 2 ctrls  -> 16c - 24 CNOTs (Toffoli = 8, C3X = 24)
//                uncontrolled gate       -> 1 single-qubit gate
//              Global phases are free in both modes.

#include <map>
#include <string>

#include "schro/circuit.hpp"

namespace schro {

enum class CountMode { raw, cnot_basis };

struct GateCountReport {
  long long single_qubit = 0;
  long long cnot = 0;
  long long multi = 0;  ///< raw mode only: controlled gates other than CNOT
  std::map<std::string, long long> by_kind;
};

inline std::string kind_key(const Gate& g) {
  std::string k(gate_name(g.kind));
  if (!g.controls.empty()) k += "/c" + std::to_string(g.controls.size());
  return k;
}

inline GateCountReport count_gates(const Circuit& c, CountMode mode) {
  GateCountReport rep;
  for (const auto& g : c.gates()) {
    ++rep.by_kind[kind_key(g)];
    if (g.kind == GateKind::global_phase) continue;
    const long long nc = static_cast<long long>(g.controls.size());
    if (mode == CountMode::raw) {
      if (nc == 0) ++rep.single_qubit;
      else if (g.is_cnot()) ++rep.cnot;
      else ++rep.multi;
      continue;
    }
    for (const auto& ctl : g.controls)
      if (!ctl.on_one) throw UnsupportedError("cnot-basis count: controls on |0> are not part of the accounting");
    if (nc == 0) {
      ++rep.single_qubit;
    } else if (nc == 1) {
      switch (g.kind) {
        case GateKind::x: rep.cnot += 1; break;
        case GateKind::h:
        case GateKind::phase:
          rep.cnot += 1;
          rep.single_qubit += 1;
          break;
        default: rep.cnot += 2; break;
      }
    } else {
      rep.cnot += 16 * nc - 24;
    }
  }
  return rep;
}

/// Closed-form CNOT count of one dilated power block.
inline long long predicted_q_v1(long long n_x) { return 16 * n_x * n_x - 4 * n_x - 14; }
/// Closed-form CNOT count of one p-controlled power block.
inline long long predicted_q_cv1(long long n_x) { return 32 * n_x * n_x - 12 * n_x - 66; }
/// Closed-form single-qubit total of a full Trotter step.
inline long long predicted_q_single(long long n_x, int n_p) {
  return (1LL << (n_p - 1)) * (4 * n_x + 2) + (4 * n_x + 2);
}

}  // namespace schro
