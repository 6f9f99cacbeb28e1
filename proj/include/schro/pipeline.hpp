#pragma once

// End-to-end solve: dilate -> initial v -> transform p -> evolve -> inverse
// transform -> recover u at a single p-node. The circuit engine executes one
// Trotter-step circuit n_steps times on a statevector; the dense engine uses
// the exact block evolution.

#include <optional>

#include "schro/builders.hpp"
#include "schro/schrodingerise.hpp"
#include "schro/statevector.hpp"

namespace schro {

enum class Engine { circuit, dense };

inline Engine parse_engine(std::string_view s) {
  if (s == "circuit") return Engine::circuit;
  if (s == "dense" || s == "dense-oracle") return Engine::dense;
  throw ConfigError("unknown engine '" + std::string(s) + "' (expected circuit|dense)");
}

struct PipelineResult {
  ComplexVector u;
  double p_star = 0.0;
  /// lambda_max T under the selected rule
  double threshold = 0.0;
};

/// `step` is the single-step circuit for tau = T / n_steps (circuit engine);
/// leave it empty for the dense engine. `p_star` empty selects the smallest
/// valid node.
inline PipelineResult run_pipeline(const OdeSystem& sys, const PGrid& g, double t, long n_steps, Profile profile,
                                   std::optional<double> p_star, const std::optional<Circuit>& step,
                                   ThresholdRule rule = ThresholdRule::c1) {
  if (n_steps < 1) throw ConfigError("run_pipeline: n_steps must be >= 1");
  const DilatedSystem d = dilate(sys);
  PipelineResult res;
  res.threshold = recovery_threshold(d, t, rule);
  res.p_star = p_star ? *p_star : g.p(smallest_valid_node(g, res.threshold));

  WarpedState v = initial_v(d, g, profile);
  if (!step) {
    const HamiltonianBS h = assemble_hbs(d, g);
    v = eta_to_p(evolve_exact(h, p_to_eta(v), t));
  } else {
    const Eigen::Index full = v.amplitudes.size();
    if ((Eigen::Index{1} << step->width()) != full)
      throw ShapeError("run_pipeline: step circuit width does not match the (dilation, x, p) register");
    StateVector s = StateVector::from_vector(v.amplitudes, v.norm_factor);
    apply_circuit(s, embed_low(build_qft(g.n_p), s.width));
    for (long i = 0; i < n_steps; ++i) apply_circuit(s, *step);
    apply_circuit(s, embed_low(build_iqft(g.n_p), s.width));
    v.amplitudes = s.amplitudes;
    v.norm_factor = s.norm_factor;
  }
  res.u = recover_u(v, g, res.p_star, d, t, res.threshold);
  return res;
}

}  // namespace schro
