#pragma once

// Experiment drivers behind the command-line tool: pricing runs, convergence
// tables, gate-count audits and circuit dumps. Every driver writes CSV
// (header row, 17 significant digits, LF) to a caller-supplied stream and
// returns the numbers it wrote so tests can inspect them.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "schro/builders.hpp"
#include "schro/gate_count.hpp"
#include "schro/pipeline.hpp"
#include "schro/pricing.hpp"

namespace schro {

enum class Problem { bs1d, bs2d };

inline Problem parse_problem(std::string_view s) {
  if (s == "bs1d") return Problem::bs1d;
  if (s == "bs2d") return Problem::bs2d;
  throw ConfigError("unknown problem '" + std::string(s) + "' (expected bs1d|bs2d)");
}

/// How the x-grid spacing is tied to [ln s_min, ln s_max].
///   fit    : 2^n_x + 1 intervals span the interval exactly
///   paired : h = (ln s_max - ln s_min) / 2^n_x, the right face moves out by h
enum class Spacing { fit, paired };

inline Spacing parse_spacing(std::string_view s) {
  if (s == "fit") return Spacing::fit;
  if (s == "paired") return Spacing::paired;
  throw ConfigError("unknown spacing '" + std::string(s) + "' (expected fit|paired)");
}

struct RunConfig {
  Problem problem = Problem::bs1d;
  int n_x = 6;
  int n_p = 6;
  double l_p = 4.0;
  double t = 1.0;
  double dt = 1e-3;
  double r = 0.02;
  double sigma = 0.3;
  double strike = 30.0;
  /// second asset (bs2d)
  double sigma2 = 0.3;
  double strike2 = 50.0;
  double rho = 0.6;
  double cash = 1.0;
  double s_min = 1e-4;
  double s_max = 300.0;
  BoundaryKind boundary = BoundaryKind::dirichlet;
  Spacing spacing = Spacing::fit;
  Profile profile = Profile::exponential;
  std::optional<double> p_star;
  ThresholdRule threshold_rule = ThresholdRule::c1;
  Engine engine = Engine::circuit;

  /// Defaults of the two reference problems.
  static RunConfig defaults(Problem p) {
    RunConfig c;
    c.problem = p;
    if (p == Problem::bs2d) {
      c.n_x = 8;
      c.n_p = 7;
      c.l_p = 15.0;
      c.r = 0.03;
      c.sigma = 0.3;
      c.strike = 50.0;
      c.sigma2 = 0.3;
      c.strike2 = 50.0;
      c.rho = 0.6;
      c.cash = 1.0;
      c.s_min = 1e-6;
      c.s_max = 200.0;
      c.boundary = BoundaryKind::mixed;
      c.engine = Engine::dense;
    }
    return c;
  }

  long n_steps() const { return std::lround(t / dt); }

  void validate() const {
    if (n_x < 1) throw ConfigError("n_x must be >= 1");
    if (n_p < 1) throw ConfigError("n_p must be >= 1");
    if (!(l_p > 0.0)) throw ConfigError("L_p must be positive");
    if (!(t > 0.0)) throw ConfigError("T must be positive");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    const double steps = t / dt;
    if (std::abs(steps - std::round(steps)) > 1e-12 * steps)
      throw ConfigError("dt must divide T (T/dt = " + std::to_string(steps) + ")");
    if (!(sigma > 0.0) || !(strike > 0.0)) throw ConfigError("sigma and K must be positive");
    if (!(s_min > 0.0) || !(s_max > s_min)) throw ConfigError("need 0 < s_min < s_max");
    if (problem == Problem::bs2d) {
      if (!(sigma2 > 0.0) || !(strike2 > 0.0)) throw ConfigError("sigma2 and K2 must be positive");
      if (rho < -1.0 || rho > 1.0) throw ConfigError("rho must lie in [-1,1]");
    }
    if (engine == Engine::circuit && boundary == BoundaryKind::mixed)
      throw ConfigError("the circuit engine needs a power-of-two register: use boundary=dirichlet or engine=dense");
    if (engine == Engine::circuit && problem == Problem::bs2d && rho != 0.0)
      throw ConfigError("the 2-D circuit engine needs rho=0; use engine=dense");
  }

  BsParams1D params_1d() const {
    BsParams1D p;
    p.r = r;
    p.sigma = sigma;
    p.strike = strike;
    p.maturity = t;
    return p;
  }

  BsParamsD params_2d() const {
    BsParamsD p;
    p.dim = 2;
    p.r = r;
    p.sigmas = {sigma, sigma2};
    p.strikes = {strike, strike2};
    p.rho = {1.0, rho, rho, 1.0};
    p.payoff = PayoffKind::cash_or_nothing;
    p.cash = cash;
    return p;
  }

  SpatialGrid grid() const {
    const double left = std::log(s_min), right = std::log(s_max);
    if (spacing == Spacing::fit) return SpatialGrid(left, right, n_x);
    const double cells = std::ldexp(1.0, n_x);
    return SpatialGrid(left, left + (right - left) * (cells + 1.0) / cells, n_x);
  }

  PGrid pgrid() const { return PGrid(l_p, n_p); }

  OdeSystem system() const {
    if (problem == Problem::bs1d) return assemble_bs_1d(params_1d(), grid(), boundary);
    return assemble_bs_ddim(params_2d(), grid(), false, boundary);
  }
};

/// One Trotter step for the circuit engine.
inline Circuit trotter_step(const RunConfig& cfg, const DilatedSystem& d) {
  const double tau = cfg.t / double(cfg.n_steps());
  if (cfg.problem == Problem::bs1d) {
    CircuitParams1D cp = CircuitParams1D::from(cfg.params_1d(), cfg.grid(), cfg.pgrid(), d.dilated);
    cp.beta = d.beta;
    return build_vbs(tau, cp, cfg.n_p);
  }
  return build_vbs_ddim(tau, CircuitParamsD::from(cfg.params_2d(), cfg.grid(), cfg.pgrid()), cfg.n_p);
}

namespace detail {
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void csv_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << fmt17(values[i]);
  os << '\n';
}

inline double l2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}
}  // namespace detail

/// Prices on the unknowns of the grid, restricted to S <= 2K on every axis.
struct PriceTable {
  std::vector<std::vector<double>> s;  ///< one column per axis
  std::vector<double> exact, classical, schro;
  double p_star = 0.0;
  double threshold = 0.0;
  /// Relative L2 errors of the ODE solution over all unknowns.
  double rel_schro_vs_classical = 0.0;
  double rel_classical_vs_exact = 0.0;
  double rel_schro_vs_exact = 0.0;

  double err_classical() const { return detail::l2(classical, exact); }
  double err_schro() const { return detail::l2(schro, exact); }
};

/// Solve one configuration and compare with the analytic and classical prices.
inline PriceTable run_price(const RunConfig& cfg) {
  cfg.validate();
  const OdeSystem sys = cfg.system();
  const PGrid g = cfg.pgrid();
  std::optional<Circuit> step;
  if (cfg.engine == Engine::circuit) step = trotter_step(cfg, dilate(sys));
  const PipelineResult res = run_pipeline(sys, g, cfg.t, cfg.n_steps(), cfg.profile, cfg.p_star, step, cfg.threshold_rule);
  const ComplexVector ref = classical_reference(sys, cfg.t);

  const SpatialGrid grid = cfg.grid();
  const RealVector x = grid.unknown_nodes(cfg.boundary);
  const Eigen::Index n = x.size();
  ComplexVector exact(sys.size());
  PriceTable out;
  out.p_star = res.p_star;
  out.threshold = res.threshold;
  if (cfg.problem == Problem::bs1d) {
    const BsParams1D p = cfg.params_1d();
    out.s.resize(1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = std::exp(x(i));
      const double v = bs_call_analytic(x(i), cfg.t, p);
      exact(i) = v - s;
      if (s > 2.0 * p.strike) continue;
      out.s[0].push_back(s);
      out.exact.push_back(v);
      out.classical.push_back(ref(i).real() + s);
      out.schro.push_back(res.u(i).real() + s);
    }
  } else {
    const BsParamsD p = cfg.params_2d();
    out.s.resize(2);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index idx = i * n + j;
        exact(idx) = cash_or_nothing_2d_analytic(x(i), x(j), cfg.t, p);
        const double s1 = std::exp(x(i)), s2 = std::exp(x(j));
        if (s1 > 2.0 * p.strikes[0] || s2 > 2.0 * p.strikes[1]) continue;
        out.s[0].push_back(s1);
        out.s[1].push_back(s2);
        out.exact.push_back(exact(idx).real());
        out.classical.push_back(ref(idx).real());
        out.schro.push_back(res.u(idx).real());
      }
  }
  out.rel_schro_vs_classical = (res.u - ref).norm() / ref.norm();
  out.rel_classical_vs_exact = (ref - exact).norm() / exact.norm();
  out.rel_schro_vs_exact = (res.u - exact).norm() / exact.norm();
  return out;
}

inline void write_price_csv(const PriceTable& t, std::ostream& os) {
  if (t.s.size() == 1) os << "S,u_exact,u_classical,u_schro,err_classical,err_schro\n";
  else os << "S1,S2,u_exact,u_classical,u_schro,err_classical,err_schro\n";
  for (std::size_t i = 0; i < t.exact.size(); ++i) {
    std::vector<double> row;
    for (const auto& col : t.s) row.push_back(col[i]);
    row.insert(row.end(), {t.exact[i], t.classical[i], t.schro[i], t.classical[i] - t.exact[i], t.schro[i] - t.exact[i]});
    detail::csv_row(os, row);
  }
}

inline PriceTable cmd_price(const RunConfig& cfg, std::ostream& os) {
  PriceTable t = run_price(cfg);
  write_price_csv(t, os);
  return t;
}

struct ConvergenceLevel {
  int n_x = 0;
  int n_p = 0;
};

struct ConvergenceRow {
  Profile profile = Profile::exponential;
  int n_x = 0;
  int n_p = 0;
  double dp = 0.0;
  double dx = 0.0;
  double p_star = 0.0;
  double error = 0.0;
  /// log2(e_{i-1}/e_i); NaN on the first level
  double order = NAN;
};

/// Parse "6:7,7:8,8:9".
inline std::vector<ConvergenceLevel> parse_levels(const std::string& text) {
  std::vector<ConvergenceLevel> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, end - pos);
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("level '" + item + "' must look like n_x:n_p");
    try {
      out.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ConfigError("level '" + item + "' must look like n_x:n_p");
    }
    pos = end + 1;
  }
  if (out.size() < 3) throw ConfigError("convergence needs at least 3 grid levels");
  return out;
}

/// Error of the recovered price against the analytic price, both profiles,
/// on each (n_x, n_p) level. The error is the discrete L2 norm over the
/// unknowns with S <= 2K (no h weight). `cfg.p_star` must be a node of every
/// level, or empty for the smallest valid node.
inline std::vector<ConvergenceRow> run_convergence(const RunConfig& base, const std::vector<ConvergenceLevel>& levels) {
  if (base.problem != Problem::bs1d) throw UnsupportedError("convergence: only problem=bs1d has a tabulated reference");
  std::vector<ConvergenceRow> rows;
  for (Profile prof : {Profile::exponential, Profile::smooth}) {
    double prev = NAN;
    for (const auto& lv : levels) {
      RunConfig cfg = base;
      cfg.n_x = lv.n_x;
      cfg.n_p = lv.n_p;
      cfg.profile = prof;
      cfg.validate();
      const OdeSystem sys = cfg.system();
      const PGrid g = cfg.pgrid();
      std::optional<Circuit> step;
      if (cfg.engine == Engine::circuit) step = trotter_step(cfg, dilate(sys));
      const PipelineResult res = run_pipeline(sys, g, cfg.t, cfg.n_steps(), prof, cfg.p_star, step, cfg.threshold_rule);
      const RealVector x = cfg.grid().unknown_nodes(cfg.boundary);
      const BsParams1D p = cfg.params_1d();
      double e = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double s = std::exp(x(i));
        if (s > 2.0 * p.strike) continue;
        const double d = res.u(i).real() + s - bs_call_analytic(x(i), cfg.t, p);
        e += d * d;
      }
      ConvergenceRow row;
      row.profile = prof;
      row.n_x = lv.n_x;
      row.n_p = lv.n_p;
      row.dp = g.delta_p();
      row.dx = cfg.grid().h();
      row.p_star = res.p_star;
      row.error = std::sqrt(e);
      row.order = std::isnan(prev) ? NAN : std::log2(prev / row.error);
      prev = row.error;
      rows.push_back(row);
    }
  }
  return rows;
}

inline std::vector<ConvergenceRow> cmd_convergence(const RunConfig& base, const std::vector<ConvergenceLevel>& levels,
                                                   std::ostream& os) {
  const auto rows = run_convergence(base, levels);
  os << "profile,n_x,n_p,dp,dx,p_star,error,order\n";
  for (const auto& r : rows) {
    os << to_string(r.profile) << ',' << r.n_x << ',' << r.n_p << ',';
    detail::csv_row(os, {r.dp, r.dx, r.p_star, r.error, r.order});
  }
  return rows;
}

struct GateCountRow {
  int n_x = 0;
  int n_p = 0;
  long long q_v1 = 0, q_v1_predicted = 0;
  long long q_cv1 = 0, q_cv1_predicted = 0;
  long long q_single = 0, q_single_predicted = 0;

  bool matches() const {
    return q_v1 == q_v1_predicted && q_cv1 == q_cv1_predicted && q_single == q_single_predicted;
  }
};

/// cnot-basis audit of the dilated 1-D circuits against the closed forms.
inline GateCountRow audit_gate_counts(int n_x, int n_p) {
  const RunConfig cfg = RunConfig::defaults(Problem::bs1d);
  const SpatialGrid grid(std::log(cfg.s_min), std::log(cfg.s_max), n_x);
  const CircuitParams1D cp = CircuitParams1D::from(cfg.params_1d(), grid, PGrid(cfg.l_p, n_p), true);
  const double tau = 1e-3;
  const Circuit v1 = build_tilde_v1(tau, cp);
  Circuit v1_wide(v1.width() + 1);
  v1_wide.append_mapped(v1, detail::span_map(v1.width(), 1));
  const Circuit cv1 = v1_wide.controlled(Control{0, true});
  GateCountRow row;
  row.n_x = n_x;
  row.n_p = n_p;
  row.q_v1 = count_gates(v1, CountMode::cnot_basis).cnot;
  row.q_cv1 = count_gates(cv1, CountMode::cnot_basis).cnot;
  row.q_single = count_gates(build_vbs(tau, cp, n_p), CountMode::cnot_basis).single_qubit;
  row.q_v1_predicted = predicted_q_v1(n_x);
  row.q_cv1_predicted = predicted_q_cv1(n_x);
  row.q_single_predicted = predicted_q_single(n_x, n_p);
  return row;
}

/// Returns true when every audited count equals its closed form.
inline bool cmd_gatecount(int nx_lo, int nx_hi, int np_lo, int np_hi, std::ostream& os) {
  if (nx_lo < 1 || nx_hi < nx_lo || np_lo < 1 || np_hi < np_lo) throw ConfigError("gatecount: empty or invalid range");
  os << "n_x,n_p,q_v1,q_v1_predicted,q_cv1,q_cv1_predicted,q_single,q_single_predicted,match\n";
  bool all = true;
  for (int nx = nx_lo; nx <= nx_hi; ++nx)
    for (int np = np_lo; np <= np_hi; ++np) {
      const GateCountRow r = audit_gate_counts(nx, np);
      all = all && r.matches();
      os << r.n_x << ',' << r.n_p << ',' << r.q_v1 << ',' << r.q_v1_predicted << ',' << r.q_cv1 << ','
         << r.q_cv1_predicted << ',' << r.q_single << ',' << r.q_single_predicted << ',' << (r.matches() ? 1 : 0)
         << '\n';
    }
  return all;
}

enum class DumpTarget { vbs, tilde_v1, tilde_v2, qft };

inline DumpTarget parse_dump_target(std::string_view s) {
  if (s == "vbs") return DumpTarget::vbs;
  if (s == "tilde-v1") return DumpTarget::tilde_v1;
  if (s == "tilde-v2") return DumpTarget::tilde_v2;
  if (s == "qft") return DumpTarget::qft;
  throw ConfigError("unknown circuit '" + std::string(s) + "' (expected vbs|tilde-v1|tilde-v2|qft)");
}

inline Circuit select_circuit(const RunConfig& cfg, DumpTarget what) {
  if (what == DumpTarget::qft) return build_qft(cfg.n_p);
  RunConfig c = cfg;
  c.engine = Engine::circuit;
  c.validate();
  const DilatedSystem d = dilate(c.system());
  const double tau = c.t / double(c.n_steps());
  if (c.problem == Problem::bs2d) {
    const CircuitParamsD cp = CircuitParamsD::from(c.params_2d(), c.grid(), c.pgrid());
    if (what == DumpTarget::tilde_v1) return build_tilde_v1_ddim(tau, cp);
    if (what == DumpTarget::tilde_v2) return build_tilde_v2_ddim(tau, cp);
    return build_vbs_ddim(tau, cp, c.n_p);
  }
  CircuitParams1D cp = CircuitParams1D::from(c.params_1d(), c.grid(), c.pgrid(), d.dilated);
  cp.beta = d.beta;
  if (what == DumpTarget::tilde_v1) return build_tilde_v1(tau, cp);
  if (what == DumpTarget::tilde_v2) return build_tilde_v2(tau, cp);
  return build_vbs(tau, cp, c.n_p);
}

inline Circuit cmd_dump_circuit(const RunConfig& cfg, DumpTarget what, std::ostream& os) {
  Circuit c = select_circuit(cfg, what);
  dump(c, os);
  return c;
}

}  // namespace schro
