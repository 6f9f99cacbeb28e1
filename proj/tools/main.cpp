// schro-cli: pricing runs, convergence tables, gate-count audits and circuit
// dumps. Every subcommand writes CSV (or the gate-list text) to --output or
// stdout. Flags may also come from a key=value file given by --config; flags
// on the command line win.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "schro/experiments.hpp"

namespace {

struct Options {
  std::string problem = "bs1d";
  std::optional<int> n_x, n_p;
  std::optional<double> l_p, t, dt, r, sigma, strike, sigma2, strike2, rho, cash, s_min, s_max;
  std::optional<std::string> boundary, engine;
  std::optional<std::string> spacing, profile, p_star, threshold;
  std::string output;
};

void add_run_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--problem", o.problem, "bs1d | bs2d")->check(CLI::IsMember({"bs1d", "bs2d"}));
  cmd->add_option("--nx", o.n_x, "x qubits per axis");
  cmd->add_option("--np", o.n_p, "p qubits");
  cmd->add_option("--lp", o.l_p, "p-domain half width over pi");
  cmd->add_option("-T,--maturity", o.t, "maturity");
  cmd->add_option("--dt", o.dt, "time step; must divide T");
  cmd->add_option("-r,--rate", o.r, "risk-free rate");
  cmd->add_option("--sigma", o.sigma, "volatility (first asset)");
  cmd->add_option("-K,--strike", o.strike, "strike (first asset)");
  cmd->add_option("--sigma2", o.sigma2, "volatility of the second asset");
  cmd->add_option("--strike2", o.strike2, "strike of the second asset");
  cmd->add_option("--rho", o.rho, "asset correlation");
  cmd->add_option("--cash", o.cash, "cash-or-nothing payout");
  cmd->add_option("--s-min", o.s_min, "lower asset price of the grid");
  cmd->add_option("--s-max", o.s_max, "upper asset price of the grid");
  cmd->add_option("--boundary", o.boundary, "dirichlet | mixed");
  cmd->add_option("--spacing", o.spacing, "fit | paired")->check(CLI::IsMember({"fit", "paired"}));
  cmd->add_option("--profile", o.profile, "exponential | smooth");
  cmd->add_option("--pstar", o.p_star, "recovery node: auto or a value on the p grid");
  cmd->add_option("--threshold-rule", o.threshold, "c1 | a1");
  cmd->add_option("--engine", o.engine, "circuit | dense");
}

schro::RunConfig to_config(const Options& o) {
  auto c = schro::RunConfig::defaults(schro::parse_problem(o.problem));
  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(c.n_x, o.n_x);
  set(c.n_p, o.n_p);
  set(c.l_p, o.l_p);
  set(c.t, o.t);
  set(c.dt, o.dt);
  set(c.r, o.r);
  set(c.sigma, o.sigma);
  set(c.strike, o.strike);
  set(c.sigma2, o.sigma2);
  set(c.strike2, o.strike2);
  set(c.rho, o.rho);
  set(c.cash, o.cash);
  set(c.s_min, o.s_min);
  set(c.s_max, o.s_max);
  if (o.boundary) c.boundary = schro::parse_boundary(*o.boundary);
  if (o.engine) c.engine = schro::parse_engine(*o.engine);
  if (o.spacing) c.spacing = schro::parse_spacing(*o.spacing);
  if (o.profile) c.profile = schro::parse_profile(*o.profile);
  if (o.threshold) c.threshold_rule = schro::parse_threshold_rule(*o.threshold);
  if (o.p_star && *o.p_star != "auto") {
    try {
      c.p_star = std::stod(*o.p_star);
    } catch (const std::exception&) {
      throw schro::ConfigError("--pstar must be 'auto' or a number");
    }
  }
  c.validate();
  return c;
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw schro::ConfigError("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-Scholes by Schrodingerisation: pricing, convergence, gate counts and circuits"};
  app.set_config("--config", "", "key=value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  // Run flags live on the top-level app so the config file can use plain keys.
  Options o;
  add_run_flags(&app, o);
  app.add_option("-o,--output", o.output, "output path (default stdout)");

  app.add_subcommand("price", "price one configuration against analytic and classical references");

  std::string levels = "6:7,7:8,8:9";
  auto* conv = app.add_subcommand("convergence", "error and order table for both initial profiles");
  conv->add_option("--levels", levels, "comma-separated n_x:n_p pairs")->capture_default_str();

  int nx_lo = 3, nx_hi = 8, np_lo = 1, np_hi = 4;
  auto* gc = app.add_subcommand("gatecount", "audit CNOT and single-qubit counts against closed forms");
  gc->add_option("--nx-min", nx_lo)->capture_default_str();
  gc->add_option("--nx-max", nx_hi)->capture_default_str();
  gc->add_option("--np-min", np_lo)->capture_default_str();
  gc->add_option("--np-max", np_hi)->capture_default_str();

  std::string what = "vbs";
  auto* dump = app.add_subcommand("dump-circuit", "write a circuit in the gate-list text format");
  dump->add_option("--circuit", what, "vbs | tilde-v1 | tilde-v2 | qft")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    Sink sink(o.output);
    if (*conv) {
      // Table setup: dense engine, mixed boundaries, T = 0.1, paired spacing, p* = pi/8.
      if (!o.engine) o.engine = "dense";
      if (!o.boundary) o.boundary = "mixed";
      if (!o.t) o.t = 0.1;
      if (!o.spacing) o.spacing = "paired";
      if (!o.p_star) o.p_star = schro::detail::fmt17(schro::kPi / 8.0);
      schro::cmd_convergence(to_config(o), schro::parse_levels(levels), sink.stream());
    } else if (*gc) {
      if (!schro::cmd_gatecount(nx_lo, nx_hi, np_lo, np_hi, sink.stream())) {
        std::cerr << "gatecount: audited counts differ from the closed forms (see match column)\n";
        return 1;
      }
    } else if (*dump) {
      if (!o.engine) o.engine = "circuit";
      schro::cmd_dump_circuit(to_config(o), schro::parse_dump_target(what), sink.stream());
    } else {
      schro::cmd_price(to_config(o), sink.stream());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
