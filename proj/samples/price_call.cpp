// Small end-to-end run: a European call on a 2^5 grid, solved on the
// statevector with one Trotter circuit per time step, printed next to the
// analytic price.

#include <cstdio>

#include "schro/experiments.hpp"

int main() {
  schro::RunConfig cfg = schro::RunConfig::defaults(schro::Problem::bs1d);
  cfg.n_x = 5;
  cfg.n_p = 5;
  cfg.t = 0.25;
  cfg.dt = 1e-3;
  cfg.threshold_rule = schro::ThresholdRule::a1;

  const schro::PriceTable t = schro::run_price(cfg);
  std::printf("p* = %.4f (threshold %.4f)\n", t.p_star, t.threshold);
  std::printf("%10s %12s %12s %12s\n", "S", "exact", "classical", "schro");
  for (std::size_t i = 0; i < t.exact.size(); ++i)
    if (t.s[0][i] > 5.0) std::printf("%10.4f %12.6f %12.6f %12.6f\n", t.s[0][i], t.exact[i], t.classical[i], t.schro[i]);
  std::printf("relative error vs classical: %.4f\n", t.rel_schro_vs_classical);
}
