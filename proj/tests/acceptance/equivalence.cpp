// Criterion 8: weighted, unweighted, full four-field and Duhamel paths agree on (delta, A).
#include <algorithm>
#include <cmath>
#include <random>

#include "couette/mode_dynamics.hpp"
#include "report.hpp"

using namespace couette;
using acceptance::fmt;

namespace {

double rel_diff(const UnweightedState& a, const UnweightedState& b) {
  const double scale = std::max({std::abs(a.delta), std::abs(a.a), std::abs(b.delta), std::abs(b.a), 1e-300});
  return std::max(std::abs(a.delta - b.delta), std::abs(a.a - b.a)) / scale;
}

}  // namespace

void equivalence_criteria(acceptance::Report& rep) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> kd(1, 3);
  std::uniform_real_distribution<double> ed(-10.0, 10.0);
  std::uniform_real_distribution<double> gd(1.1, 2.5);
  std::uniform_real_distribution<double> md(std::log(0.3), std::log(2.0));
  StepPolicy pol;
  pol.tol = 1e-12;
  pol.c_osc = 0.02;
  double worst = 0.0;
  for (int m = 0; m < 20; ++m) {
    const ModeKey key{(rng() & 1) ? kd(rng) : -kd(rng), ed(rng)};
    const PhysParams pp{gd(rng), std::exp(md(rng))};
    const FullModeState s0{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
    const cplx src = s0.beta() + s0.big_gamma(pp.gamma);
    const UnweightedState un0{s0.delta(pp.gamma), s0.A};
    const WeightedState z0 = weight(un0, 0.0, key, pp);
    for (double t : {10.0, 25.0, 50.0}) {
      const FullModeState f = to_full(integrate(FullSystem(key, pp), to_vec(s0), t, pol).final_state());
      const UnweightedState full{f.delta(pp.gamma), f.A};
      const UnweightedState unw =
          to_unweighted(integrate(UnweightedSystem(key, pp, src), to_vec(un0), t, pol).final_state());
      const UnweightedState wtd = unweight(
          to_weighted(integrate(WeightedSystem(key, pp, Convention::derived, src), to_vec(z0), t, pol).final_state()), t,
          key, pp);
      const UnweightedState duh = unweight(duhamel_solve(z0, src, key, pp, t, pol), t, key, pp);
      const UnweightedState all[] = {full, unw, wtd, duh};
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) worst = std::max(worst, rel_diff(all[i], all[j]));
      }
    }
  }
  rep.add(8, worst < 1e-6, "20 modes at t=10,25,50: worst pairwise relative difference=" + fmt("%.3e", worst) +
                               " (limit 1e-6)");
}
