#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "secgame/oracle.hpp"
#include "secgame/solve.hpp"
#include "test_util.hpp"

using namespace secgame;

// Broad randomized shakedown: weight scales across two orders of
// magnitude, up to eight targets, every model and family combination.
// Each solution must clear the stationarity gate and resist deviations.

namespace {

GameSpec random_instance(std::mt19937& rng, int model_pick) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 1 + static_cast<int>(u(rng) * 7.99);
  const double wscale = std::exp(u(rng) * 4.0 - 1.0);
  std::vector<double> w(static_cast<size_t>(n));
  for (auto& v : w) v = wscale * (0.3 + u(rng) * 2.0);
  std::sort(w.begin(), w.end(), std::greater<>());
  for (int i = 1; i < n; ++i)
    if (w[i] >= w[i - 1] - 1e-9 * wscale) w[i] = w[i - 1] * 0.93;

  if (model_pick == 0) {
    EfficiencyFunction att = u(rng) < 0.4
                                 ? EfficiencyFunction::exp_attack()
                                 : EfficiencyFunction::exp_attack_pow(0.3 + u(rng) * 4.0);
    EfficiencyFunction def;
    const double p = u(rng);
    if (p < 0.33)
      def = EfficiencyFunction::inv_g(0.2 + u(rng) * 3.0);
    else if (p < 0.66)
      def = EfficiencyFunction::exp_g(0.2 + u(rng) * 3.0);
    else
      def = EfficiencyFunction::quad_g(0.2 + 0.9 * u(rng));
    return make_product_spec(w, wscale * (0.02 + 0.4 * u(rng)),
                             wscale * (0.02 + 0.4 * u(rng)), 0.05 + 4.0 * u(rng),
                             0.05 + 3.0 * u(rng), att, def);
  }
  if (model_pick == 1) {
    const double c = w.back() * (0.15 + 0.6 * u(rng));
    const double gamma = std::min(0.45 * u(rng), 0.9 * c / w.front());
    return make_linear_spec(w, c, wscale * (0.05 + 0.5 * u(rng)),
                            0.02 + 0.96 * u(rng),
                            std::min(0.02 + 1.6 * u(rng), 0.9 * n), gamma);
  }
  if (u(rng) < 0.65) {
    const double a = 0.3 + 0.7 * u(rng);
    const double a2 = u(rng) < 0.7 ? a : 0.3 + 0.7 * u(rng);
    return make_proportion_spec(w, wscale * (0.1 + 0.8 * u(rng)),
                                wscale * (0.1 + 0.8 * u(rng)), 0.05 + 2.0 * u(rng),
                                0.05 + 2.0 * u(rng),
                                EfficiencyFunction::power(a, Role::Attack),
                                EfficiencyFunction::power(a2, Role::Defence));
  }
  EfficiencyFunction def = u(rng) < 0.5 ? EfficiencyFunction::exp_g(0.3 + u(rng) * 2.0)
                                        : EfficiencyFunction::inv_g(0.3 + u(rng) * 2.0);
  return make_proportion_spec(w, wscale * (0.05 + 0.3 * u(rng)),
                              wscale * (0.05 + 0.3 * u(rng)), 0.05 + 2.0 * u(rng),
                              0.05 + 2.0 * u(rng), EfficiencyFunction::exp_attack(),
                              def);
}

}  // namespace

TEST_CASE("randomized shakedown across models, scales and sizes") {
  std::mt19937 rng(97531);
  int solved = 0;
  int domains[4] = {0, 0, 0, 0};
  for (int t = 0; t < 90; ++t) {
    const GameSpec spec = random_instance(rng, t % 3);
    if (!validate_spec(spec).empty()) continue;
    CAPTURE(t);
    Equilibrium eq;
    try {
      eq = solve(spec);
    } catch (const UnhandledBudgetPoint&) {
      continue;  // an exact-threshold draw; practically never happens
    }
    ++solved;
    domains[static_cast<int>(eq.budget_domain)]++;
    CHECK(kkt_residual(spec, eq) <= 1e-6);
    CHECK(allocation_feasible(spec, eq.alloc));
    const auto rep = epsilon_nash_check(spec, eq);
    CHECK(rep.eps_attacker <= 1e-4 * (1.0 + std::abs(eq.utility_attacker)));
    CHECK(rep.eps_defender <= 1e-4 * (1.0 + std::abs(eq.utility_defender)));
  }
  CHECK(solved >= 80);
  CHECK(domains[0] > 0);
  CHECK(domains[1] > 0);
  CHECK(domains[3] > 0);
}
