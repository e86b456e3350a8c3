#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "secgame/oracle.hpp"
#include "secgame/product_solver.hpp"
#include "secgame/root_find.hpp"
#include "test_util.hpp"

using namespace secgame;

namespace {

// The single-target workhorse: f = 1 - e^{-x}, complement e^{-y}.
GameSpec unit_target(double c = 0.3, double c_hat = 0.2, double xa = 10.0,
                     double yd = 10.0) {
  return make_product_spec({1.0}, c, c_hat, xa, yd, EfficiencyFunction::exp_attack(),
                           EfficiencyFunction::exp_g(1.0));
}

// Independent 2-D oracle: mutual argmax over a grid of the per-target
// payoffs at fixed prices. Used to pin the analytic fixed point.
std::pair<double, double> grid_local_point(const GameSpec& spec, double price_a,
                                           double price_d, double hi, double step) {
  const int m = static_cast<int>(hi / step);
  std::vector<double> f(m + 1), gt(m + 1);
  for (int k = 0; k <= m; ++k) {
    f[k] = spec.attack_eff.value(k * step);
    gt[k] = spec.defence_eff.value(k * step);
  }
  const double w = spec.weights[0];
  auto ua = [&](int ix, int iy) { return w * f[ix] * gt[iy] - price_a * ix * step; };
  auto ud = [&](int ix, int iy) { return -w * f[ix] * gt[iy] - price_d * iy * step; };
  std::vector<int> br_x(m + 1), br_y(m + 1);
  for (int iy = 0; iy <= m; ++iy) {
    int best = 0;
    for (int ix = 1; ix <= m; ++ix)
      if (ua(ix, iy) > ua(best, iy)) best = ix;
    br_x[iy] = best;
  }
  for (int ix = 0; ix <= m; ++ix) {
    int best = 0;
    for (int iy = 1; iy <= m; ++iy)
      if (ud(ix, iy) > ud(ix, best)) best = iy;
    br_y[ix] = best;
  }
  for (int iy = 0; iy <= m; ++iy) {
    const int ix = br_x[iy];
    if (std::abs(br_y[ix] - iy) <= 1) return {ix * step, iy * step};
  }
  return {-1.0, -1.0};
}

}  // namespace

TEST_CASE("per-target stationary point on the unit instance") {
  const GameSpec spec = unit_target();
  const auto [x, y] = per_target_point(0, {0.0, 0.0}, spec, true);
  // Adding the two equalities eliminates the attack term: the complement
  // equals c + c_hat = 0.5, then e^{-x} = c / (c + c_hat).
  CHECK(x == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-9));
  CHECK(y == doctest::Approx(std::log(2.0)).epsilon(1e-9));

  CHECK(std::exp(-x) * std::exp(-y) == doctest::Approx(0.3).epsilon(1e-9));
  CHECK((1.0 - std::exp(-x)) * std::exp(-y) == doctest::Approx(0.2).epsilon(1e-9));

  const auto [gx, gy] = grid_local_point(spec, 0.3, 0.2, 2.0, 1e-3);
  CHECK(std::abs(gx - x) <= 2e-3);
  CHECK(std::abs(gy - y) <= 2e-3);
}

TEST_CASE("per-target point with the attacker priced out") {
  const GameSpec spec = unit_target(1.2, 0.2);
  const auto [x, y] = per_target_point(0, {0.0, 0.0}, spec, true);
  CHECK(x == 0.0);
  CHECK(y == 0.0);
}

TEST_CASE("undefended branch maximizes revenue minus cost") {
  const GameSpec spec = unit_target();
  const auto [x, y] = per_target_point(0, {0.0, 0.0}, spec, false);
  CHECK(y == 0.0);
  CHECK(x == doctest::Approx(-std::log(0.3)).epsilon(1e-10));
  // independent 1-D grid maximization of f(x) - 0.3 x
  double best_x = 0.0, best_u = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double xx = k * 1e-3;
    const double u = (1.0 - std::exp(-xx)) - 0.3 * xx;
    if (u > best_u) {
      best_u = u;
      best_x = xx;
    }
  }
  CHECK(std::abs(best_x - x) <= 2e-3);
}

TEST_CASE("total demand over prefixes") {
  const GameSpec spec = unit_target();
  const auto [sx, sy] = total_demand({0.0, 0.0}, 1, 1, spec);
  CHECK(sx == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-9));
  CHECK(sy == doctest::Approx(std::log(2.0)).epsilon(1e-9));

  const auto [zx, zy] = total_demand({0.0, 0.0}, 0, 0, spec);
  CHECK(zx == 0.0);
  CHECK(zy == 0.0);

  // a near-identical pair of targets doubles the totals, by continuity
  auto pair_spec = make_product_spec({1.0, 1.0 - 1e-3}, 0.3, 0.2, 10.0, 10.0,
                                     EfficiencyFunction::exp_attack(),
                                     EfficiencyFunction::exp_g(1.0));
  const auto [px, py] = total_demand({0.0, 0.0}, 2, 2, pair_spec);
  CHECK(px == doctest::Approx(2.0 * sx).epsilon(1e-2));
  CHECK(py == doctest::Approx(2.0 * sy).epsilon(1e-2));
}

TEST_CASE("budget domain classification on the unit instance") {
  SUBCASE("ample budgets are sufficient for both") {
    const auto rep = classify_budget_domain(unit_target());
    CHECK(rep.domain == BudgetDomain::D1);
    CHECK(rep.x_suf == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-8));
    CHECK(rep.y_suf == doctest::Approx(std::log(2.0)).epsilon(1e-8));
    CHECK(!rep.x_hat_suf);
    CHECK(!rep.y_hat_suf);
  }
  SUBCASE("attacker short, defender covering his reduced needs") {
    const auto rep = classify_budget_domain(unit_target(0.3, 0.2, 0.3, 1.0));
    CHECK(rep.domain == BudgetDomain::D2);
    REQUIRE(rep.y_hat_suf);
    // conditional defence need at the binding attack level, by hand:
    // f(0.3) carries the defence equality, so e^{-y} = c_hat / f(0.3).
    const double y_expected = -std::log(0.2 / (1.0 - std::exp(-0.3)));
    CHECK(*rep.y_hat_suf == doctest::Approx(y_expected).epsilon(1e-7));
    CHECK(*rep.y_hat_suf < std::log(2.0));
  }
  SUBCASE("tiny attack budget leaves the defender idle") {
    // At x = 0.1 the defence marginal at zero is f(0.1) - 0.2 < 0: the
    // conditional defence need vanishes and any budget is sufficient.
    const auto rep = classify_budget_domain(unit_target(0.3, 0.2, 0.1, 0.1));
    CHECK(rep.domain == BudgetDomain::D2);
    REQUIRE(rep.y_hat_suf);
    CHECK(*rep.y_hat_suf == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("both short") {
    const auto rep = classify_budget_domain(unit_target(0.3, 0.2, 0.4, 0.2));
    CHECK(rep.domain == BudgetDomain::D4);
    REQUIRE(rep.y_hat_suf);
    REQUIRE(rep.x_hat_suf);
    CHECK(*rep.y_hat_suf > 0.2);
    CHECK(*rep.x_hat_suf > 0.4);
  }
  SUBCASE("defender short") {
    const auto rep = classify_budget_domain(unit_target(0.3, 0.2, 10.0, 0.2));
    CHECK(rep.domain == BudgetDomain::D3);
    REQUIRE(rep.x_hat_suf);
    // with the defence pinned at 0.2, the attack equality gives the need
    const double x_expected = -std::log(0.3 / std::exp(-0.2));
    CHECK(*rep.x_hat_suf == doctest::Approx(x_expected).epsilon(1e-7));
  }
}

TEST_CASE("unconstrained solve returns the local stationary points") {
  const Equilibrium eq = solve_product(unit_target());
  CHECK(eq.budget_domain == BudgetDomain::D1);
  CHECK(eq.lambda == 0.0);
  CHECK(eq.rho == 0.0);
  CHECK(eq.k_attacker == 1);
  CHECK(eq.k_defender == 1);
  CHECK(eq.alloc.x[0] == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-9));
  CHECK(eq.alloc.y[0] == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(kkt_residual(unit_target(), eq) <= 1e-6);
}

TEST_CASE("priced-out instance yields the empty equilibrium") {
  const GameSpec spec = unit_target(1.2, 0.2);
  const Equilibrium eq = solve_product(spec);
  CHECK(eq.k_attacker == 0);
  CHECK(eq.k_defender == 0);
  CHECK(eq.utility_attacker == 0.0);
  CHECK(eq.utility_defender == 0.0);
  CHECK(kkt_residual(spec, eq) == 0.0);
}

TEST_CASE("two targets under a constant ineffectiveness ratio") {
  auto spec = make_product_spec({1.0, 0.8}, 0.3, 0.2, 10.0, 10.0,
                                EfficiencyFunction::exp_attack(),
                                EfficiencyFunction::exp_g(1.0));
  const Equilibrium eq = solve_product(spec);
  CHECK(eq.k_attacker == 2);
  CHECK(eq.k_defender == 2);
  // the attack level is weight-independent here; the defence is not
  CHECK(eq.alloc.x[0] == doctest::Approx(eq.alloc.x[1]).epsilon(1e-8));
  CHECK(eq.alloc.x[0] == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-8));
  CHECK(eq.alloc.y[0] > eq.alloc.y[1] + 1e-6);
  CHECK(eq.alloc.y[1] == doctest::Approx(std::log(1.6)).epsilon(1e-8));
  const auto rep = epsilon_nash_check(spec, eq);
  CHECK(rep.eps_attacker <= 1e-4 * (1.0 + std::abs(eq.utility_attacker)));
  CHECK(rep.eps_defender <= 1e-4 * (1.0 + std::abs(eq.utility_defender)));
}

TEST_CASE("attacker-constrained solve binds the budget") {
  const GameSpec spec = unit_target(0.3, 0.2, 0.3, 1.0);
  const Equilibrium eq = solve_product(spec);
  CHECK(eq.budget_domain == BudgetDomain::D2);
  CHECK(eq.alloc.x[0] == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(eq.rho == 0.0);
  // the shadow price follows from the stationarity equality at x = 0.3
  const double y_star = -std::log(0.2 / (1.0 - std::exp(-0.3)));
  const double lambda_star = std::exp(-0.3) * std::exp(-y_star) - 0.3;
  CHECK(eq.lambda == doctest::Approx(lambda_star).epsilon(1e-7));
  CHECK(eq.alloc.y[0] == doctest::Approx(y_star).epsilon(1e-7));
  CHECK(kkt_residual(spec, eq) <= 1e-6);
}

TEST_CASE("doubly-constrained solve matches the closed-form duals") {
  const GameSpec spec = unit_target(0.3, 0.2, 0.4, 0.2);
  const Equilibrium eq = solve_product(spec);
  CHECK(eq.budget_domain == BudgetDomain::D4);
  // with one target both budgets bind at (0.4, 0.2) and the duals follow
  CHECK(eq.alloc.x[0] == doctest::Approx(0.4).epsilon(1e-8));
  CHECK(eq.alloc.y[0] == doctest::Approx(0.2).epsilon(1e-8));
  const double lam = std::exp(-0.4) * std::exp(-0.2) - 0.3;
  const double rho = (1.0 - std::exp(-0.4)) * std::exp(-0.2) - 0.2;
  CHECK(eq.lambda == doctest::Approx(lam).epsilon(1e-6));
  CHECK(eq.rho == doctest::Approx(rho).epsilon(1e-6));
  CHECK(kkt_residual(spec, eq) <= 1e-6);
}

TEST_CASE("residual reacts to perturbations") {
  const GameSpec spec = unit_target();
  Equilibrium eq = solve_product(spec);
  CHECK(kkt_residual(spec, eq) <= 1e-6);
  eq.alloc.x[0] += 0.1;
  CHECK(kkt_residual(spec, eq) >= 0.01);
}

TEST_CASE("implicit dual curves are strictly monotone in opposite directions") {
  // Rebuild the two curves from public demand sums on a two-target
  // doubly-constrained instance and sample them across the bracket.
  auto spec = make_product_spec({1.0, 0.8}, 0.25, 0.15, 0.6, 0.4,
                                EfficiencyFunction::exp_attack(),
                                EfficiencyFunction::inv_g(1.0));
  REQUIRE(classify_budget_domain(spec).domain == BudgetDomain::D4);

  auto rho_binding_attacker = [&](double lam) {
    auto gap = [&](double r) {
      return total_demand({lam, r}, 2, 2, spec).first - spec.budget_attacker;
    };
    if (gap(0.0) > 0.0) return std::numeric_limits<double>::quiet_NaN();
    double hi = 1.0;
    while (gap(hi) < 0.0 && hi < 64.0) hi *= 2.0;
    return detail::bisect(gap, 0.0, hi, gap(0.0), 1e-12, 400);
  };
  auto rho_binding_defender = [&](double lam) {
    auto gap = [&](double r) {
      return total_demand({lam, r}, 2, 2, spec).second - spec.budget_defender;
    };
    if (gap(0.0) < 0.0) return std::numeric_limits<double>::quiet_NaN();
    double hi = 1.0;
    while (gap(hi) > 0.0 && hi < 64.0) hi *= 2.0;
    return detail::bisect_decreasing(gap, 0.0, hi, 1e-12, 400);
  };

  // Locate the window where both curves exist, then sample inside it.
  const Equilibrium eq = solve_product(spec);
  double lo = eq.lambda, hi = eq.lambda;
  const double probe_step = eq.lambda / 256.0;
  while (lo - probe_step > 0.0 &&
         !std::isnan(rho_binding_attacker(lo - probe_step)) &&
         !std::isnan(rho_binding_defender(lo - probe_step)))
    lo -= probe_step;
  while (!std::isnan(rho_binding_attacker(hi + probe_step)) &&
         !std::isnan(rho_binding_defender(hi + probe_step)))
    hi += probe_step;
  REQUIRE(hi > lo);

  std::vector<double> c1, c2;
  for (int s = 0; s < 50; ++s) {
    const double lam = lo + (hi - lo) * (0.01 + 0.98 * s / 49.0);
    const double r1 = rho_binding_attacker(lam);
    const double r2 = rho_binding_defender(lam);
    if (std::isnan(r1) || std::isnan(r2)) continue;
    c1.push_back(r1);
    c2.push_back(r2);
  }
  REQUIRE(c1.size() >= 45);
  bool c1_up = true, c1_down = true, c2_up = true, c2_down = true;
  for (size_t i = 1; i < c1.size(); ++i) {
    c1_up &= c1[i] > c1[i - 1];
    c1_down &= c1[i] < c1[i - 1];
    c2_up &= c2[i] > c2[i - 1];
    c2_down &= c2[i] < c2[i - 1];
  }
  CHECK((c1_up || c1_down));
  CHECK((c2_up || c2_down));
  CHECK(c1_up != c2_up);  // opposite directions
}

TEST_CASE("attacker gains from extra budget while the defender is short") {
  // Defender pinned below his needs; growing the attack budget through
  // the doubly-short region into the defender-short region never hurts.
  auto base = make_product_spec({1.0, 0.8}, 0.25, 0.15, 0.25, 0.35,
                                EfficiencyFunction::exp_attack(),
                                EfficiencyFunction::exp_g(1.0));
  double prev = -1e9;
  bool saw_defender_short = false;
  for (int s = 0; s < 10; ++s) {
    GameSpec spec = base;
    spec.budget_attacker = 0.25 + 0.25 * s;
    const Equilibrium eq = solve_product(spec);
    saw_defender_short |= eq.budget_domain == BudgetDomain::D3;
    CHECK(eq.utility_attacker >= prev - 1e-9);
    prev = eq.utility_attacker;
  }
  CHECK(saw_defender_short);
}

TEST_CASE("free resources are spent in full") {
  // With a zero unit price a player has no reason to hold anything back.
  auto spec = make_product_spec({1.0, 0.8}, 0.0, 0.2, 1.0, 1.0,
                                EfficiencyFunction::exp_attack(),
                                EfficiencyFunction::exp_g(1.0));
  const Equilibrium eq = solve_product(spec);
  CHECK(eq.budget_domain == BudgetDomain::D4);
  CHECK(eq.alloc.x[0] + eq.alloc.x[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eq.lambda > 0.0);
  CHECK(kkt_residual(spec, eq) <= 1e-6);

  spec.cost_attacker = 0.3;
  spec.cost_defender = 0.0;
  const Equilibrium eq2 = solve_product(spec);
  CHECK(eq2.alloc.y[0] + eq2.alloc.y[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eq2.rho > 0.0);
  CHECK(kkt_residual(spec, eq2) <= 1e-6);
}

TEST_CASE("degenerate free defence with a saturating family is refused") {
  // A costless defender with a complement hitting zero at finite depth
  // leaves a continuum of equilibria; the unique-solution contract
  // surfaces that instead of picking one arbitrarily.
  auto spec = make_product_spec({1.0}, 0.3, 0.0, 1.0, 1.0,
                                EfficiencyFunction::exp_attack(),
                                EfficiencyFunction::quad_g(0.5));
  CHECK_THROWS_AS(solve_product(spec), NoEquilibriumFound);
}

TEST_CASE("random instances keep the structural properties") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int domains_seen[4] = {0, 0, 0, 0};
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(u01(rng) * 5.0);
    auto weights = testutil::descending_weights(rng, n, 0.4, 2.5);
    EfficiencyFunction attack = u01(rng) < 0.5
                                    ? EfficiencyFunction::exp_attack()
                                    : EfficiencyFunction::exp_attack_pow(0.6 + u01(rng));
    EfficiencyFunction defence;
    const double pick = u01(rng);
    if (pick < 0.34)
      defence = EfficiencyFunction::inv_g(0.6 + u01(rng));
    else if (pick < 0.67)
      defence = EfficiencyFunction::exp_g(0.6 + u01(rng));
    else
      defence = EfficiencyFunction::quad_g(0.4 + 0.4 * u01(rng));
    const double c = 0.05 + 0.3 * u01(rng);
    const double ch = 0.05 + 0.25 * u01(rng);
    auto spec = make_product_spec(weights, c, ch, 0.1 + 2.5 * u01(rng),
                                  0.1 + 2.0 * u01(rng), attack, defence);
    CAPTURE(trial);
    const Equilibrium eq = solve_product(spec);
    domains_seen[static_cast<int>(eq.budget_domain)]++;

    CHECK(kkt_residual(spec, eq) <= 1e-6);
    CHECK(allocation_feasible(spec, eq.alloc));
    // prefix supports with the attacked set covering the defended one
    CHECK(eq.k_attacker >= eq.k_defender);
    for (int i = 0; i < n; ++i) {
      CHECK((eq.alloc.x[i] > tol::kSupport) == (i < eq.k_attacker));
      CHECK((eq.alloc.y[i] > tol::kSupport) == (i < eq.k_defender));
    }
    // defence follows the weights; attack on the undefended tail too
    for (int i = 0; i + 1 < eq.k_defender; ++i)
      CHECK(eq.alloc.y[i] >= eq.alloc.y[i + 1] - 1e-8);
    for (int i = eq.k_defender; i + 1 < eq.k_attacker; ++i)
      CHECK(eq.alloc.x[i] >= eq.alloc.x[i + 1] - 1e-8);
    // within the defended prefix, ordering matches the ratio class
    const RidClass cls = rid_class(spec.defence_eff);
    for (int i = 0; i + 1 < eq.k_defender; ++i) {
      const double xi = eq.alloc.x[i], xj = eq.alloc.x[i + 1];
      if (cls == RidClass::Increasing) CHECK(xi > xj - 1e-9);
      if (cls == RidClass::Constant) CHECK(std::abs(xi - xj) <= 1e-6 * (1.0 + xi));
      if (cls == RidClass::Decreasing) CHECK(xi < xj + 1e-9);
    }
    const auto rep = epsilon_nash_check(spec, eq);
    CHECK(rep.eps_attacker <= 1e-4 * (1.0 + std::abs(eq.utility_attacker)));
    CHECK(rep.eps_defender <= 1e-4 * (1.0 + std::abs(eq.utility_defender)));
  }
  // the corpus exercised every budget domain
  CHECK(domains_seen[0] > 0);
  CHECK(domains_seen[1] > 0);
  CHECK(domains_seen[2] > 0);
  CHECK(domains_seen[3] > 0);
}
