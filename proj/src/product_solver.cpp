#include "secgame/product_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "secgame/linear_solver.hpp"
#include "secgame/proportion_solver.hpp"
#include "secgame/root_find.hpp"

namespace secgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ctx {
  const GameSpec& spec;
  double gt0;       // defence inefficiency at zero (= 1)
  double gt0_slope; // its derivative at zero (< 0)
  double f0_slope;  // attack slope at zero
};

Ctx make_ctx(const GameSpec& spec) {
  return Ctx{spec, spec.defence_eff.value(0.0), spec.defence_eff.deriv_at_zero(),
             spec.attack_eff.deriv_at_zero()};
}

// Largest shadow price at which any target is still worth attacking.
double lambda_cap(const Ctx& c) {
  return c.spec.weights.front() * c.f0_slope * c.gt0 - c.spec.cost_attacker;
}

double undefended_x(const Ctx& c, int i, double lambda) {
  const double price = c.spec.cost_attacker + lambda;
  if (price <= 0.0) return kInf;  // zero-cost attacker saturates
  return c.spec.attack_eff.inv_deriv(price / (c.spec.weights[i] * c.gt0));
}

}  // namespace

std::pair<double, double> per_target_point(int i, DualPair duals, const GameSpec& spec,
                                           bool defended) {
  if (i < 0 || i >= spec.n) throw DomainError("target index out of range");
  const Ctx c = make_ctx(spec);
  const double w = spec.weights[i];
  const double price_a = spec.cost_attacker + duals.lambda;
  const double price_d = spec.cost_defender + duals.rho;

  const double x_cap = undefended_x(c, i, duals.lambda);
  if (!defended || x_cap == 0.0) return {x_cap, 0.0};
  if (std::isinf(x_cap)) {
    // Zero-priced attacker: his efficiency saturates at 1, the defender
    // answers the saturated attack.
    if (price_d <= 0.0) return {kInf, spec.defence_eff.domain_upper.value_or(kInf)};
    return {kInf, spec.defence_eff.inv_deriv(-price_d / w)};
  }
  if (price_d <= 0.0) {
    // Zero-priced defender suppresses the target outright; the attacker's
    // marginal vanishes with the inefficiency.
    return {0.0, spec.defence_eff.domain_upper.value_or(kInf)};
  }

  auto defender_reply = [&](double x) -> double {
    const double fx = spec.attack_eff.value(x);
    if (fx <= 0.0) return 0.0;
    return spec.defence_eff.inv_deriv(-price_d / (w * fx));
  };
  // x -> hA(price_a / (w * gtilde(y(x)))) falls as x grows, so the gap to
  // the identity has one sign change on [0, x_cap].
  auto gap = [&](double x) -> double {
    const double gt = spec.defence_eff.value(defender_reply(x));
    if (gt <= 0.0) return -x;  // fully suppressed: attacker walks away
    return spec.attack_eff.inv_deriv(price_a / (w * gt)) - x;
  };

  const double width = std::max(1e-14, 1e-13 * x_cap);
  const double x = detail::bisect_decreasing(gap, 0.0, x_cap, width, tol::kInnerIterCap);
  return {x, defender_reply(x)};
}

std::pair<double, double> total_demand(DualPair duals, int k_a, int k_d,
                                       const GameSpec& spec) {
  if (k_d < 0 || k_d > k_a || k_a > spec.n)
    throw DomainError("support sizes must satisfy 0 <= k_d <= k_a <= N");
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < k_a; ++i) {
    const auto [x, y] = per_target_point(i, duals, spec, i < k_d);
    sx += x;
    sy += y;
  }
  return {sx, sy};
}

namespace {

// Demand along one dual with the other fixed at zero, full support.
double attacker_demand(const GameSpec& spec, double lambda, double rho) {
  return total_demand({lambda, rho}, spec.n, spec.n, spec).first;
}
double defender_demand(const GameSpec& spec, double lambda, double rho) {
  return total_demand({lambda, rho}, spec.n, spec.n, spec).second;
}

// Largest shadow price at which any target is still worth defending,
// given the attacker plays his unconstrained-at-lambda allocation.
double rho_cap(const Ctx& c, double lambda) {
  double m = 0.0;
  for (int i = 0; i < c.spec.n; ++i) {
    const double x = undefended_x(c, i, lambda);
    const double fx = std::isinf(x) ? 1.0 : c.spec.attack_eff.value(x);
    m = std::max(m, -c.spec.weights[i] * fx * c.gt0_slope - c.spec.cost_defender);
  }
  return m;
}

}  // namespace

BudgetDomainReport classify_budget_domain(const GameSpec& spec) {
  if (spec.model != BreachModel::ProductForm)
    throw DomainError(
        "budget-domain classification here covers the product form; the "
        "proportion and matrix games carry their own");
  const Ctx c = make_ctx(spec);
  BudgetDomainReport rep;
  const auto [x_suf, y_suf] = total_demand({0.0, 0.0}, spec.n, spec.n, spec);
  rep.x_suf = x_suf;
  rep.y_suf = y_suf;
  if (spec.budget_attacker >= x_suf && spec.budget_defender >= y_suf) {
    rep.domain = BudgetDomain::D1;
    return rep;
  }
  if (spec.budget_attacker < x_suf) {
    // Attacker short: price him to his budget with the defender slack,
    // then read off what the defender would spend.
    const double hi = std::max(lambda_cap(c), tol::kDualWidth);
    const double lam = detail::bisect_decreasing(
        [&](double l) { return attacker_demand(spec, l, 0.0) - spec.budget_attacker; },
        0.0, hi);
    rep.y_hat_suf = defender_demand(spec, lam, 0.0);
    if (spec.budget_defender >= *rep.y_hat_suf) {
      rep.domain = BudgetDomain::D2;
      return rep;
    }
  }
  if (spec.budget_defender < y_suf) {
    const double hi = std::max(rho_cap(c, 0.0), tol::kDualWidth);
    const double rho = detail::bisect_decreasing(
        [&](double r) { return defender_demand(spec, 0.0, r) - spec.budget_defender; },
        0.0, hi);
    rep.x_hat_suf = attacker_demand(spec, 0.0, rho);
    if (spec.budget_attacker >= *rep.x_hat_suf) {
      rep.domain = BudgetDomain::D3;
      return rep;
    }
  }
  rep.domain = BudgetDomain::D4;
  return rep;
}

namespace {

struct Candidate {
  DualPair duals;
  std::vector<double> x, y;
  bool ok = false;
};

// Allocation at the duals for an assumed support pair, plus the
// acceptance tests: strict positivity on the support, the stationarity
// inequalities on excluded targets, and budget consistency.
Candidate evaluate_support(const GameSpec& spec, DualPair duals, int k_a, int k_d,
                           bool attacker_binding, bool defender_binding) {
  const Ctx c = make_ctx(spec);
  Candidate cand;
  cand.duals = duals;
  cand.x.assign(spec.n, 0.0);
  cand.y.assign(spec.n, 0.0);
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < k_a; ++i) {
    const auto [x, y] = per_target_point(i, duals, spec, i < k_d);
    cand.x[i] = x;
    cand.y[i] = y;
    sx += x;
    sy += y;
  }
  for (int i = 0; i < k_a; ++i)
    if (cand.x[i] <= tol::kSupport) return cand;
  for (int i = 0; i < k_d; ++i)
    if (cand.y[i] <= tol::kSupport) return cand;

  const double slack = 1e-9;
  for (int i = k_a; i < spec.n; ++i) {
    const double marginal = spec.weights[i] * c.f0_slope * c.gt0 - spec.cost_attacker;
    if (marginal > duals.lambda + slack) return cand;
  }
  for (int i = k_d; i < spec.n; ++i) {
    const double fx = spec.attack_eff.value(cand.x[i]);
    const double marginal = -spec.weights[i] * fx * c.gt0_slope - spec.cost_defender;
    if (marginal > duals.rho + slack) return cand;
  }

  const double bt = 0.1 * tol::kEquilibrium;
  if (attacker_binding) {
    if (std::abs(sx - spec.budget_attacker) > bt * (1.0 + spec.budget_attacker))
      return cand;
  } else if (sx > spec.budget_attacker + bt * (1.0 + spec.budget_attacker)) {
    return cand;
  }
  if (defender_binding) {
    if (std::abs(sy - spec.budget_defender) > bt * (1.0 + spec.budget_defender))
      return cand;
  } else if (sy > spec.budget_defender + bt * (1.0 + spec.budget_defender)) {
    return cand;
  }
  cand.ok = true;
  return cand;
}

Equilibrium finish(const GameSpec& spec, const Candidate& cand, int k_a, int k_d,
                   BudgetDomain domain) {
  Equilibrium eq;
  eq.alloc.x = cand.x;
  eq.alloc.y = cand.y;
  eq.lambda = cand.duals.lambda;
  eq.rho = cand.duals.rho;
  eq.k_attacker = k_a;
  eq.k_defender = k_d;
  eq.budget_domain = domain;
  const auto [ua, ud] = utilities(spec, eq.alloc);
  eq.utility_attacker = ua;
  eq.utility_defender = ud;
  return eq;
}

// One-dual search (attacker or defender budget binding, the other slack).
std::optional<Candidate> solve_single_dual(const GameSpec& spec, int k_a, int k_d,
                                           bool attacker_side) {
  const Ctx c = make_ctx(spec);
  if (attacker_side) {
    auto demand = [&](double l) {
      return total_demand({l, 0.0}, k_a, k_d, spec).first - spec.budget_attacker;
    };
    const double hi = std::max(lambda_cap(c), tol::kDualWidth);
    if (demand(0.0) < 0.0) return std::nullopt;  // support cannot absorb the budget
    const double lam = detail::bisect_decreasing(demand, 0.0, hi);
    Candidate cand = evaluate_support(spec, {lam, 0.0}, k_a, k_d, true, false);
    if (cand.ok) return cand;
    return std::nullopt;
  }
  auto demand = [&](double r) {
    return total_demand({0.0, r}, k_a, k_d, spec).second - spec.budget_defender;
  };
  const double hi = std::max(rho_cap(c, 0.0), tol::kDualWidth);
  if (demand(0.0) < 0.0) return std::nullopt;
  const double rho = detail::bisect_decreasing(demand, 0.0, hi);
  Candidate cand = evaluate_support(spec, {0.0, rho}, k_a, k_d, false, true);
  if (cand.ok) return cand;
  return std::nullopt;
}

// Both budgets binding: intersect the two implicit curves rho(lambda)
// obtained from each budget equality. They are strictly monotone in
// opposite directions; the direction is probed rather than assumed.
std::optional<Candidate> solve_both_duals(const GameSpec& spec, int k_a, int k_d) {
  const Ctx c = make_ctx(spec);
  const double lam_hi = lambda_cap(c);
  if (lam_hi <= 0.0) return std::nullopt;

  auto demand = [&](double l, double r) { return total_demand({l, r}, k_a, k_d, spec); };

  // rho making the attacker budget bind at this lambda (demand rises in rho).
  auto rho_from_attacker = [&](double l) -> double {
    const double cap = std::max(rho_cap(c, l), tol::kDualWidth);
    const double at0 = demand(l, 0.0).first - spec.budget_attacker;
    if (at0 > 0.0) return -kInf;  // over-demand even with the defence priced out of reach
    if (demand(l, cap).first - spec.budget_attacker < 0.0) return kInf;
    return detail::bisect(
        [&](double r) { return demand(l, r).first - spec.budget_attacker; }, 0.0, cap,
        at0, tol::kDualWidth, tol::kDualIters);
  };
  // rho making the defender budget bind (demand falls in rho).
  auto rho_from_defender = [&](double l) -> double {
    const double cap = std::max(rho_cap(c, l), tol::kDualWidth);
    const double at0 = demand(l, 0.0).second - spec.budget_defender;
    if (at0 < 0.0) return -kInf;  // defender cannot even use his budget
    return detail::bisect_decreasing(
        [&](double r) { return demand(l, r).second - spec.budget_defender; }, 0.0, cap);
  };

  auto curve_gap = [&](double l) -> double {
    const double r1 = rho_from_attacker(l);
    const double r2 = rho_from_defender(l);
    if (std::isinf(r1) && std::isinf(r2) && r1 == r2)
      return std::numeric_limits<double>::quiet_NaN();  // both curves undefined here
    return r1 - r2;
  };

  // Scan for a sign change of the curve gap, then bisect inside it.
  constexpr int kScan = 33;
  double prev_l = 0.0;
  double prev_g = curve_gap(0.0);
  for (int s = 1; s <= kScan; ++s) {
    const double l = lam_hi * s / kScan;
    const double g = curve_gap(l);
    if (std::isnan(g)) continue;
    if (std::isnan(prev_g)) {
      prev_l = l;
      prev_g = g;
      continue;
    }
    if ((prev_g <= 0.0 && g >= 0.0) || (prev_g >= 0.0 && g <= 0.0)) {
      const double lam = detail::bisect(curve_gap, prev_l, l, prev_g, tol::kDualWidth,
                                        tol::kDualIters);
      const double rho = rho_from_defender(lam);
      if (std::isfinite(rho) && rho >= 0.0) {
        Candidate cand = evaluate_support(spec, {lam, rho}, k_a, k_d, true, true);
        if (cand.ok) return cand;
      }
    }
    prev_l = l;
    prev_g = g;
  }
  return std::nullopt;
}

}  // namespace

Equilibrium solve_product(const GameSpec& spec) {
  require_valid(spec);
  if (spec.model != BreachModel::ProductForm)
    throw DomainError("solve_product expects a product-form instance");

  const BudgetDomainReport rep = classify_budget_domain(spec);

  if (rep.domain == BudgetDomain::D1) {
    Candidate cand;
    cand.duals = {0.0, 0.0};
    cand.x.assign(spec.n, 0.0);
    cand.y.assign(spec.n, 0.0);
    for (int i = 0; i < spec.n; ++i) {
      const auto [x, y] = per_target_point(i, {0.0, 0.0}, spec, true);
      cand.x[i] = x;
      cand.y[i] = y;
    }
    int k_a = 0, k_d = 0;
    for (int i = 0; i < spec.n; ++i) {
      if (cand.x[i] > tol::kSupport) k_a = i + 1;
      if (cand.y[i] > tol::kSupport) k_d = i + 1;
    }
    return finish(spec, cand, k_a, k_d, BudgetDomain::D1);
  }

  // Support enumeration, widest first: attacked prefix descending, then
  // the defended prefix descending below it.
  for (int k_a = spec.n; k_a >= 1; --k_a) {
    for (int k_d = k_a; k_d >= 0; --k_d) {
      std::optional<Candidate> cand;
      switch (rep.domain) {
        case BudgetDomain::D2:
          cand = solve_single_dual(spec, k_a, k_d, /*attacker_side=*/true);
          break;
        case BudgetDomain::D3:
          cand = solve_single_dual(spec, k_a, k_d, /*attacker_side=*/false);
          break;
        default:
          if (k_d >= 1) cand = solve_both_duals(spec, k_a, k_d);
          break;
      }
      if (cand) return finish(spec, *cand, k_a, k_d, rep.domain);
    }
  }
  throw NoEquilibriumFound("no support pair satisfies the stationarity system");
}

double kkt_residual_product(const GameSpec& spec, const Equilibrium& eq) {
  double res = 0.0;
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    const double x = eq.alloc.x[i];
    const double y = eq.alloc.y[i];
    sx += x;
    sy += y;
    res = std::max(res, std::max(0.0, -x));
    res = std::max(res, std::max(0.0, -y));
    const double w = spec.weights[i];
    const double gt = spec.defence_eff.value(std::max(y, 0.0));
    const double gt_p = spec.defence_eff.deriv(std::max(y, 0.0));
    const double fx = spec.attack_eff.value(std::max(x, 0.0));
    const double attack_marginal =
        w * spec.attack_eff.deriv(std::max(x, 0.0)) * gt - spec.cost_attacker;
    const double defend_marginal = -w * fx * gt_p - spec.cost_defender;
    if (x > tol::kSupport)
      res = std::max(res, std::abs(attack_marginal - eq.lambda));
    else
      res = std::max(res, attack_marginal - eq.lambda);
    if (y > tol::kSupport)
      res = std::max(res, std::abs(defend_marginal - eq.rho));
    else
      res = std::max(res, defend_marginal - eq.rho);
  }
  const double norm_a = 1.0 + spec.budget_attacker;
  const double norm_d = 1.0 + spec.budget_defender;
  res = std::max(res, std::max(0.0, sx - spec.budget_attacker) / norm_a);
  res = std::max(res, std::max(0.0, sy - spec.budget_defender) / norm_d);
  res = std::max(res, std::abs(eq.lambda * (spec.budget_attacker - sx)) / norm_a);
  res = std::max(res, std::abs(eq.rho * (spec.budget_defender - sy)) / norm_d);
  res = std::max(res, -eq.lambda);
  res = std::max(res, -eq.rho);
  return res;
}

double kkt_residual(const GameSpec& spec, const Equilibrium& eq) {
  switch (spec.model) {
    case BreachModel::ProductForm:
      return kkt_residual_product(spec, eq);
    case BreachModel::LinearMatrix:
      return kkt_residual_linear(spec, eq);
    case BreachModel::ProportionForm:
      return kkt_residual_proportion(spec, eq);
  }
  throw DomainError("unknown breaching model");
}

}  // namespace secgame
