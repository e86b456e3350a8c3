#include "secgame/proportion_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "secgame/root_find.hpp"

namespace secgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool common_power(const GameSpec& spec) {
  return spec.attack_eff.family == EffFamily::Power &&
         spec.defence_eff.family == EffFamily::Power &&
         spec.attack_eff.a == spec.defence_eff.a;
}

// Closed form for f(x) = x^a, g(y) = y^a: the stationarity pair fixes the
// allocation ratio at the price ratio, then the level explicitly.
std::pair<double, double> power_point(double w, double a, double price_a,
                                      double price_d) {
  const double t = price_a / price_d;
  const double ta = std::pow(t, a);
  const double x = w * a * ta / (price_a * (1.0 + ta) * (1.0 + ta));
  return {x, t * x};
}

struct Marginals {
  double attack;  // w f'(x) g(y) / (f+g)^2
  double defend;  // w f(x) g'(y) / (f+g)^2
};

Marginals marginals_at(const GameSpec& spec, int i, double x, double y) {
  const double w = spec.weights[i];
  const double f = spec.attack_eff.value(x);
  const double g = spec.defence_eff.g_value(y);
  const double s = f + g;
  const double s2 = s * s;
  return {w * spec.attack_eff.deriv(x) * g / s2,
          w * f * spec.defence_eff.g_deriv(y) / s2};
}

// Effective exponent of a concave map near a reference point, used only
// to seed the Newton iteration.
double elasticity(const EfficiencyFunction& fn, bool as_g, double z0) {
  const double v = as_g ? fn.g_value(z0) : fn.value(z0);
  const double d = as_g ? fn.g_deriv(z0) : fn.deriv(z0);
  if (v <= 0.0 || d <= 0.0) return 1.0;
  return std::clamp(z0 * d / v, 0.05, 1.0);
}

std::pair<double, double> newton_point(const GameSpec& spec, int i, double price_a,
                                       double price_d) {
  const double w = spec.weights[i];
  const auto& fe = spec.attack_eff;
  const auto& ge = spec.defence_eff;
  const double y_hi_cap =
      ge.domain_upper ? *ge.domain_upper * (1.0 - 1e-9) : kInf;

  double z0 = 1.0;
  if (ge.domain_upper) z0 = std::min(z0, 0.5 * *ge.domain_upper);
  const double a_init = 0.5 * (elasticity(fe, false, z0) + elasticity(ge, true, z0));
  auto [x, y] = power_point(w, a_init, price_a, price_d);
  if (!(x > 0.0)) x = 1e-3;
  y = std::min(std::max(y, 1e-6), y_hi_cap == kInf ? y : 0.5 * y_hi_cap);

  auto residual = [&](double xx, double yy) {
    const Marginals m = marginals_at(spec, i, xx, yy);
    return std::pair{m.attack - price_a, m.defend - price_d};
  };

  auto norm = [](std::pair<double, double> r) {
    return std::abs(r.first) + std::abs(r.second);
  };

  const double accept = 1e-12 * (1.0 + price_a + price_d);
  auto r = residual(x, y);
  bool converged = norm(r) <= accept;
  for (int it = 0; it < 100 && !converged; ++it) {
    const double f = fe.value(x), fp = fe.deriv(x);
    const double g = ge.g_value(y), gp = ge.g_deriv(y);
    const double s = f + g;
    // Finite-difference second derivatives keep this generic across
    // families; the step is small against the current scale.
    const double hx = 1e-7 * (1.0 + x);
    const double hy = 1e-7 * (1.0 + y);
    const double fpp = (fe.deriv(x + hx) - fe.deriv(std::max(x - hx, 0.0))) /
                       (x - hx > 0.0 ? 2.0 * hx : hx);
    const double y_minus = std::max(y - hy, 0.0);
    const double y_plus = std::min(y + hy, y_hi_cap);
    const double gpp = (ge.g_deriv(y_plus) - ge.g_deriv(y_minus)) / (y_plus - y_minus);
    // Jacobian of the scaled system G = w*num - price*(f+g)^2.
    const double j11 = w * fpp * g - 2.0 * price_a * s * fp;
    const double j12 = w * fp * gp - 2.0 * price_a * s * gp;
    const double j21 = w * fp * gp - 2.0 * price_d * s * fp;
    const double j22 = w * f * gpp - 2.0 * price_d * s * gp;
    const double g1 = r.first * s * s;
    const double g2 = r.second * s * s;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) break;
    double dx = (-g1 * j22 + g2 * j12) / det;
    double dy = (-g2 * j11 + g1 * j21) / det;
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h < 40; ++h) {
      const double nx = x + step * dx;
      const double ny = y + step * dy;
      if (nx > 0.0 && ny > 0.0 && ny < y_hi_cap) {
        auto nr = residual(nx, ny);
        if (norm(nr) < norm(r)) {
          x = nx;
          y = ny;
          r = nr;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;
    converged = norm(r) <= accept;
  }
  if (converged) return {x, y};

  // Fallback: eliminate y through the defender condition (its marginal
  // falls strictly in y), then bracket the attacker condition in x.
  auto defender_reply = [&](double xx) -> double {
    auto dres = [&](double yy) { return marginals_at(spec, i, xx, yy).defend - price_d; };
    double lo = 1e-14;
    if (dres(lo) <= 0.0) return lo;
    double hi = std::min(1.0, y_hi_cap);
    int grow = 0;
    while (hi < y_hi_cap && dres(hi) > 0.0 && grow++ < 200)
      hi = std::min(hi * 2.0, y_hi_cap);
    return detail::bisect_decreasing(dres, lo, hi, 1e-14, tol::kInnerIterCap);
  };
  auto attack_gap = [&](double xx) {
    return marginals_at(spec, i, xx, defender_reply(xx)).attack - price_a;
  };
  double lo = 1e-12, hi = 1e-12;
  double glo = attack_gap(lo);
  for (int s = 0; s < 400; ++s) {
    hi = hi * 2.0;
    const double ghi = attack_gap(hi);
    if ((glo >= 0.0 && ghi <= 0.0) || (glo <= 0.0 && ghi >= 0.0)) {
      x = detail::bisect(attack_gap, lo, hi, glo, 1e-14, tol::kInnerIterCap);
      y = defender_reply(x);
      r = residual(x, y);
      if (norm(r) <= 1e-8 * (1.0 + price_a + price_d)) return {x, y};
      break;
    }
    lo = hi;
    glo = ghi;
  }
  throw ConvergenceError("per-target stationarity system did not converge");
}

std::pair<double, double> target_point(const GameSpec& spec, int i, DualPair duals,
                                       bool use_closed_forms = true) {
  const double price_a = spec.cost_attacker + duals.lambda;
  const double price_d = spec.cost_defender + duals.rho;
  if (price_a <= 0.0 || price_d <= 0.0) return {kInf, kInf};  // zero-priced side saturates
  if (use_closed_forms && common_power(spec))
    return power_point(spec.weights[i], spec.attack_eff.a, price_a, price_d);
  return newton_point(spec, i, price_a, price_d);
}

std::pair<double, double> demand(const GameSpec& spec, DualPair duals) {
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    const auto [x, y] = target_point(spec, i, duals);
    sx += x;
    sy += y;
  }
  return {sx, sy};
}

// Bisection on one dual with the other fixed, growing the bracket until
// the budget is reachable.
double bind_attacker(const GameSpec& spec, double rho) {
  auto gap = [&](double l) {
    return demand(spec, {l, rho}).first - spec.budget_attacker;
  };
  double hi = std::max(1.0, spec.cost_attacker + spec.cost_defender);
  int grow = 0;
  while (gap(hi) > 0.0) {
    hi *= 2.0;
    if (++grow > 120) throw ConvergenceError("attacker dual bracket did not close");
  }
  return detail::bisect_decreasing(gap, 0.0, hi);
}

double bind_defender(const GameSpec& spec, double lambda) {
  auto gap = [&](double r) {
    return demand(spec, {lambda, r}).second - spec.budget_defender;
  };
  double hi = std::max(1.0, spec.cost_attacker + spec.cost_defender);
  int grow = 0;
  while (gap(hi) > 0.0) {
    hi *= 2.0;
    if (++grow > 120) throw ConvergenceError("defender dual bracket did not close");
  }
  return detail::bisect_decreasing(gap, 0.0, hi);
}

Equilibrium finish(const GameSpec& spec, DualPair duals, BudgetDomain domain) {
  Equilibrium eq;
  eq.alloc.x.assign(spec.n, 0.0);
  eq.alloc.y.assign(spec.n, 0.0);
  for (int i = 0; i < spec.n; ++i) {
    const auto [x, y] = target_point(spec, i, duals);
    eq.alloc.x[i] = x;
    eq.alloc.y[i] = y;
  }
  eq.lambda = duals.lambda;
  eq.rho = duals.rho;
  eq.k_attacker = spec.n;
  eq.k_defender = spec.n;
  eq.budget_domain = domain;
  const auto [ua, ud] = utilities(spec, eq.alloc);
  eq.utility_attacker = ua;
  eq.utility_defender = ud;
  return eq;
}

}  // namespace

std::pair<double, double> per_target_solve_proportion(int i, DualPair duals,
                                                      const GameSpec& spec,
                                                      bool use_closed_forms) {
  if (i < 0 || i >= spec.n) throw DomainError("target index out of range");
  if (spec.model != BreachModel::ProportionForm)
    throw DomainError("per-target proportion solve needs a proportion-form spec");
  return target_point(spec, i, duals, use_closed_forms);
}

BudgetDomainReport classify_budget_domain_proportion(const GameSpec& spec) {
  BudgetDomainReport rep;
  const auto [x_suf, y_suf] = demand(spec, {0.0, 0.0});
  rep.x_suf = x_suf;
  rep.y_suf = y_suf;
  if (spec.budget_attacker >= x_suf && spec.budget_defender >= y_suf) {
    rep.domain = BudgetDomain::D1;
    return rep;
  }
  // A zero-priced side spends without limit, so the branches that leave
  // its shadow price at zero can never apply.
  if (spec.budget_attacker < x_suf && spec.cost_defender > 0.0) {
    const double lam = bind_attacker(spec, 0.0);
    rep.y_hat_suf = demand(spec, {lam, 0.0}).second;
    if (spec.budget_defender >= *rep.y_hat_suf) {
      rep.domain = BudgetDomain::D2;
      return rep;
    }
  }
  if (spec.budget_defender < y_suf && spec.cost_attacker > 0.0) {
    const double rho = bind_defender(spec, 0.0);
    rep.x_hat_suf = demand(spec, {0.0, rho}).first;
    if (spec.budget_attacker >= *rep.x_hat_suf) {
      rep.domain = BudgetDomain::D3;
      return rep;
    }
  }
  rep.domain = BudgetDomain::D4;
  return rep;
}

Equilibrium solve_proportion(const GameSpec& spec) {
  require_valid(spec);
  if (spec.model != BreachModel::ProportionForm)
    throw DomainError("solve_proportion expects a proportion-form instance");

  const BudgetDomainReport rep = classify_budget_domain_proportion(spec);
  switch (rep.domain) {
    case BudgetDomain::D1:
      return finish(spec, {0.0, 0.0}, BudgetDomain::D1);
    case BudgetDomain::D2:
      return finish(spec, {bind_attacker(spec, 0.0), 0.0}, BudgetDomain::D2);
    case BudgetDomain::D3:
      return finish(spec, {0.0, bind_defender(spec, 0.0)}, BudgetDomain::D3);
    case BudgetDomain::D4:
      break;
  }

  if (common_power(spec)) {
    // Everything is spent and allocations follow the weights exactly.
    const double a = spec.attack_eff.a;
    double wsum = 0.0;
    for (double w : spec.weights) wsum += w;
    const double t = spec.budget_defender / spec.budget_attacker;
    const double ta = std::pow(t, a);
    const double denom = (1.0 + ta) * (1.0 + ta);
    const double lambda =
        a * ta * wsum / (spec.budget_attacker * denom) - spec.cost_attacker;
    const double rho =
        a * ta / t * wsum / (spec.budget_attacker * denom) - spec.cost_defender;
    Equilibrium eq;
    eq.alloc.x.assign(spec.n, 0.0);
    eq.alloc.y.assign(spec.n, 0.0);
    for (int i = 0; i < spec.n; ++i) {
      eq.alloc.x[i] = spec.weights[i] * spec.budget_attacker / wsum;
      eq.alloc.y[i] = spec.weights[i] * spec.budget_defender / wsum;
    }
    eq.lambda = std::max(lambda, 0.0);
    eq.rho = std::max(rho, 0.0);
    eq.k_attacker = spec.n;
    eq.k_defender = spec.n;
    eq.budget_domain = BudgetDomain::D4;
    const auto [ua, ud] = utilities(spec, eq.alloc);
    eq.utility_attacker = ua;
    eq.utility_defender = ud;
    return eq;
  }

  // General families: walk the defender's shadow price; at each value the
  // attacker's budget pins his own price, and the defender budget residual
  // selects the crossing.
  auto defender_gap = [&](double rho) {
    const double lam = bind_attacker(spec, rho);
    return demand(spec, {lam, rho}).second - spec.budget_defender;
  };
  double lo = 0.0;
  const double g_lo =
      spec.cost_defender > 0.0 ? defender_gap(0.0) : kInf;  // unpriced: unbounded
  if (g_lo < 0.0)
    throw ConvergenceError("defender budget residual has the wrong sign at zero");
  double hi = std::max(1.0, spec.cost_defender);
  int grow = 0;
  while (defender_gap(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 120) throw ConvergenceError("defender dual bracket did not close");
  }
  const double rho = detail::bisect_decreasing(defender_gap, lo, hi);
  const double lam = bind_attacker(spec, rho);
  return finish(spec, {lam, rho}, BudgetDomain::D4);
}

double kkt_residual_proportion(const GameSpec& spec, const Equilibrium& eq) {
  double res = 0.0;
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    const double x = eq.alloc.x[i];
    const double y = eq.alloc.y[i];
    sx += x;
    sy += y;
    res = std::max(res, std::max(0.0, -x));
    res = std::max(res, std::max(0.0, -y));
    const Marginals m = marginals_at(spec, i, std::max(x, 0.0), std::max(y, 0.0));
    const double am = m.attack - spec.cost_attacker;
    const double dm = m.defend - spec.cost_defender;
    if (x > tol::kSupport)
      res = std::max(res, std::abs(am - eq.lambda));
    else
      res = std::max(res, am - eq.lambda);
    if (y > tol::kSupport)
      res = std::max(res, std::abs(dm - eq.rho));
    else
      res = std::max(res, dm - eq.rho);
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

std::vector<SensitivityRow> proportion_utility_sensitivity(const GameSpec& spec,
                                                           double lo, double hi,
                                                           int steps) {
  if (!(lo < hi) || steps < 2)
    throw DomainError("sensitivity sweep needs lo < hi and at least two steps");
  const bool unit_power = common_power(spec) && spec.attack_eff.a == 1.0;
  std::vector<SensitivityRow> rows;
  rows.reserve(static_cast<size_t>(steps));
  for (int s = 0; s < steps; ++s) {
    GameSpec point = spec;
    point.budget_attacker = lo + (hi - lo) * s / (steps - 1);
    const Equilibrium eq = solve_proportion(point);
    SensitivityRow row;
    row.budget_attacker = point.budget_attacker;
    row.lambda = eq.lambda;
    row.utility_attacker = eq.utility_attacker;
    row.utility_defender = eq.utility_defender;
    if (unit_power) {
      const double c = spec.cost_attacker, ch = spec.cost_defender;
      double d = 0.0;
      for (double w : spec.weights) {
        const double s3 = std::pow(c + eq.lambda + ch, 3.0);
        d += w * ch * (c - eq.lambda - ch) / s3;
      }
      row.du_a_dlambda = d;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace secgame
