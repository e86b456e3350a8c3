#include "secgame/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "secgame/linear_solver.hpp"
#include "secgame/product_solver.hpp"
#include "secgame/proportion_solver.hpp"
#include "secgame/regions.hpp"
#include "secgame/root_find.hpp"

namespace secgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Allocation used where a bare positive amount already captures the whole
// prize (the share model against an undefended target).
constexpr double kSaturationEps = 1e-9;

double max_weight(const GameSpec& spec) {
  return *std::max_element(spec.weights.begin(), spec.weights.end());
}

// Upper bound on one player's per-target variable.
double component_cap(const GameSpec& spec, Player player) {
  if (spec.model == BreachModel::LinearMatrix) return 1.0;
  if (player == Player::Defender && spec.defence_eff.domain_upper)
    return *spec.defence_eff.domain_upper * (1.0 - 1e-9);
  return kInf;
}

// One player's utility contribution on a single target, own variable z,
// opponent frozen. Fully separable across targets for every model.
double target_contribution(const GameSpec& spec, Player player, int i, double z,
                           double opp) {
  const double w = spec.weights[i];
  if (player == Player::Attacker) {
    return w * breach_probability(spec, z, opp) - spec.cost_attacker * z;
  }
  return -w * breach_probability(spec, opp, z) - spec.cost_defender * z;
}

// Marginal of the contribution in the own variable; decreasing in z for
// the concave models, constant for the matrix game.
double target_marginal(const GameSpec& spec, Player player, int i, double z,
                       double opp) {
  const double w = spec.weights[i];
  switch (spec.model) {
    case BreachModel::ProductForm:
    case BreachModel::LinearMatrix: {
      if (player == Player::Attacker)
        return w * spec.attack_eff.deriv(z) * spec.defence_eff.value(opp) -
               spec.cost_attacker;
      return -w * spec.attack_eff.value(opp) * spec.defence_eff.deriv(z) -
             spec.cost_defender;
    }
    case BreachModel::ProportionForm: {
      if (player == Player::Attacker) {
        const double g = spec.defence_eff.g_value(opp);
        const double f = spec.attack_eff.value(z);
        const double s = f + g;
        if (s <= 0.0) return kInf;
        return w * spec.attack_eff.deriv(z) * g / (s * s) - spec.cost_attacker;
      }
      const double f = spec.attack_eff.value(opp);
      const double g = spec.defence_eff.g_value(z);
      const double s = f + g;
      if (s <= 0.0) return -spec.cost_defender;
      return w * f * spec.defence_eff.g_deriv(z) / (s * s) - spec.cost_defender;
    }
  }
  throw DomainError("unknown breaching model");
}

// Per-target maximizer given the own shadow price, for the concave models.
double priced_argmax(const GameSpec& spec, Player player, int i, double opp,
                     double mu, double cap) {
  const double w = spec.weights[i];
  if (player == Player::Attacker) {
    const double price = spec.cost_attacker + mu;
    if (spec.model == BreachModel::ProportionForm) {
      const double g = spec.defence_eff.g_value(opp);
      if (g <= 0.0) return price < w / kSaturationEps ? kSaturationEps : 0.0;
      if (price <= 0.0) return cap;
      auto gap = [&](double z) { return target_marginal(spec, player, i, z, opp) - mu; };
      if (gap(0.0) <= 0.0 && std::isfinite(gap(0.0))) return 0.0;
      double hi = 1.0;
      int grow = 0;
      while (gap(hi) > 0.0 && hi < cap) {
        hi = std::min(hi * 2.0, cap);
        if (++grow > 200) break;
      }
      return detail::bisect_decreasing(gap, 0.0, hi, 1e-13 * (1.0 + hi), 200);
    }
    const double gt = spec.defence_eff.value(opp);
    if (gt <= 0.0) return 0.0;  // fully suppressed target
    if (price <= 0.0) return cap;
    return std::min(spec.attack_eff.inv_deriv(price / (w * gt)), cap);
  }
  const double price = spec.cost_defender + mu;
  if (spec.model == BreachModel::ProportionForm) {
    const double f = spec.attack_eff.value(opp);
    if (f <= 0.0) return 0.0;
    if (price <= 0.0) return cap;
    auto gap = [&](double z) { return target_marginal(spec, player, i, z, opp) - mu; };
    if (gap(0.0) <= 0.0 && std::isfinite(gap(0.0))) return 0.0;
    double hi = std::min(1.0, cap);
    int grow = 0;
    while (gap(hi) > 0.0 && hi < cap) {
      hi = std::min(hi * 2.0, cap);
      if (++grow > 200) break;
    }
    return detail::bisect_decreasing(gap, 0.0, hi, 1e-13 * (1.0 + hi), 200);
  }
  const double f = spec.attack_eff.value(opp);
  if (f <= 0.0) return 0.0;  // nothing to protect against
  if (price <= 0.0) return cap;
  return std::min(spec.defence_eff.inv_deriv(-price / (w * f)), cap);
}

double own_budget(const GameSpec& spec, Player player) {
  return player == Player::Attacker ? spec.budget_attacker : spec.budget_defender;
}

std::vector<double> assemble(const GameSpec& spec, Player player,
                             std::span<const double> own,
                             std::span<const double> opp, double* utility) {
  Allocation alloc;
  if (player == Player::Attacker) {
    alloc.x.assign(own.begin(), own.end());
    alloc.y.assign(opp.begin(), opp.end());
  } else {
    alloc.x.assign(opp.begin(), opp.end());
    alloc.y.assign(own.begin(), own.end());
  }
  const auto [ua, ud] = utilities(spec, alloc);
  *utility = player == Player::Attacker ? ua : ud;
  return player == Player::Attacker ? alloc.x : alloc.y;
}

// Exact water-filling best response: price the budget with the player's
// own multiplier, per-target problems solved by the derivative inverses.
BestResponseResult dual_bisection_response(Player player,
                                           std::span<const double> opp,
                                           const GameSpec& spec) {
  const int n = spec.n;
  const double budget = own_budget(spec, player);
  const double cap = component_cap(spec, player);

  // The matrix game is linear in the own variables: fill the targets in
  // order of marginal value.
  if (spec.model == BreachModel::LinearMatrix) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> m(n);
    for (int i = 0; i < n; ++i) m[i] = target_marginal(spec, player, i, 0.0, opp[i]);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return m[a] > m[b]; });
    std::vector<double> z(n, 0.0);
    double left = budget;
    for (int idx : order) {
      if (m[idx] <= 0.0 || left <= 0.0) break;
      z[idx] = std::min(left, cap);
      left -= z[idx];
    }
    BestResponseResult r;
    r.method = BrMethod::DualBisection;
    r.alloc = assemble(spec, player, z, opp, &r.utility);
    return r;
  }

  auto alloc_at = [&](double mu) {
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = priced_argmax(spec, player, i, opp[i], mu, cap);
    return z;
  };
  auto spend = [&](const std::vector<double>& z) {
    double s = 0.0;
    for (double v : z) s += v;
    return s;
  };

  std::vector<double> z = alloc_at(0.0);
  if (spend(z) > budget) {
    double hi = 1.0;
    int grow = 0;
    while (spend(alloc_at(hi)) > budget) {
      hi *= 2.0;
      if (++grow > 200) throw ConvergenceError("best-response price bracket failed");
    }
    const double mu = detail::bisect_decreasing(
        [&](double m) { return spend(alloc_at(m)) - budget; }, 0.0, hi);
    z = alloc_at(mu);
    const double s = spend(z);
    if (s > budget && s > 0.0)
      for (double& v : z) v *= budget / s;
  }
  BestResponseResult r;
  r.method = BrMethod::DualBisection;
  r.alloc = assemble(spec, player, z, opp, &r.utility);
  return r;
}

// Greedy grid fill plus pairwise-transfer polish. Exact on the grid for
// separable concave objectives; the polish tightens below grid error.
BestResponseResult grid_refine_response(Player player, std::span<const double> opp,
                                        const GameSpec& spec, int resolution) {
  const int n = spec.n;
  const double budget = own_budget(spec, player);
  const double cap = component_cap(spec, player);
  const double h = budget / resolution;

  std::vector<double> z(n, 0.0);
  auto contrib = [&](int i, double v) {
    return target_contribution(spec, player, i, v, opp[i]);
  };
  double left = budget;
  for (int step = 0; step < resolution; ++step) {
    int best = -1;
    double best_gain = 0.0;
    for (int i = 0; i < n; ++i) {
      if (z[i] + h > cap + 1e-15) continue;
      const double gain = contrib(i, z[i] + h) - contrib(i, z[i]);
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best < 0) break;
    z[best] += h;
    left -= h;
    if (left < h * 0.5) break;
  }

  // Pairwise transfers and unilateral adjustments at shrinking step sizes.
  double used = budget - left;
  for (double d = h; d > h * 1e-7; d *= 0.5) {
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < 200) {
      changed = false;
      for (int i = 0; i < n; ++i) {
        // put d more on i if budget allows
        if (used + d <= budget && z[i] + d <= cap) {
          const double gain = contrib(i, z[i] + d) - contrib(i, z[i]);
          if (gain > 1e-15) {
            z[i] += d;
            used += d;
            changed = true;
          }
        }
        // take d off i
        if (z[i] >= d) {
          const double gain = contrib(i, z[i] - d) - contrib(i, z[i]);
          if (gain > 1e-15) {
            z[i] -= d;
            used -= d;
            changed = true;
          }
        }
        // move d from i to j
        for (int j = 0; j < n; ++j) {
          if (j == i || z[i] < d || z[j] + d > cap) continue;
          const double gain = (contrib(i, z[i] - d) + contrib(j, z[j] + d)) -
                              (contrib(i, z[i]) + contrib(j, z[j]));
          if (gain > 1e-15) {
            z[i] -= d;
            z[j] += d;
            changed = true;
          }
        }
      }
    }
  }
  BestResponseResult r;
  r.method = BrMethod::GridRefine;
  r.alloc = assemble(spec, player, z, opp, &r.utility);
  return r;
}

BestResponseResult projected_ascent_response(Player player, std::span<const double> opp,
                                             const GameSpec& spec) {
  const int n = spec.n;
  const double budget = own_budget(spec, player);
  const double cap = component_cap(spec, player);

  auto project = [&](std::vector<double> v) {
    for (double& u : v) u = std::clamp(u, 0.0, cap);
    double s = std::accumulate(v.begin(), v.end(), 0.0);
    if (s <= budget) return v;
    // shift the water level until the budget is met
    double lo = 0.0, hi = *std::max_element(v.begin(), v.end());
    for (int it = 0; it < 100; ++it) {
      const double tau = 0.5 * (lo + hi);
      double ss = 0.0;
      for (double u : v) ss += std::clamp(u - tau, 0.0, cap);
      (ss > budget ? lo : hi) = tau;
    }
    const double tau = 0.5 * (lo + hi);
    for (double& u : v) u = std::clamp(u - tau, 0.0, cap);
    return v;
  };
  auto total = [&](const std::vector<double>& v) {
    double u = 0.0;
    for (int i = 0; i < n; ++i) u += target_contribution(spec, player, i, v[i], opp[i]);
    return u;
  };

  std::vector<double> z(n, std::min(budget / n, std::min(cap, 1.0)));
  z = project(std::move(z));
  double u = total(z);
  double eta = 0.1 * (1.0 + budget);
  for (int it = 0; it < 500 && eta > 1e-12; ++it) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
      double m = target_marginal(spec, player, i, z[i], opp[i]);
      g[i] = std::clamp(std::isfinite(m) ? m : 1e6, -1e6, 1e6);
    }
    std::vector<double> nz(n);
    for (int i = 0; i < n; ++i) nz[i] = z[i] + eta * g[i];
    nz = project(std::move(nz));
    const double nu = total(nz);
    if (nu > u + 1e-15) {
      z = std::move(nz);
      u = nu;
      eta *= 1.2;
    } else {
      eta *= 0.5;
    }
  }
  BestResponseResult r;
  r.method = BrMethod::ProjectedAscent;
  r.alloc = assemble(spec, player, z, opp, &r.utility);
  return r;
}

}  // namespace

BestResponseResult best_response(Player player, std::span<const double> fixed_opponent,
                                 const GameSpec& spec, int resolution,
                                 BrMethod method) {
  if (static_cast<int>(fixed_opponent.size()) != spec.n)
    throw DomainError("opponent allocation size mismatch");
  switch (method) {
    case BrMethod::DualBisection:
      return dual_bisection_response(player, fixed_opponent, spec);
    case BrMethod::GridRefine:
      return grid_refine_response(player, fixed_opponent, spec, std::max(resolution, 2));
    case BrMethod::ProjectedAscent:
      return projected_ascent_response(player, fixed_opponent, spec);
  }
  throw DomainError("unknown best-response method");
}

VerificationReport epsilon_nash_check(const GameSpec& spec, const Equilibrium& eq,
                                      double eps_accept_factor) {
  VerificationReport rep;
  const bool feasible = allocation_feasible(spec, eq.alloc);
  rep.invariant_results.push_back(
      {"feasibility", feasible, feasible ? "" : "allocation violates budget or sign"});

  const auto [ua, ud] = utilities(spec, eq.alloc);
  const auto br_a =
      best_response(Player::Attacker, eq.alloc.y, spec, 512, BrMethod::DualBisection);
  const auto br_d =
      best_response(Player::Defender, eq.alloc.x, spec, 512, BrMethod::DualBisection);
  rep.eps_attacker = std::max(0.0, br_a.utility - ua);
  rep.eps_defender = std::max(0.0, br_d.utility - ud);
  rep.kkt_max_residual = kkt_residual(spec, eq);

  const double lim_a = eps_accept_factor * (1.0 + std::abs(ua));
  const double lim_d = eps_accept_factor * (1.0 + std::abs(ud));
  const bool pass = rep.eps_attacker <= lim_a && rep.eps_defender <= lim_d;
  rep.invariant_results.push_back(
      {"epsilon_nash", pass,
       "attacker gain " + std::to_string(rep.eps_attacker) + ", defender gain " +
           std::to_string(rep.eps_defender)});
  return rep;
}

namespace {

void check_prefix_supports(const GameSpec& spec, const Equilibrium& eq,
                           VerificationReport& rep) {
  int k_a = 0, k_d = 0;
  bool prefix = true;
  for (int i = 0; i < spec.n; ++i) {
    const bool ax = eq.alloc.x[i] > tol::kSupport;
    const bool dy = eq.alloc.y[i] > tol::kSupport;
    if (ax) {
      if (i != k_a) prefix = false;
      k_a = i + 1;
    }
    if (dy) {
      if (i != k_d) prefix = false;
      k_d = i + 1;
    }
  }
  rep.invariant_results.push_back(
      {"support_prefix", prefix,
       prefix ? "" : "positive allocations are not weight-prefixes"});
  if (spec.model == BreachModel::LinearMatrix) {
    const bool gap = (k_a - k_d == 0) || (k_a - k_d == 1);
    rep.invariant_results.push_back(
        {"support_gap", gap,
         "attacked prefix " + std::to_string(k_a) + ", defended prefix " +
             std::to_string(k_d)});
  } else {
    rep.invariant_results.push_back(
        {"support_ordering", k_a >= k_d,
         "attacked prefix " + std::to_string(k_a) + ", defended prefix " +
             std::to_string(k_d)});
  }
}

void check_product_orderings(const GameSpec& spec, const Equilibrium& eq,
                             VerificationReport& rep) {
  int k_a = 0, k_d = 0;
  for (int i = 0; i < spec.n; ++i) {
    if (eq.alloc.x[i] > tol::kSupport) k_a = i + 1;
    if (eq.alloc.y[i] > tol::kSupport) k_d = i + 1;
  }
  bool y_ord = true;
  for (int i = 0; i + 1 < k_d; ++i)
    if (eq.alloc.y[i] < eq.alloc.y[i + 1] - 1e-8) y_ord = false;
  rep.invariant_results.push_back(
      {"defended_weight_ordering", y_ord,
       y_ord ? "" : "defender does not favor heavier targets"});

  bool x_tail_ord = true;
  for (int i = k_d; i + 1 < k_a; ++i)
    if (eq.alloc.x[i] < eq.alloc.x[i + 1] - 1e-8) x_tail_ord = false;
  rep.invariant_results.push_back(
      {"undefended_attack_ordering", x_tail_ord,
       x_tail_ord ? "" : "attack on undefended targets does not follow weights"});

  if (k_d >= 2) {
    const RidClass cls = rid_class(spec.defence_eff);
    bool ok = true;
    for (int i = 0; i + 1 < k_d && ok; ++i) {
      const double xi = eq.alloc.x[i], xj = eq.alloc.x[i + 1];
      switch (cls) {
        case RidClass::Increasing: ok = xi > xj - 1e-9; break;
        case RidClass::Constant: ok = std::abs(xi - xj) <= 1e-6 * (1.0 + std::abs(xi)); break;
        case RidClass::Decreasing: ok = xi < xj + 1e-9; break;
      }
    }
    rep.invariant_results.push_back(
        {"rid_ordering", ok,
         ok ? "" : "attack ordering contradicts the defence ineffectiveness class"});
  }

  bool regions_ok = true;
  for (int i = 0; i < spec.n && regions_ok; ++i) {
    const RegionTag tag = classify_target(i, {eq.lambda, eq.rho}, spec);
    const bool ax = eq.alloc.x[i] > tol::kSupport;
    const bool dy = eq.alloc.y[i] > tol::kSupport;
    // Skip targets sitting numerically on a region boundary.
    switch (tag) {
      case RegionTag::R1: regions_ok = !ax && !dy; break;
      case RegionTag::R2: regions_ok = ax && !dy; break;
      case RegionTag::R3: regions_ok = !ax && dy; break;
      case RegionTag::R4: regions_ok = ax && dy; break;
    }
  }
  rep.invariant_results.push_back(
      {"region_consistency", regions_ok,
       regions_ok ? "" : "zero pattern disagrees with the region classification"});
}

void check_proportion_properties(const GameSpec& spec, const Equilibrium& eq,
                                 VerificationReport& rep) {
  bool positive = true;
  for (int i = 0; i < spec.n; ++i)
    if (eq.alloc.x[i] <= tol::kSupport || eq.alloc.y[i] <= tol::kSupport)
      positive = false;
  rep.invariant_results.push_back(
      {"strict_positivity", positive,
       positive ? "" : "some target received no resources"});

  bool ordered = true;
  for (int i = 0; i + 1 < spec.n; ++i) {
    if (!(eq.alloc.x[i] > eq.alloc.x[i + 1] - 1e-10) ||
        !(eq.alloc.y[i] > eq.alloc.y[i + 1] - 1e-10))
      ordered = false;
  }
  rep.invariant_results.push_back(
      {"allocation_ordering", ordered,
       ordered ? "" : "heavier targets did not receive strictly more resources"});

  bool prange = true;
  for (int i = 0; i < spec.n; ++i) {
    const double p = breach_probability(spec, eq.alloc.x[i], eq.alloc.y[i]);
    if (!(p > 0.0 && p < 1.0)) prange = false;
  }
  rep.invariant_results.push_back(
      {"breach_probability_range", prange,
       prange ? "" : "breaching probability left the open unit interval"});
}

}  // namespace

VerificationReport verify_equilibrium(const GameSpec& spec, const Equilibrium& eq,
                                      double eps_accept_factor) {
  VerificationReport rep = epsilon_nash_check(spec, eq, eps_accept_factor);
  const double res = rep.kkt_max_residual;
  rep.invariant_results.push_back(
      {"kkt_residual", res <= tol::kEquilibrium,
       "max stationarity/slackness residual " + std::to_string(res)});
  rep.invariant_results.push_back(
      {"duals_nonnegative", eq.lambda >= -1e-12 && eq.rho >= -1e-12, ""});

  switch (spec.model) {
    case BreachModel::ProductForm:
      check_prefix_supports(spec, eq, rep);
      check_product_orderings(spec, eq, rep);
      break;
    case BreachModel::LinearMatrix:
      check_prefix_supports(spec, eq, rep);
      break;
    case BreachModel::ProportionForm:
      check_proportion_properties(spec, eq, rep);
      break;
  }
  return rep;
}

DynamicsResult best_response_dynamics(const GameSpec& spec, const Allocation& start,
                                      int max_iters, double tol) {
  if (!allocation_feasible(spec, start))
    throw DomainError("dynamics must start from a feasible profile");
  DynamicsResult out;
  Allocation cur = start;
  out.trajectory.push_back(cur);
  for (int it = 0; it < max_iters; ++it) {
    Allocation next = cur;
    next.x = best_response(Player::Attacker, cur.y, spec).alloc;
    next.y = best_response(Player::Defender, next.x, spec).alloc;
    double diff = 0.0;
    for (int i = 0; i < spec.n; ++i) {
      diff = std::max(diff, std::abs(next.x[i] - cur.x[i]));
      diff = std::max(diff, std::abs(next.y[i] - cur.y[i]));
    }
    cur = std::move(next);
    out.trajectory.push_back(cur);
    if (diff <= tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

namespace {

// Lexicographically ordered enumeration of {counts >= 0, sum <= steps}
// with per-component caps.
void enumerate_simplex(int n, int steps, const std::vector<int>& caps,
                       std::vector<std::array<int, 3>>& out) {
  std::array<int, 3> pt{0, 0, 0};
  if (n == 1) {
    for (int a = 0; a <= std::min(steps, caps[0]); ++a) {
      pt[0] = a;
      out.push_back(pt);
    }
    return;
  }
  if (n == 2) {
    for (int a = 0; a <= std::min(steps, caps[0]); ++a)
      for (int b = 0; b <= std::min(steps - a, caps[1]); ++b) {
        pt = {a, b, 0};
        out.push_back(pt);
      }
    return;
  }
  for (int a = 0; a <= std::min(steps, caps[0]); ++a)
    for (int b = 0; b <= std::min(steps - a, caps[1]); ++b)
      for (int c = 0; c <= std::min(steps - a - b, caps[2]); ++c) {
        pt = {a, b, c};
        out.push_back(pt);
      }
}

}  // namespace

Allocation brute_force_ne(const GameSpec& spec, double grid_step) {
  if (spec.n > 3) throw DomainError("grid search supports at most three targets");
  if (grid_step < 1e-3) throw DomainError("grid step below the supported resolution");
  const int n = spec.n;
  const double h = grid_step;

  const int steps_a = static_cast<int>(std::floor(spec.budget_attacker / h + 1e-9));
  const int steps_d = static_cast<int>(std::floor(spec.budget_defender / h + 1e-9));
  const double cap_a = component_cap(spec, Player::Attacker);
  const double cap_d = component_cap(spec, Player::Defender);
  const int cap_a_steps = std::isinf(cap_a) ? steps_a
                                            : std::min(steps_a, static_cast<int>(cap_a / h));
  const int cap_d_steps = std::isinf(cap_d) ? steps_d
                                            : std::min(steps_d, static_cast<int>(cap_d / h));

  std::vector<std::array<int, 3>> apts, dpts;
  enumerate_simplex(n, steps_a, std::vector<int>(3, cap_a_steps), apts);
  enumerate_simplex(n, steps_d, std::vector<int>(3, cap_d_steps), dpts);

  // Value tables over grid levels; efficiencies depend on the level only.
  std::vector<double> f_tab(static_cast<size_t>(std::min(steps_a, cap_a_steps)) + 1);
  for (size_t k = 0; k < f_tab.size(); ++k)
    f_tab[k] = spec.attack_eff.value(static_cast<double>(k) * h);
  std::vector<double> d_tab(static_cast<size_t>(std::min(steps_d, cap_d_steps)) + 1);
  const bool proportion = spec.model == BreachModel::ProportionForm;
  for (size_t k = 0; k < d_tab.size(); ++k)
    d_tab[k] = proportion ? spec.defence_eff.g_value(static_cast<double>(k) * h)
                          : spec.defence_eff.value(static_cast<double>(k) * h);

  auto pair_utilities = [&](const std::array<int, 3>& xc,
                            const std::array<int, 3>& yc) {
    double loss = 0.0;
    int sa = 0, sd = 0;
    for (int i = 0; i < n; ++i) {
      const double f = f_tab[static_cast<size_t>(xc[i])];
      const double d = d_tab[static_cast<size_t>(yc[i])];
      double p;
      if (proportion)
        p = f == 0.0 ? 0.0 : f / (f + d);
      else
        p = f * d;
      loss += spec.weights[i] * p;
      sa += xc[i];
      sd += yc[i];
    }
    const double ua = loss - spec.cost_attacker * h * sa;
    const double ud = -loss - spec.cost_defender * h * sd;
    return std::pair{ua, ud};
  };

  // Exact discrete best-response value by greedy increments (marginal
  // gains fall with the level for all three models).
  auto best_value = [&](Player player, const std::array<int, 3>& opp) {
    const auto& own_tab = player == Player::Attacker ? f_tab : d_tab;
    const int budget_steps = player == Player::Attacker ? steps_a : steps_d;
    const int cap_steps = player == Player::Attacker ? cap_a_steps : cap_d_steps;
    const double cost = player == Player::Attacker ? spec.cost_attacker
                                                   : spec.cost_defender;
    auto contrib = [&](int i, int k) {
      const double own = own_tab[static_cast<size_t>(k)];
      const double other =
          player == Player::Attacker ? d_tab[static_cast<size_t>(opp[i])]
                                     : f_tab[static_cast<size_t>(opp[i])];
      double p;
      if (proportion) {
        const double f = player == Player::Attacker ? own : other;
        const double g = player == Player::Attacker ? other : own;
        p = f == 0.0 ? 0.0 : f / (f + g);
      } else {
        p = player == Player::Attacker ? own * other : other * own;
      }
      const double sign = player == Player::Attacker ? 1.0 : -1.0;
      return sign * spec.weights[i] * p - cost * h * k;
    };
    std::array<int, 3> cnt{0, 0, 0};
    double value = 0.0;
    for (int i = 0; i < n; ++i) value += contrib(i, 0);
    for (int s = 0; s < budget_steps; ++s) {
      int best = -1;
      double best_gain = 0.0;
      for (int i = 0; i < n; ++i) {
        if (cnt[i] >= cap_steps) continue;
        const double gain = contrib(i, cnt[i] + 1) - contrib(i, cnt[i]);
        if (gain > best_gain) {
          best_gain = gain;
          best = i;
        }
      }
      if (best < 0) break;
      value += best_gain;
      ++cnt[best];
    }
    return value;
  };

  std::vector<double> best_ua_by_d(dpts.size());
  for (size_t j = 0; j < dpts.size(); ++j)
    best_ua_by_d[j] = best_value(Player::Attacker, dpts[j]);
  std::vector<double> best_ud_by_a(apts.size());
  for (size_t j = 0; j < apts.size(); ++j)
    best_ud_by_a[j] = best_value(Player::Defender, apts[j]);

  const double bound = 2.0 * h * max_weight(spec);
  double best_score = kInf;
  size_t best_i = 0, best_j = 0;
  bool found = false;
  for (size_t ia = 0; ia < apts.size(); ++ia) {
    for (size_t jd = 0; jd < dpts.size(); ++jd) {
      const auto [ua, ud] = pair_utilities(apts[ia], dpts[jd]);
      const double gain_a = best_ua_by_d[jd] - ua;
      if (gain_a >= best_score) continue;
      const double gain_d = best_ud_by_a[ia] - ud;
      const double score = std::max(gain_a, gain_d);
      if (score < best_score) {
        best_score = score;
        best_i = ia;
        best_j = jd;
        found = true;
      }
    }
  }
  if (!found || best_score > bound)
    throw NotFoundError("no grid profile meets the discrete equilibrium bound");

  Allocation out;
  out.x.assign(n, 0.0);
  out.y.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    out.x[i] = apts[best_i][i] * h;
    out.y[i] = dpts[best_j][i] * h;
  }
  return out;
}

}  // namespace secgame
