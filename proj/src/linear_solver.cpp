#include "secgame/linear_solver.hpp"

#include <algorithm>
#include <cmath>

namespace secgame {

namespace {

// Sum of inverse weights over the top k targets.
double inv_weight_sum(const GameSpec& spec, int k) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += 1.0 / spec.weights[i];
  return s;
}

Equilibrium finish(const GameSpec& spec, std::vector<double> x, std::vector<double> y,
                   double lambda, double rho, BudgetDomain domain) {
  Equilibrium eq;
  eq.alloc.x = std::move(x);
  eq.alloc.y = std::move(y);
  eq.lambda = lambda;
  eq.rho = rho;
  eq.budget_domain = domain;
  for (int i = 0; i < spec.n; ++i) {
    if (eq.alloc.x[i] > tol::kSupport) eq.k_attacker = i + 1;
    if (eq.alloc.y[i] > tol::kSupport) eq.k_defender = i + 1;
  }
  const auto [ua, ud] = utilities(spec, eq.alloc);
  eq.utility_attacker = ua;
  eq.utility_defender = ud;
  return eq;
}

// Attacker spreads the detection-indifference levels over the top k
// targets and drops the remaining budget on target k+1.
Equilibrium attacker_step_ne(const GameSpec& spec, int k, const ThresholdTable& th) {
  const double gb = spec.gamma_bar();
  std::vector<double> x(spec.n, 0.0), y(spec.n, 0.0);
  for (int i = 0; i < k; ++i) {
    x[i] = spec.cost_defender / (spec.weights[i] * gb);
    y[i] = (1.0 - spec.weights[k] / spec.weights[i]) / gb;
  }
  x[k] = spec.budget_attacker - th.attacker(k);
  const double lambda = spec.weights[k] - spec.cost_attacker;
  return finish(spec, std::move(x), std::move(y), lambda, 0.0, BudgetDomain::D2);
}

// Both budgets bind on a common support of size k; allocations are
// proportional to inverse weights.
Equilibrium proportional_ne(const GameSpec& spec, int k) {
  const double gb = spec.gamma_bar();
  const double s = inv_weight_sum(spec, k);
  std::vector<double> x(spec.n, 0.0), y(spec.n, 0.0);
  for (int i = 0; i < k; ++i) {
    x[i] = spec.budget_attacker / (spec.weights[i] * s);
    y[i] = 1.0 / gb + (spec.budget_defender - k / gb) / (spec.weights[i] * s);
  }
  const double lambda = (k - gb * spec.budget_defender) / s - spec.cost_attacker;
  const double rho = gb * spec.budget_attacker / s - spec.cost_defender;
  return finish(spec, std::move(x), std::move(y), lambda, rho, BudgetDomain::D4);
}

Equilibrium saturated_ne(const GameSpec& spec) {
  const double gb = spec.gamma_bar();
  std::vector<double> x(spec.n, 0.0), y(spec.n, 0.0);
  for (int i = 0; i < spec.n; ++i) {
    x[i] = spec.cost_defender / (spec.weights[i] * gb);
    y[i] = (1.0 - spec.cost_attacker / spec.weights[i]) / gb;
  }
  return finish(spec, std::move(x), std::move(y), 0.0, 0.0, BudgetDomain::D1);
}

// Attacker budget exactly on a threshold: the defender's spend is the
// free parameter.
Equilibrium attacker_boundary_member(const GameSpec& spec, int k, double y_total) {
  const double gb = spec.gamma_bar();
  const double s = inv_weight_sum(spec, k);
  std::vector<double> x(spec.n, 0.0), y(spec.n, 0.0);
  for (int i = 0; i < k; ++i) {
    x[i] = spec.cost_defender / (spec.weights[i] * gb);
    y[i] = 1.0 / gb + (y_total - k / gb) / (spec.weights[i] * s);
    if (std::abs(y[i]) < 1e-15) y[i] = 0.0;
  }
  const double lambda =
      std::max(0.0, (k - gb * y_total) / s - spec.cost_attacker);
  Equilibrium eq = finish(spec, std::move(x), std::move(y), lambda, 0.0, BudgetDomain::D2);
  eq.multiplicity = Multiplicity::BoundaryFamily;
  return eq;
}

// Defender budget exactly on a threshold: the attacker splits his budget
// between the detection-indifference profile on the top k-1 targets
// (x_top resources in total) and the remainder on target k.
Equilibrium defender_boundary_member(const GameSpec& spec, int k, double x_top) {
  const double gb = spec.gamma_bar();
  const double s = inv_weight_sum(spec, k - 1);
  std::vector<double> x(spec.n, 0.0), y(spec.n, 0.0);
  for (int i = 0; i < k - 1; ++i) {
    x[i] = x_top / (spec.weights[i] * s);
    y[i] = (1.0 - spec.weights[k - 1] / spec.weights[i]) / gb;
  }
  x[k - 1] = spec.budget_attacker - x_top;
  if (std::abs(x[k - 1]) < 1e-15) x[k - 1] = 0.0;
  const double lambda = spec.weights[k - 1] - spec.cost_attacker;
  const double rho = std::max(0.0, gb * x_top / s - spec.cost_defender);
  Equilibrium eq = finish(spec, std::move(x), std::move(y), lambda, rho, BudgetDomain::D4);
  eq.multiplicity = Multiplicity::BoundaryFamily;
  return eq;
}

}  // namespace

ThresholdTable thresholds(const GameSpec& spec) {
  if (spec.model != BreachModel::LinearMatrix)
    throw DomainError("thresholds are defined for the matrix game");
  const double gb = spec.gamma_bar();
  const int n = spec.n;
  ThresholdTable t;
  t.p_attacker.assign(static_cast<size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k)
    t.p_attacker[k] =
        t.p_attacker[k - 1] + spec.cost_defender / (spec.weights[k - 1] * gb);
  t.p_defender.assign(static_cast<size_t>(n) + 1, 0.0);
  for (int k = 2; k <= n; ++k) {
    double s = 0.0;
    for (int i = 0; i < k - 1; ++i)
      s += (1.0 - spec.weights[k - 1] / spec.weights[i]) / gb;
    t.p_defender[k - 1] = s;
  }
  double last = n / gb;
  for (int i = 0; i < n; ++i) last -= spec.cost_attacker / (spec.weights[i] * gb);
  t.p_defender[n] = last;
  return t;
}

LinearNEFamily solve_linear(const GameSpec& spec) {
  require_valid(spec);
  if (spec.model != BreachModel::LinearMatrix)
    throw DomainError("solve_linear expects a matrix-game instance");
  const ThresholdTable th = thresholds(spec);
  const int n = spec.n;
  const double xa = spec.budget_attacker;
  const double yd = spec.budget_defender;

  LinearNEFamily fam;

  // Exact attacker threshold: a vertical boundary family.
  for (int k = 1; k <= n; ++k) {
    if (std::abs(xa - th.attacker(k)) > tol::kBoundaryDetect) continue;
    if (yd < th.defender(k) - tol::kBoundaryDetect) break;  // generic case below
    const double lo = th.defender(k);
    const double hi = std::min(yd, th.defender(k + 1));
    fam.kind = LinearNEKind::AttackerBoundary;
    fam.k = k;
    fam.free_interval = {lo, hi};
    fam.representative = attacker_boundary_member(spec, k, 0.5 * (lo + hi));
    fam.representative.free_interval = FreeInterval{lo, hi, "Ytilde"};
    return fam;
  }

  // Exact defender threshold: a horizontal boundary family.
  for (int k = 2; k <= n; ++k) {
    if (std::abs(yd - th.defender(k)) > tol::kBoundaryDetect) continue;
    if (xa < th.attacker(k - 1) - tol::kBoundaryDetect) break;
    if (xa > th.attacker(k) + tol::kBoundaryDetect)
      throw UnhandledBudgetPoint(
          "defender budget sits on a threshold with the attacker beyond its upper "
          "companion threshold; no closed form covers this point");
    const double lo = th.attacker(k - 1);
    const double hi = xa;
    fam.kind = LinearNEKind::DefenderBoundary;
    fam.k = k;
    fam.free_interval = {lo, hi};
    fam.representative = defender_boundary_member(spec, k, 0.5 * (lo + hi));
    fam.representative.free_interval = FreeInterval{lo, hi, "Xtilde"};
    return fam;
  }

  // Generic interior point: locate the budget between thresholds.
  int kx = 0;  // largest k with attacker threshold strictly below the budget
  while (kx < n && xa > th.attacker(kx + 1)) ++kx;
  int m = 1;  // largest k with defender threshold strictly below the budget
  while (m <= n && yd > th.defender(m + 1)) ++m;

  fam.kind = LinearNEKind::Interior;
  if (kx == n && m == n + 1) {
    fam.k = n;
    fam.representative = saturated_ne(spec);
  } else if (kx < m) {
    fam.k = kx;
    fam.representative = attacker_step_ne(spec, kx, th);
  } else {
    fam.k = m;
    fam.representative = proportional_ne(spec, m);
  }
  return fam;
}

std::vector<Equilibrium> enumerate_boundary_nes(const GameSpec& spec,
                                                const LinearNEFamily& family,
                                                int samples) {
  if (family.kind == LinearNEKind::Interior)
    throw DomainError("enumerate_boundary_nes needs a boundary family");
  if (samples < 1) throw DomainError("need at least one sample");
  const auto [lo, hi] = *family.free_interval;
  std::vector<Equilibrium> out;
  out.reserve(static_cast<size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const double t =
        samples == 1 ? 0.5 : static_cast<double>(s) / (samples - 1);
    const double p = lo + t * (hi - lo);
    Equilibrium eq = family.kind == LinearNEKind::AttackerBoundary
                         ? attacker_boundary_member(spec, family.k, p)
                         : defender_boundary_member(spec, family.k, p);
    eq.free_interval = FreeInterval{
        lo, hi,
        family.kind == LinearNEKind::AttackerBoundary ? "Ytilde" : "Xtilde"};
    out.push_back(std::move(eq));
  }
  return out;
}

double kkt_residual_linear(const GameSpec& spec, const Equilibrium& eq) {
  const double gb = spec.gamma_bar();
  double res = 0.0;
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    const double x = eq.alloc.x[i];
    const double y = eq.alloc.y[i];
    sx += x;
    sy += y;
    res = std::max(res, std::max(0.0, -x));
    res = std::max(res, std::max(0.0, -y));
    res = std::max(res, std::max(0.0, x - 1.0));
    res = std::max(res, std::max(0.0, y - 1.0));
    const double attack_marginal =
        spec.weights[i] * (1.0 - gb * y) - spec.cost_attacker;
    const double defend_marginal = spec.weights[i] * gb * x - spec.cost_defender;
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

}  // namespace secgame
