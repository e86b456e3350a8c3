#pragma once

#include <utility>
#include <vector>

#include "secgame/model.hpp"

namespace secgame {

// Equilibrium computation for the proportion-form game. Every target is
// both attacked and defended at the equilibrium, so the two per-target
// stationarity conditions hold with equality and no support search is
// needed.

// Joint stationary point (x_i, y_i) of target i at the given duals.
// Power families with a common exponent use the closed form through the
// allocation ratio; other families run a damped Newton iteration with a
// bracketed-bisection fallback. Passing use_closed_forms = false forces
// the iterative path everywhere, which exists so the closed forms can be
// cross-checked against it.
std::pair<double, double> per_target_solve_proportion(int i, DualPair duals,
                                                      const GameSpec& spec,
                                                      bool use_closed_forms = true);

// Unconstrained spending levels and the budget-domain tag, mirroring the
// product-form partition.
BudgetDomainReport classify_budget_domain_proportion(const GameSpec& spec);

Equilibrium solve_proportion(const GameSpec& spec);

double kkt_residual_proportion(const GameSpec& spec, const Equilibrium& eq);

struct SensitivityRow {
  double budget_attacker = 0.0;
  double lambda = 0.0;
  double utility_attacker = 0.0;
  double utility_defender = 0.0;
  // Analytic slope of the attacker utility in his shadow price; emitted
  // for the unit-exponent power family only.
  std::optional<double> du_a_dlambda;
};

// Sweep of the attacker budget with everything else fixed, for studying
// how utilities respond to the resource limit.
std::vector<SensitivityRow> proportion_utility_sensitivity(const GameSpec& spec,
                                                           double lo, double hi,
                                                           int steps);

}  // namespace secgame
