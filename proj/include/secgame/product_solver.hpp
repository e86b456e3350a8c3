#pragma once

#include <utility>

#include "secgame/model.hpp"

namespace secgame {

// Equilibrium computation for the product-form game: the per-target
// stationarity system at fixed shadow prices, budget-domain
// classification, and the support-enumeration + dual-bisection search.

// Local solution (x_i, y_i) of target i at the given duals. When
// `defended`, returns the joint stationary point of
//   x = hA((c+lambda)/(w_i * gtilde(y))),  y = hD(-(rho+chat)/(w_i * f(x)))
// found by bisection on x of the composed (monotone) map; otherwise the
// defender is pinned to zero. Both coordinates clamp to zero through the
// inverse-derivative branches. Index i is zero-based.
std::pair<double, double> per_target_point(int i, DualPair duals, const GameSpec& spec,
                                           bool defended);

// Sums of per_target_point over prefix supports: targets below k_d are
// defended, targets in (k_d, k_a] attacked only. 0 <= k_d <= k_a <= N.
std::pair<double, double> total_demand(DualPair duals, int k_a, int k_d,
                                       const GameSpec& spec);

// Unconstrained spending levels and the resulting budget-domain tag.
BudgetDomainReport classify_budget_domain(const GameSpec& spec);

// The unique equilibrium of a strictly concave product-form instance.
Equilibrium solve_product(const GameSpec& spec);

// Max stationarity + slackness residual of an equilibrium candidate
// under the product-form conditions.
double kkt_residual_product(const GameSpec& spec, const Equilibrium& eq);

// Residual dispatcher across the three breaching models.
double kkt_residual(const GameSpec& spec, const Equilibrium& eq);

}  // namespace secgame
