#include "secgame/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace secgame {

namespace {

struct Bounds {
  double r1_lambda;  // attacker abandons at or above this lambda
  double r1_rho;     // defender abandons at or above this rho (0 when f(0)=0)
};

Bounds r1_bounds(int i, const GameSpec& spec) {
  const double w = spec.weights[i];
  const double f0 = spec.attack_eff.value(0.0);
  return {std::max(w * spec.attack_eff.deriv_at_zero() * spec.defence_eff.value(0.0) -
                       spec.cost_attacker,
                   0.0),
          std::max(-w * f0 * spec.defence_eff.deriv_at_zero() - spec.cost_defender,
                   0.0)};
}

// Defence marginal at zero against the attacker's undefended allocation;
// the defender stays out at or above this rho.
double r2_rho_bound(int i, const GameSpec& spec, double lambda) {
  const double w = spec.weights[i];
  const double price = spec.cost_attacker + lambda;
  const double gt0 = spec.defence_eff.value(0.0);
  double x = 0.0;
  if (price > 0.0) {
    x = spec.attack_eff.inv_deriv(price / (w * gt0));
  } else {
    x = std::numeric_limits<double>::infinity();
  }
  const double fx = std::isinf(x) ? 1.0 : spec.attack_eff.value(x);
  return std::max(-w * fx * spec.defence_eff.deriv_at_zero() - spec.cost_defender, 0.0);
}

}  // namespace

RegionTag classify_target(int i, DualPair duals, const GameSpec& spec) {
  if (spec.model != BreachModel::ProductForm)
    throw DomainError("regions are defined for the product-form game");
  if (i < 0 || i >= spec.n) throw DomainError("target index out of range");
  const Bounds b = r1_bounds(i, spec);
  if (duals.lambda >= b.r1_lambda && duals.rho >= b.r1_rho) return RegionTag::R1;
  if (duals.lambda < b.r1_lambda && duals.rho >= r2_rho_bound(i, spec, duals.lambda))
    return RegionTag::R2;
  // Defended-only requires breach revenue without attack resources, which
  // needs f(0) > 0; with f(0) = 0 the test below never fires.
  const double f0 = spec.attack_eff.value(0.0);
  if (f0 > 0.0) {
    const double defended_only =
        -spec.weights[i] * f0 * spec.defence_eff.deriv_at_zero() - spec.cost_defender;
    if (duals.rho < defended_only) {
      const double y = spec.defence_eff.inv_deriv(
          -(duals.rho + spec.cost_defender) / (spec.weights[i] * f0));
      const double gate = spec.weights[i] * spec.attack_eff.deriv_at_zero() *
                              spec.defence_eff.value(y) -
                          spec.cost_attacker;
      if (duals.lambda > std::max(gate, 0.0)) return RegionTag::R3;
    }
  }
  return RegionTag::R4;
}

std::vector<RegionBoundaryRow> region_boundaries(int i, const GameSpec& spec,
                                                 std::span<const double> lambda_grid) {
  if (spec.model != BreachModel::ProductForm)
    throw DomainError("regions are defined for the product-form game");
  if (i < 0 || i >= spec.n) throw DomainError("target index out of range");
  const Bounds b = r1_bounds(i, spec);
  std::vector<RegionBoundaryRow> rows;
  rows.reserve(lambda_grid.size());
  for (double lam : lambda_grid) {
    RegionBoundaryRow row;
    row.lambda = lam;
    row.r1_lambda_threshold = b.r1_lambda;
    row.r2_rho_boundary = lam < b.r1_lambda ? r2_rho_bound(i, spec, lam) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace secgame
