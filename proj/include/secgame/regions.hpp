#pragma once

#include <span>
#include <vector>

#include "secgame/model.hpp"

namespace secgame {

// Activity-pattern classification of product-form targets as a function
// of the shadow-price pair, without solving the game.

// Membership tests evaluated in order R1, R2, R3, else R4. Boundary
// equalities follow the weak/strict pattern of the defining sets, so ties
// resolve toward R1 over R2 over R4.
RegionTag classify_target(int i, DualPair duals, const GameSpec& spec);

struct RegionBoundaryRow {
  double lambda = 0.0;
  // lambda level at and above which the target is abandoned by both.
  double r1_lambda_threshold = 0.0;
  // rho level at and above which the defender gives up while the
  // attacker stays (zero once the attacked-only region closes).
  double r2_rho_boundary = 0.0;
};

std::vector<RegionBoundaryRow> region_boundaries(int i, const GameSpec& spec,
                                                 std::span<const double> lambda_grid);

}  // namespace secgame
