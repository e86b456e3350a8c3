#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "secgame/model.hpp"

namespace secgame {

enum class SweepAxis { BudgetAttacker, BudgetDefender, Both };

// Output column groups; absent groups are dropped from the CSV while the
// relative order of the remaining ones stays fixed.
struct SweepOutputs {
  bool ne = true;
  bool utilities = true;
  bool duals = true;
  bool domain = true;
};

struct SweepRequest {
  GameSpec spec;
  SweepAxis axis = SweepAxis::BudgetAttacker;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
  SweepOutputs outputs;
};

// One CSV row per grid point in grid order (outer axis = attacker budget
// when both vary). Column order: axis value(s), lambda, rho, k_a, k_d,
// domain, u_a, u_d, x_1..x_N, y_1..y_N, error. Per-row solver failures
// land in the error column and the sweep continues.
void run_sweep(const SweepRequest& request, std::ostream& out);

// Region boundary table for every target of a product-form instance over
// a shared lambda grid: target, lambda, r1_lambda_threshold,
// r2_rho_boundary.
void write_region_boundaries_csv(const GameSpec& spec,
                                 std::span<const double> lambda_grid,
                                 std::ostream& out);

// Default lambda grid for the regions command: `steps` points from 0 to
// just past the largest abandonment threshold.
std::vector<double> default_lambda_grid(const GameSpec& spec, int steps = 50);

}  // namespace secgame
