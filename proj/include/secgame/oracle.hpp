#pragma once

#include <span>
#include <vector>

#include "secgame/model.hpp"

namespace secgame {

// Independent verification machinery: single-player constrained best
// responses, epsilon-equilibrium certification, alternating-response
// dynamics, and a grid search for small instances. The grid path shares
// no code with the solvers and serves as the trusted baseline.

enum class BrMethod { GridRefine, ProjectedAscent, DualBisection };

struct BestResponseResult {
  std::vector<double> alloc;
  double utility = 0.0;
  BrMethod method = BrMethod::DualBisection;
};

// Maximizer of one player's utility over his budget simplex against a
// frozen opponent. DualBisection prices the budget with the player's own
// multiplier and solves per-target problems exactly; GridRefine fills a
// grid of `resolution` steps greedily and polishes with pairwise
// transfers; ProjectedAscent runs projected gradient steps.
BestResponseResult best_response(Player player, std::span<const double> fixed_opponent,
                                 const GameSpec& spec, int resolution = 512,
                                 BrMethod method = BrMethod::DualBisection);

// Utility gains available to each player by deviating from `eq`, plus
// the stationarity residual. Passes when both gains stay within
// eps_accept_factor * (1 + |utility|).
VerificationReport epsilon_nash_check(const GameSpec& spec, const Equilibrium& eq,
                                      double eps_accept_factor = 1e-4);

// epsilon_nash_check plus the structural equilibrium properties of the
// instance's model (prefix supports, orderings, positivity, support-size
// gap). Used by the verify command.
VerificationReport verify_equilibrium(const GameSpec& spec, const Equilibrium& eq,
                                      double eps_accept_factor = 1e-4);

struct DynamicsResult {
  std::vector<Allocation> trajectory;  // includes the start
  bool converged = false;
};

// Alternating exact best responses until successive profiles differ by at
// most `tol` in max-norm.
DynamicsResult best_response_dynamics(const GameSpec& spec, const Allocation& start,
                                      int max_iters, double tol);

// Exhaustive scan of both discretized budget simplices for a profile
// where neither player's discrete best response improves his utility by
// more than 2 * grid_step * max weight. Ties break lexicographically.
// Feasible for N <= 3 at coarse grids and N <= 2 at fine ones.
Allocation brute_force_ne(const GameSpec& spec, double grid_step);

}  // namespace secgame
