#pragma once

#include <utility>
#include <vector>

#include "secgame/efficiency.hpp"
#include "secgame/types.hpp"

namespace secgame {

// Full description of one game instance. Immutable value; every solver
// and oracle operation is a pure function of it.
struct GameSpec {
  int n = 0;
  std::vector<double> weights;  // strictly descending, all positive
  double cost_attacker = 0.0;   // price per unit of attacker resource
  double cost_defender = 0.0;
  double budget_attacker = 0.0;
  double budget_defender = 0.0;
  BreachModel model = BreachModel::ProductForm;
  EfficiencyFunction attack_eff;
  EfficiencyFunction defence_eff;
  double gamma = 0.0;  // LinearMatrix only

  double gamma_bar() const { return 1.0 - gamma; }
};

// Breaching probability of one target given both allocations there.
// Product form multiplies attack efficiency by defence inefficiency; the
// proportion form takes the attacker's share, with 0/0 at the origin
// defined as 0.
double breach_probability(const GameSpec& spec, double x_i, double y_i);

// Utility pair (U_A, U_D): weighted breach revenue minus resource costs
// for the attacker, the negated loss minus defence costs for the defender.
std::pair<double, double> utilities(const GameSpec& spec, const Allocation& alloc);

// Empty result means every structural assumption holds; otherwise each
// entry names one violated assumption.
std::vector<std::string> validate_spec(const GameSpec& spec);

// Throws InfeasibleSpec listing the violations, if any.
void require_valid(const GameSpec& spec);

// Feasibility of an allocation against the budgets (and the per-component
// probability caps of the matrix game).
bool allocation_feasible(const GameSpec& spec, const Allocation& alloc, double tol_budget = tol::kEquilibrium);

// Convenience builders used across tests and the corpus.
GameSpec make_product_spec(std::vector<double> weights, double c, double c_hat,
                           double x_budget, double y_budget,
                           EfficiencyFunction attack, EfficiencyFunction defence);
GameSpec make_proportion_spec(std::vector<double> weights, double c, double c_hat,
                              double x_budget, double y_budget,
                              EfficiencyFunction attack, EfficiencyFunction defence);
GameSpec make_linear_spec(std::vector<double> weights, double c, double c_hat,
                          double x_budget, double y_budget, double gamma);

}  // namespace secgame
