#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace secgame {

// Breaching model of a game instance.
enum class BreachModel { ProductForm, ProportionForm, LinearMatrix };

// Efficiency-function families. Attack-role families evaluate the attack
// efficiency f; defence-role families evaluate the defence *inefficiency*
// (the complement 1 - g) in the product-form game, and expose the plain
// efficiency g through g_value()/g_deriv() for the proportion-form game.
enum class EffFamily { ExpAttack, InvG, ExpG, QuadG, Power, Linear };

enum class Role { Attack, Defence };

// Monotonicity class of the defender's relative ineffectiveness ratio
// g~'(y)/g~(y). Determines how the attacker orders his allocations across
// defended targets.
enum class RidClass { Increasing, Constant, Decreasing };

// Partition of the budget plane by whether each player's budget exceeds
// what he would spend unconstrained: D1 both sufficient, D2 attacker
// short, D3 defender short, D4 both short.
enum class BudgetDomain { D1, D2, D3, D4 };

// Per-target activity pattern at a given dual pair: R1 abandoned by both,
// R2 attacked only, R3 defended only (empty when f(0)=0), R4 contested.
enum class RegionTag { R1, R2, R3, R4 };

enum class Multiplicity { Unique, BoundaryFamily };

enum class Player { Attacker, Defender };

// --- error taxonomy ---------------------------------------------------

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoEquilibriumFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Linear-game budget point not covered by any closed-form case.
struct UnhandledBudgetPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- numeric policy ---------------------------------------------------

namespace tol {
// Root-finding on scalars (bisection/Newton residual targets).
inline constexpr double kRoot = 1e-9;
// Equilibrium-level assertions (KKT residuals, slackness, feasibility).
inline constexpr double kEquilibrium = 1e-6;
// Absolute width at which a dual bisection stops.
inline constexpr double kDualWidth = 1e-10;
// Iteration caps.
inline constexpr int kDualIters = 200;
inline constexpr int kInnerIterCap = 10000;
// |X_A - P_A(k)| below this counts as sitting exactly on a threshold.
inline constexpr double kBoundaryDetect = 1e-12;
// Allocations below this are treated as zero support.
inline constexpr double kSupport = 1e-12;
}  // namespace tol

// --- core value types --------------------------------------------------

struct Allocation {
  std::vector<double> x;  // attacker resources per target
  std::vector<double> y;  // defender resources per target
};

struct DualPair {
  double lambda = 0.0;  // attacker budget shadow price
  double rho = 0.0;     // defender budget shadow price
};

// Free parameter of a boundary equilibrium family.
struct FreeInterval {
  double lo = 0.0;
  double hi = 0.0;
  std::string parameter;  // "Ytilde" (attacker boundary) or "Xtilde"
};

struct Equilibrium {
  Allocation alloc;
  double lambda = 0.0;
  double rho = 0.0;
  int k_attacker = 0;
  int k_defender = 0;
  BudgetDomain budget_domain = BudgetDomain::D1;
  double utility_attacker = 0.0;
  double utility_defender = 0.0;
  Multiplicity multiplicity = Multiplicity::Unique;
  std::optional<FreeInterval> free_interval;
};

struct BudgetDomainReport {
  BudgetDomain domain = BudgetDomain::D1;
  double x_suf = 0.0;
  double y_suf = 0.0;
  // Present exactly when the other player's budget is insufficient.
  std::optional<double> x_hat_suf;
  std::optional<double> y_hat_suf;
};

struct InvariantResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  double eps_attacker = 0.0;
  double eps_defender = 0.0;
  double kkt_max_residual = 0.0;
  std::vector<InvariantResult> invariant_results;

  bool passed() const {
    for (const auto& r : invariant_results)
      if (!r.pass) return false;
    return true;
  }
  const InvariantResult* first_failure() const {
    for (const auto& r : invariant_results)
      if (!r.pass) return &r;
    return nullptr;
  }
};

inline const char* to_string(BudgetDomain d) {
  switch (d) {
    case BudgetDomain::D1: return "D1";
    case BudgetDomain::D2: return "D2";
    case BudgetDomain::D3: return "D3";
    case BudgetDomain::D4: return "D4";
  }
  return "?";
}

inline const char* to_string(RegionTag r) {
  switch (r) {
    case RegionTag::R1: return "R1";
    case RegionTag::R2: return "R2";
    case RegionTag::R3: return "R3";
    case RegionTag::R4: return "R4";
  }
  return "?";
}

inline const char* to_string(BreachModel m) {
  switch (m) {
    case BreachModel::ProductForm: return "ProductForm";
    case BreachModel::ProportionForm: return "ProportionForm";
    case BreachModel::LinearMatrix: return "LinearMatrix";
  }
  return "?";
}

inline const char* to_string(RidClass c) {
  switch (c) {
    case RidClass::Increasing: return "Increasing";
    case RidClass::Constant: return "Constant";
    case RidClass::Decreasing: return "Decreasing";
  }
  return "?";
}

}  // namespace secgame
