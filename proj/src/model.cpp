#include "secgame/model.hpp"

#include <cmath>
#include <sstream>

namespace secgame {

double breach_probability(const GameSpec& spec, double x_i, double y_i) {
  switch (spec.model) {
    case BreachModel::ProductForm:
    case BreachModel::LinearMatrix:
      return spec.attack_eff.value(x_i) * spec.defence_eff.value(y_i);
    case BreachModel::ProportionForm: {
      const double f = spec.attack_eff.value(x_i);
      const double g = spec.defence_eff.g_value(y_i);
      if (f == 0.0) return 0.0;  // covers the 0/0 origin
      return f / (f + g);
    }
  }
  throw DomainError("unknown breaching model");
}

std::pair<double, double> utilities(const GameSpec& spec, const Allocation& alloc) {
  if (static_cast<int>(alloc.x.size()) != spec.n ||
      static_cast<int>(alloc.y.size()) != spec.n)
    throw DomainError("allocation size does not match the number of targets");
  double loss = 0.0, spend_a = 0.0, spend_d = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    loss += spec.weights[i] * breach_probability(spec, alloc.x[i], alloc.y[i]);
    spend_a += alloc.x[i];
    spend_d += alloc.y[i];
  }
  const double u_a = loss - spec.cost_attacker * spend_a;
  const double u_d = -loss - spec.cost_defender * spend_d;
  return {u_a, u_d};
}

namespace {

bool is_attack_family(const EfficiencyFunction& fn) { return fn.role == Role::Attack; }

void check_families(const GameSpec& spec, std::vector<std::string>& out) {
  const EffFamily af = spec.attack_eff.family;
  const EffFamily df = spec.defence_eff.family;
  if (!is_attack_family(spec.attack_eff)) out.push_back("attack_eff has a defence role");
  if (spec.defence_eff.role != Role::Defence) out.push_back("defence_eff has an attack role");
  switch (spec.model) {
    case BreachModel::ProductForm:
      if (af != EffFamily::ExpAttack)
        out.push_back("product-form attack efficiency must be an ExpAttack family");
      if (df != EffFamily::InvG && df != EffFamily::ExpG && df != EffFamily::QuadG)
        out.push_back("product-form defence must be InvG, ExpG or QuadG");
      break;
    case BreachModel::ProportionForm:
      if (af != EffFamily::ExpAttack && af != EffFamily::Power)
        out.push_back("proportion-form attack must be ExpAttack or Power");
      if (df != EffFamily::Power && df != EffFamily::InvG && df != EffFamily::ExpG &&
          df != EffFamily::QuadG)
        out.push_back("proportion-form defence must be Power, InvG, ExpG or QuadG");
      break;
    case BreachModel::LinearMatrix:
      if (af != EffFamily::Linear || df != EffFamily::Linear)
        out.push_back("matrix game requires linear efficiencies on both sides");
      break;
  }
  if (df == EffFamily::QuadG && !spec.defence_eff.domain_upper)
    out.push_back("QuadG requires a domain upper bound");
  if (spec.defence_eff.domain_upper && spec.defence_eff.theta > 0.0 &&
      df == EffFamily::QuadG &&
      *spec.defence_eff.domain_upper > 1.0 / spec.defence_eff.theta + 1e-15)
    out.push_back("QuadG domain upper bound exceeds 1/theta");
}

}  // namespace

std::vector<std::string> validate_spec(const GameSpec& spec) {
  std::vector<std::string> v;
  if (spec.n < 1) v.push_back("number of targets must be positive");
  if (static_cast<int>(spec.weights.size()) != spec.n)
    v.push_back("weights size differs from the number of targets");
  for (double w : spec.weights)
    if (!(w > 0.0)) {
      v.push_back("weights must be positive");
      break;
    }
  for (size_t i = 0; i + 1 < spec.weights.size(); ++i) {
    if (spec.weights[i] < spec.weights[i + 1]) {
      v.push_back("weights not descending");
      break;
    }
    if (spec.weights[i] == spec.weights[i + 1]) {
      v.push_back("weights tie (strict descending order required; perturb)");
      break;
    }
  }
  if (!(spec.cost_attacker >= 0.0)) v.push_back("attacker cost must be nonnegative");
  if (!(spec.cost_defender >= 0.0)) v.push_back("defender cost must be nonnegative");
  if (!(spec.budget_attacker > 0.0) || !std::isfinite(spec.budget_attacker))
    v.push_back("attacker budget must be positive and finite");
  if (!(spec.budget_defender > 0.0) || !std::isfinite(spec.budget_defender))
    v.push_back("defender budget must be positive and finite");

  check_families(spec, v);

  if (spec.model == BreachModel::LinearMatrix) {
    if (spec.gamma < 0.0 || spec.gamma >= 1.0)
      v.push_back("gamma must lie in [0, 1)");
    if (spec.budget_attacker > 1.0)
      v.push_back("attack probabilities cannot sum beyond 1");
    if (spec.budget_defender > static_cast<double>(spec.n))
      v.push_back("detection probabilities cannot sum beyond the target count");
    for (double w : spec.weights) {
      if (spec.gamma * w > spec.cost_attacker + 1e-15) {
        v.push_back("non-triviality gamma*w_i <= c fails");
        break;
      }
    }
    for (double w : spec.weights) {
      if (!(w > spec.cost_attacker)) {
        v.push_back("non-triviality w_i > c fails");
        break;
      }
    }
  }
  return v;
}

void require_valid(const GameSpec& spec) {
  auto v = validate_spec(spec);
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid game spec:";
  for (const auto& s : v) os << " [" << s << "]";
  throw InfeasibleSpec(os.str());
}

bool allocation_feasible(const GameSpec& spec, const Allocation& alloc, double tol_budget) {
  if (static_cast<int>(alloc.x.size()) != spec.n ||
      static_cast<int>(alloc.y.size()) != spec.n)
    return false;
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    if (alloc.x[i] < -tol_budget || alloc.y[i] < -tol_budget) return false;
    if (spec.model == BreachModel::LinearMatrix &&
        (alloc.x[i] > 1.0 + tol_budget || alloc.y[i] > 1.0 + tol_budget))
      return false;
    sx += alloc.x[i];
    sy += alloc.y[i];
  }
  return sx <= spec.budget_attacker + tol_budget && sy <= spec.budget_defender + tol_budget;
}

GameSpec make_product_spec(std::vector<double> weights, double c, double c_hat,
                           double x_budget, double y_budget,
                           EfficiencyFunction attack, EfficiencyFunction defence) {
  GameSpec s;
  s.n = static_cast<int>(weights.size());
  s.weights = std::move(weights);
  s.cost_attacker = c;
  s.cost_defender = c_hat;
  s.budget_attacker = x_budget;
  s.budget_defender = y_budget;
  s.model = BreachModel::ProductForm;
  s.attack_eff = attack;
  s.defence_eff = defence;
  return s;
}

GameSpec make_proportion_spec(std::vector<double> weights, double c, double c_hat,
                              double x_budget, double y_budget,
                              EfficiencyFunction attack, EfficiencyFunction defence) {
  GameSpec s = make_product_spec(std::move(weights), c, c_hat, x_budget, y_budget,
                                 attack, defence);
  s.model = BreachModel::ProportionForm;
  return s;
}

GameSpec make_linear_spec(std::vector<double> weights, double c, double c_hat,
                          double x_budget, double y_budget, double gamma) {
  GameSpec s = make_product_spec(std::move(weights), c, c_hat, x_budget, y_budget,
                                 EfficiencyFunction::linear_attack(),
                                 EfficiencyFunction::linear_defence(gamma));
  s.model = BreachModel::LinearMatrix;
  s.gamma = gamma;
  return s;
}

}  // namespace secgame
