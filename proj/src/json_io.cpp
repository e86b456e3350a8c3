#include "secgame/json_io.hpp"

#include <fstream>
#include <sstream>

namespace secgame {

using nlohmann::json;

namespace {

json eff_to_json(const EfficiencyFunction& fn) {
  json j;
  switch (fn.family) {
    case EffFamily::ExpAttack:
      j["family"] = "ExpAttack";
      if (!fn.exp_form) j["a"] = fn.a;
      break;
    case EffFamily::InvG:
      j["family"] = "InvG";
      j["theta"] = fn.theta;
      break;
    case EffFamily::ExpG:
      j["family"] = "ExpG";
      j["theta"] = fn.theta;
      break;
    case EffFamily::QuadG:
      j["family"] = "QuadG";
      j["theta"] = fn.theta;
      if (fn.domain_upper) j["domain_upper"] = *fn.domain_upper;
      break;
    case EffFamily::Power:
      j["family"] = "Power";
      j["a"] = fn.a;
      break;
    case EffFamily::Linear:
      j["family"] = "Linear";
      break;
  }
  return j;
}

EfficiencyFunction eff_from_json(const json& j, Role role, double gamma) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "ExpAttack") {
    if (j.contains("a")) return EfficiencyFunction::exp_attack_pow(j.at("a").get<double>());
    return EfficiencyFunction::exp_attack();
  }
  if (family == "InvG") return EfficiencyFunction::inv_g(j.at("theta").get<double>());
  if (family == "ExpG") return EfficiencyFunction::exp_g(j.at("theta").get<double>());
  if (family == "QuadG") {
    auto fn = EfficiencyFunction::quad_g(j.at("theta").get<double>());
    if (j.contains("domain_upper")) {
      const double du = j.at("domain_upper").get<double>();
      if (du <= 0.0 || du > *fn.domain_upper + 1e-15)
        throw DomainError("QuadG domain_upper must lie in (0, 1/theta]");
      fn.domain_upper = du;
    }
    return fn;
  }
  if (family == "Power")
    return EfficiencyFunction::power(j.at("a").get<double>(), role);
  if (family == "Linear")
    return role == Role::Attack ? EfficiencyFunction::linear_attack()
                                : EfficiencyFunction::linear_defence(gamma);
  throw DomainError("unknown efficiency family: " + family);
}

BreachModel model_from_string(const std::string& s) {
  if (s == "ProductForm") return BreachModel::ProductForm;
  if (s == "ProportionForm") return BreachModel::ProportionForm;
  if (s == "LinearMatrix") return BreachModel::LinearMatrix;
  throw DomainError("unknown breaching model: " + s);
}

BudgetDomain domain_from_string(const std::string& s) {
  if (s == "D1") return BudgetDomain::D1;
  if (s == "D2") return BudgetDomain::D2;
  if (s == "D3") return BudgetDomain::D3;
  if (s == "D4") return BudgetDomain::D4;
  throw DomainError("unknown budget domain: " + s);
}

}  // namespace

json spec_to_json(const GameSpec& spec) {
  json j;
  j["n"] = spec.n;
  j["weights"] = spec.weights;
  j["cost_attacker"] = spec.cost_attacker;
  j["cost_defender"] = spec.cost_defender;
  j["budget_attacker"] = spec.budget_attacker;
  j["budget_defender"] = spec.budget_defender;
  j["model"] = to_string(spec.model);
  j["attack_eff"] = eff_to_json(spec.attack_eff);
  j["defence_eff"] = eff_to_json(spec.defence_eff);
  if (spec.model == BreachModel::LinearMatrix) j["gamma"] = spec.gamma;
  return j;
}

GameSpec spec_from_json(const json& j) {
  GameSpec spec;
  spec.n = j.at("n").get<int>();
  spec.weights = j.at("weights").get<std::vector<double>>();
  spec.cost_attacker = j.at("cost_attacker").get<double>();
  spec.cost_defender = j.at("cost_defender").get<double>();
  spec.budget_attacker = j.at("budget_attacker").get<double>();
  spec.budget_defender = j.at("budget_defender").get<double>();
  spec.model = model_from_string(j.at("model").get<std::string>());
  spec.gamma = j.value("gamma", 0.0);
  spec.attack_eff = eff_from_json(j.at("attack_eff"), Role::Attack, spec.gamma);
  spec.defence_eff = eff_from_json(j.at("defence_eff"), Role::Defence, spec.gamma);
  return spec;
}

json equilibrium_to_json(const Equilibrium& eq, unsigned seed) {
  json j;
  j["x"] = eq.alloc.x;
  j["y"] = eq.alloc.y;
  j["lambda"] = eq.lambda;
  j["rho"] = eq.rho;
  j["k_attacker"] = eq.k_attacker;
  j["k_defender"] = eq.k_defender;
  j["domain"] = to_string(eq.budget_domain);
  j["utility_attacker"] = eq.utility_attacker;
  j["utility_defender"] = eq.utility_defender;
  j["multiplicity"] =
      eq.multiplicity == Multiplicity::Unique ? "Unique" : "BoundaryFamily";
  if (eq.free_interval) {
    j["free_interval"] = {{"lo", eq.free_interval->lo},
                          {"hi", eq.free_interval->hi},
                          {"parameter", eq.free_interval->parameter}};
  }
  j["seed"] = seed;
  return j;
}

Equilibrium equilibrium_from_json(const json& j) {
  Equilibrium eq;
  eq.alloc.x = j.at("x").get<std::vector<double>>();
  eq.alloc.y = j.at("y").get<std::vector<double>>();
  eq.lambda = j.value("lambda", 0.0);
  eq.rho = j.value("rho", 0.0);
  eq.k_attacker = j.value("k_attacker", 0);
  eq.k_defender = j.value("k_defender", 0);
  eq.budget_domain = domain_from_string(j.value("domain", "D1"));
  eq.utility_attacker = j.value("utility_attacker", 0.0);
  eq.utility_defender = j.value("utility_defender", 0.0);
  eq.multiplicity = j.value("multiplicity", "Unique") == std::string("BoundaryFamily")
                        ? Multiplicity::BoundaryFamily
                        : Multiplicity::Unique;
  if (j.contains("free_interval")) {
    const auto& fi = j.at("free_interval");
    eq.free_interval = FreeInterval{fi.at("lo").get<double>(), fi.at("hi").get<double>(),
                                    fi.value("parameter", "")};
  }
  return eq;
}

json report_to_json(const VerificationReport& rep, unsigned seed) {
  json j;
  j["eps_attacker"] = rep.eps_attacker;
  j["eps_defender"] = rep.eps_defender;
  j["kkt_max_residual"] = rep.kkt_max_residual;
  json inv = json::array();
  for (const auto& r : rep.invariant_results)
    inv.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  j["invariants"] = inv;
  j["passed"] = rep.passed();
  j["seed"] = seed;
  return j;
}

GameSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open spec file: " + path);
  json j;
  in >> j;
  return spec_from_json(j);
}

Equilibrium load_equilibrium(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open equilibrium file: " + path);
  json j;
  in >> j;
  return equilibrium_from_json(j);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open output file: " + path);
  out << content;
}

}  // namespace secgame
