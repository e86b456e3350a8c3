#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "secgame/json_io.hpp"
#include "secgame/oracle.hpp"
#include "secgame/solve.hpp"
#include "secgame/sweep.hpp"

namespace {

using nlohmann::json;
using namespace secgame;

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerification = 4;

std::string human_summary(const GameSpec& spec, const Equilibrium& eq) {
  std::ostringstream os;
  os << to_string(spec.model) << " instance, " << spec.n << " target(s)\n";
  os << "  domain " << to_string(eq.budget_domain) << ", lambda " << eq.lambda
     << ", rho " << eq.rho << ", supports K_A=" << eq.k_attacker
     << " K_D=" << eq.k_defender << "\n";
  os << "  U_A " << eq.utility_attacker << ", U_D " << eq.utility_defender << "\n";
  os << "  x:";
  for (double v : eq.alloc.x) os << ' ' << v;
  os << "\n  y:";
  for (double v : eq.alloc.y) os << ' ' << v;
  os << "\n";
  if (eq.multiplicity == Multiplicity::BoundaryFamily && eq.free_interval) {
    os << "  boundary family: " << eq.free_interval->parameter << " in ["
       << eq.free_interval->lo << ", " << eq.free_interval->hi << "]\n";
  }
  return os.str();
}

int cmd_solve(const std::string& spec_path, const std::string& out_path,
              unsigned seed) {
  GameSpec spec;
  try {
    spec = load_spec(spec_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const auto violations = validate_spec(spec);
  if (!violations.empty()) {
    std::cerr << "invalid spec:\n";
    for (const auto& v : violations) std::cerr << "  - " << v << "\n";
    return kExitValidation;
  }
  Equilibrium eq;
  try {
    eq = solve(spec);
  } catch (const InfeasibleSpec& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  const std::string report = equilibrium_to_json(eq, seed).dump(2) + "\n";
  if (out_path.empty()) {
    std::cerr << human_summary(spec, eq);
    std::cout << report;
  } else {
    write_text_file(out_path, report);
    std::cout << human_summary(spec, eq);
    std::cout << "equilibrium report written to " << out_path << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& spec_path, const std::string& eq_path,
               const std::string& out_path, double tol_factor, unsigned seed) {
  GameSpec spec;
  Equilibrium eq;
  try {
    spec = load_spec(spec_path);
    eq = load_equilibrium(eq_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const auto violations = validate_spec(spec);
  if (!violations.empty()) {
    std::cerr << "invalid spec: " << violations.front() << "\n";
    return kExitValidation;
  }
  VerificationReport rep;
  try {
    rep = verify_equilibrium(spec, eq, tol_factor);
  } catch (const std::exception& e) {
    std::cerr << "verification error: " << e.what() << "\n";
    return kExitSolver;
  }
  const std::string text = report_to_json(rep, seed).dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
  if (!rep.passed()) {
    std::cerr << "verification failed: " << rep.first_failure()->name << "\n";
    return kExitVerification;
  }
  return 0;
}

int cmd_sweep(const std::string& request_path, const std::string& out_path) {
  SweepRequest req;
  try {
    std::ifstream in(request_path);
    if (!in) throw DomainError("cannot open request file: " + request_path);
    json j;
    in >> j;
    req.spec = spec_from_json(j.at("spec"));
    const std::string axis = j.at("axis").get<std::string>();
    if (axis == "BudgetAttacker")
      req.axis = SweepAxis::BudgetAttacker;
    else if (axis == "BudgetDefender")
      req.axis = SweepAxis::BudgetDefender;
    else if (axis == "Both")
      req.axis = SweepAxis::Both;
    else
      throw DomainError("unknown sweep axis: " + axis);
    const auto& range = j.at("range");
    req.lo = range.at("lo").get<double>();
    req.hi = range.at("hi").get<double>();
    req.steps = range.at("steps").get<int>();
    if (j.contains("outputs")) {
      req.outputs = SweepOutputs{false, false, false, false};
      for (const auto& name : j.at("outputs")) {
        const std::string s = name.get<std::string>();
        if (s == "NE")
          req.outputs.ne = true;
        else if (s == "Utilities")
          req.outputs.utilities = true;
        else if (s == "Duals")
          req.outputs.duals = true;
        else if (s == "Domain")
          req.outputs.domain = true;
        else
          throw DomainError("unknown sweep output group: " + s);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const auto violations = validate_spec(req.spec);
  if (!violations.empty()) {
    std::cerr << "invalid spec: " << violations.front() << "\n";
    return kExitValidation;
  }
  try {
    if (out_path.empty()) {
      run_sweep(req, std::cout);
    } else {
      std::ostringstream os;
      run_sweep(req, os);
      write_text_file(out_path, os.str());
    }
  } catch (const std::exception& e) {
    std::cerr << "sweep failure: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}

int cmd_regions(const std::string& spec_path, const std::string& out_path,
                const std::string& range, int steps) {
  GameSpec spec;
  try {
    spec = load_spec(spec_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const auto violations = validate_spec(spec);
  if (!violations.empty()) {
    std::cerr << "invalid spec: " << violations.front() << "\n";
    return kExitValidation;
  }
  std::vector<double> grid;
  if (range.empty()) {
    grid = default_lambda_grid(spec, steps);
  } else {
    double lo = 0.0, hi = 0.0;
    if (std::sscanf(range.c_str(), "%lf:%lf", &lo, &hi) != 2 || !(lo < hi)) {
      std::cerr << "error: --range expects lo:hi with lo < hi\n";
      return 1;
    }
    grid.resize(static_cast<size_t>(steps));
    for (int s = 0; s < steps; ++s)
      grid[static_cast<size_t>(s)] = lo + (hi - lo) * s / (steps - 1);
  }
  try {
    if (out_path.empty()) {
      write_region_boundaries_csv(spec, grid, std::cout);
    } else {
      std::ostringstream os;
      write_region_boundaries_csv(spec, grid, os);
      write_text_file(out_path, os.str());
    }
  } catch (const std::exception& e) {
    std::cerr << "regions failure: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained attacker-defender resource allocation solver"};
  app.require_subcommand(1);

  std::string spec_path, eq_path, out_path, request_path, range;
  unsigned seed = 0;
  double tol_factor = 1e-4;
  int samples = 5;
  int steps = 50;

  auto* solve_cmd = app.add_subcommand("solve", "compute the equilibrium of a spec");
  solve_cmd->add_option("--spec", spec_path, "game spec JSON")->required();
  solve_cmd->add_option("--out", out_path, "equilibrium report output path");
  solve_cmd->add_option("--seed", seed, "random seed recorded in reports");

  auto* verify_cmd =
      app.add_subcommand("verify", "check an equilibrium report against a spec");
  verify_cmd->add_option("--spec", spec_path, "game spec JSON")->required();
  verify_cmd->add_option("--eq", eq_path, "equilibrium report JSON")->required();
  verify_cmd->add_option("--out", out_path, "verification report output path");
  verify_cmd->add_option("--tol", tol_factor, "deviation-gain acceptance factor");
  verify_cmd->add_option("--seed", seed, "random seed recorded in reports");

  auto* sweep_cmd = app.add_subcommand("sweep", "budget sweep to CSV");
  sweep_cmd->add_option("--request", request_path, "sweep request JSON")->required();
  sweep_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

  auto* regions_cmd =
      app.add_subcommand("regions", "per-target region boundary table to CSV");
  regions_cmd->add_option("--spec", spec_path, "game spec JSON")->required();
  regions_cmd->add_option("--out", out_path, "CSV output path (default stdout)");
  regions_cmd->add_option("--range", range, "lambda range lo:hi (default automatic)");
  regions_cmd->add_option("--steps", steps, "lambda grid size");

  auto* enum_cmd = app.add_subcommand(
      "enumerate", "sample the equilibrium family of a boundary matrix-game spec");
  enum_cmd->add_option("--spec", spec_path, "game spec JSON")->required();
  enum_cmd->add_option("--samples", samples, "number of family samples");
  enum_cmd->add_option("--out", out_path, "JSON output path (default stdout)");
  enum_cmd->add_option("--seed", seed, "random seed recorded in reports");

  CLI11_PARSE(app, argc, argv);

  if (solve_cmd->parsed()) return cmd_solve(spec_path, out_path, seed);
  if (verify_cmd->parsed())
    return cmd_verify(spec_path, eq_path, out_path, tol_factor, seed);
  if (sweep_cmd->parsed()) return cmd_sweep(request_path, out_path);
  if (regions_cmd->parsed()) return cmd_regions(spec_path, out_path, range, steps);
  if (enum_cmd->parsed()) {
    GameSpec spec;
    try {
      spec = secgame::load_spec(spec_path);
      secgame::require_valid(spec);
    } catch (const secgame::InfeasibleSpec& e) {
      std::cerr << "invalid spec: " << e.what() << "\n";
      return kExitValidation;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    try {
      const auto family = secgame::solve_linear(spec);
      if (family.kind == secgame::LinearNEKind::Interior) {
        std::cerr << "the equilibrium is unique; nothing to enumerate\n";
        return kExitSolver;
      }
      nlohmann::json out = nlohmann::json::array();
      for (const auto& eq : secgame::enumerate_boundary_nes(spec, family, samples))
        out.push_back(secgame::equilibrium_to_json(eq, seed));
      const std::string text = out.dump(2) + "\n";
      if (out_path.empty())
        std::cout << text;
      else
        secgame::write_text_file(out_path, text);
    } catch (const std::exception& e) {
      std::cerr << "solver failure: " << e.what() << "\n";
      return kExitSolver;
    }
  }
  return 0;
}
