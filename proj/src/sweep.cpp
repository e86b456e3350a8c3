#include "secgame/sweep.hpp"

#include <algorithm>
#include <cstdio>

#include "secgame/regions.hpp"
#include "secgame/solve.hpp"

namespace secgame {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

void emit_row(const SweepRequest& req, std::ostream& out,
              const std::vector<double>& axis_values, const GameSpec& point) {
  std::vector<std::string> cells;
  for (double v : axis_values) cells.push_back(num(v));
  std::string error;
  Equilibrium eq;
  bool solved = false;
  try {
    eq = solve(point);
    solved = true;
  } catch (const std::exception& e) {
    error = sanitize(e.what());
  }
  const auto& o = req.outputs;
  auto blank = [&](int count) {
    for (int i = 0; i < count; ++i) cells.emplace_back();
  };
  if (o.duals) {
    if (solved) {
      cells.push_back(num(eq.lambda));
      cells.push_back(num(eq.rho));
      cells.push_back(std::to_string(eq.k_attacker));
      cells.push_back(std::to_string(eq.k_defender));
    } else {
      blank(4);
    }
  }
  if (o.domain) {
    if (solved)
      cells.emplace_back(to_string(eq.budget_domain));
    else
      blank(1);
  }
  if (o.utilities) {
    if (solved) {
      cells.push_back(num(eq.utility_attacker));
      cells.push_back(num(eq.utility_defender));
    } else {
      blank(2);
    }
  }
  if (o.ne) {
    if (solved) {
      for (double v : eq.alloc.x) cells.push_back(num(v));
      for (double v : eq.alloc.y) cells.push_back(num(v));
    } else {
      blank(2 * point.n);
    }
  }
  cells.push_back(error);
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

void run_sweep(const SweepRequest& req, std::ostream& out) {
  if (!(req.lo < req.hi) || req.steps < 2)
    throw DomainError("sweep range needs lo < hi and at least two steps");

  std::vector<std::string> header;
  if (req.axis == SweepAxis::BudgetAttacker || req.axis == SweepAxis::Both)
    header.push_back("x_a");
  if (req.axis == SweepAxis::BudgetDefender || req.axis == SweepAxis::Both)
    header.push_back("y_d");
  if (req.outputs.duals) {
    header.insert(header.end(), {"lambda", "rho", "k_a", "k_d"});
  }
  if (req.outputs.domain) header.push_back("domain");
  if (req.outputs.utilities) header.insert(header.end(), {"u_a", "u_d"});
  if (req.outputs.ne) {
    for (int i = 1; i <= req.spec.n; ++i) header.push_back("x_" + std::to_string(i));
    for (int i = 1; i <= req.spec.n; ++i) header.push_back("y_" + std::to_string(i));
  }
  header.push_back("error");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';

  auto grid_value = [&](int s) {
    return req.lo + (req.hi - req.lo) * s / (req.steps - 1);
  };

  if (req.axis == SweepAxis::Both) {
    for (int sa = 0; sa < req.steps; ++sa) {
      for (int sd = 0; sd < req.steps; ++sd) {
        GameSpec point = req.spec;
        point.budget_attacker = grid_value(sa);
        point.budget_defender = grid_value(sd);
        emit_row(req, out, {point.budget_attacker, point.budget_defender}, point);
      }
    }
    return;
  }
  for (int s = 0; s < req.steps; ++s) {
    GameSpec point = req.spec;
    if (req.axis == SweepAxis::BudgetAttacker)
      point.budget_attacker = grid_value(s);
    else
      point.budget_defender = grid_value(s);
    emit_row(req, out,
             {req.axis == SweepAxis::BudgetAttacker ? point.budget_attacker
                                                    : point.budget_defender},
             point);
  }
}

void write_region_boundaries_csv(const GameSpec& spec,
                                 std::span<const double> lambda_grid,
                                 std::ostream& out) {
  out << "target,lambda,r1_lambda_threshold,r2_rho_boundary\n";
  for (int i = 0; i < spec.n; ++i) {
    const auto rows = region_boundaries(i, spec, lambda_grid);
    for (const auto& r : rows) {
      out << (i + 1) << ',' << num(r.lambda) << ',' << num(r.r1_lambda_threshold)
          << ',' << num(r.r2_rho_boundary) << '\n';
    }
  }
}

std::vector<double> default_lambda_grid(const GameSpec& spec, int steps) {
  double hi = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    const double t = spec.weights[i] * spec.attack_eff.deriv_at_zero() *
                         spec.defence_eff.value(0.0) -
                     spec.cost_attacker;
    hi = std::max(hi, t);
  }
  hi = hi > 0.0 ? 1.2 * hi : 1.0;
  std::vector<double> grid(static_cast<size_t>(steps));
  for (int s = 0; s < steps; ++s) grid[static_cast<size_t>(s)] = hi * s / (steps - 1);
  return grid;
}

}  // namespace secgame
