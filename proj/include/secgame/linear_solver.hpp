#pragma once

#include <utility>
#include <vector>

#include "secgame/model.hpp"

namespace secgame {

// Closed-form equilibrium computation for the matrix-form intrusion
// detection game (linear efficiencies, per-target attack/detect
// probabilities under a shared budget).

// Budget breakpoints at which the equilibrium support size changes.
// attacker(k) is defined for k = 0..N, defender(k) for k = 1..N+1.
struct ThresholdTable {
  std::vector<double> p_attacker;  // [k]   = attacker threshold k, k = 0..N
  std::vector<double> p_defender;  // [k-1] = defender threshold k, k = 1..N+1

  double attacker(int k) const { return p_attacker.at(static_cast<size_t>(k)); }
  double defender(int k) const { return p_defender.at(static_cast<size_t>(k - 1)); }
};

ThresholdTable thresholds(const GameSpec& spec);

enum class LinearNEKind { Interior, AttackerBoundary, DefenderBoundary };

// Solution of a linear instance: a single interior equilibrium, or a
// one-parameter family when a budget sits exactly on a threshold.
struct LinearNEFamily {
  LinearNEKind kind = LinearNEKind::Interior;
  int k = 0;  // support parameter of the matched case
  Equilibrium representative;
  std::optional<std::pair<double, double>> free_interval;
};

LinearNEFamily solve_linear(const GameSpec& spec);

// Equally spaced samples of a boundary family's free parameter, mapped to
// full equilibria. Endpoints included.
std::vector<Equilibrium> enumerate_boundary_nes(const GameSpec& spec,
                                                const LinearNEFamily& family,
                                                int samples);

double kkt_residual_linear(const GameSpec& spec, const Equilibrium& eq);

}  // namespace secgame
