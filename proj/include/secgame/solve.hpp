#pragma once

#include "secgame/linear_solver.hpp"
#include "secgame/product_solver.hpp"
#include "secgame/proportion_solver.hpp"

namespace secgame {

// Model dispatcher. Boundary families of the matrix game come back as
// their representative member with the free interval attached.
inline Equilibrium solve(const GameSpec& spec) {
  switch (spec.model) {
    case BreachModel::ProductForm:
      return solve_product(spec);
    case BreachModel::ProportionForm:
      return solve_proportion(spec);
    case BreachModel::LinearMatrix:
      return solve_linear(spec).representative;
  }
  throw DomainError("unknown breaching model");
}

}  // namespace secgame
