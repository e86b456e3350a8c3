#pragma once

#include <optional>

#include "secgame/types.hpp"

namespace secgame {

// A tagged efficiency-function family with its calculus: value, first
// derivative, and inverse of the derivative. Immutable after construction.
//
// Attack-role families (value = f):
//   ExpAttack            f(x) = 1 - e^{-x}          (no parameter)
//   ExpAttack with a     f(x) = 1 - (1+x)^{-a}
//   Power with a         f(x) = x^a, 0 < a <= 1     (proportion form only)
//   Linear               f(x) = x                   (matrix game only)
//
// Defence-role families (value = complement inefficiency 1 - g):
//   InvG with theta      1/(1 + theta*y)
//   ExpG with theta      e^{-theta*y}
//   QuadG with theta     (1 - theta*y)^2 on [0, 1/theta)
//   Linear with gamma    1 - (1-gamma)*y            (matrix game only)
//   Power with a         defence efficiency g(y) = y^a directly
struct EfficiencyFunction {
  EffFamily family = EffFamily::ExpAttack;
  Role role = Role::Attack;
  // Family parameters. `a` for ExpAttack (when finite) and Power, `theta`
  // for InvG/ExpG/QuadG. Linear keeps slope coefficients: value is
  // b_intercept - b_slope*z for defence, b_slope*z for attack.
  double a = 0.0;
  double theta = 0.0;
  double b_slope = 1.0;
  double b_intercept = 1.0;
  bool exp_form = false;  // ExpAttack without a parameter: 1 - e^{-x}
  std::optional<double> domain_upper;

  // f(z), or the defence inefficiency for defence-role product families.
  double value(double z) const;
  // Analytic first derivative of value().
  double deriv(double z) const;
  // Inverse of deriv(). Values beyond the slope at zero clamp to zero
  // (the "allocate nothing" branch of the equilibrium conditions);
  // values outside the achievable range raise RangeError.
  double inv_deriv(double v) const;

  // Plain defence efficiency g and g' for the proportion-form game.
  double g_value(double z) const;
  double g_deriv(double z) const;

  // Slope at the origin (the largest |derivative| the family attains).
  double deriv_at_zero() const;

  static EfficiencyFunction exp_attack();            // 1 - e^{-x}
  static EfficiencyFunction exp_attack_pow(double a);
  static EfficiencyFunction inv_g(double theta);
  static EfficiencyFunction exp_g(double theta);
  static EfficiencyFunction quad_g(double theta);
  static EfficiencyFunction power(double a, Role role);
  static EfficiencyFunction linear_attack();
  static EfficiencyFunction linear_defence(double gamma);

 private:
  void check_domain(double z) const;
};

// Monotonicity class of the ratio deriv/value for a product-form defence
// family. InvG/ExpG/QuadG are classified analytically; Linear from the
// sampled sign of the ratio's derivative on its valid domain.
RidClass rid_class(const EfficiencyFunction& fn);

}  // namespace secgame
