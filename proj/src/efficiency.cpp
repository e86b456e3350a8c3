#include "secgame/efficiency.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace secgame {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad_value(const char* what, double v) {
  throw RangeError(std::string(what) + " (got " + std::to_string(v) + ")");
}
}  // namespace

void EfficiencyFunction::check_domain(double z) const {
  if (z < 0.0) throw DomainError("efficiency argument must be nonnegative");
  if (domain_upper) {
    // QuadG loses convexity of the complement beyond 1/theta; evaluation
    // there is an error, never a silent clamp.
    const bool open_end = (family == EffFamily::QuadG);
    if (open_end ? z >= *domain_upper : z > *domain_upper)
      throw DomainError("efficiency argument beyond the valid domain");
  }
}

double EfficiencyFunction::value(double z) const {
  check_domain(z);
  switch (family) {
    case EffFamily::ExpAttack:
      return exp_form ? 1.0 - std::exp(-z) : 1.0 - std::pow(1.0 + z, -a);
    case EffFamily::InvG:
      return 1.0 / (1.0 + theta * z);
    case EffFamily::ExpG:
      return std::exp(-theta * z);
    case EffFamily::QuadG: {
      const double u = 1.0 - theta * z;
      return u * u;
    }
    case EffFamily::Power:
      return std::pow(z, a);
    case EffFamily::Linear:
      return role == Role::Attack ? b_slope * z : b_intercept - b_slope * z;
  }
  throw DomainError("unknown efficiency family");
}

double EfficiencyFunction::deriv(double z) const {
  check_domain(z);
  switch (family) {
    case EffFamily::ExpAttack:
      return exp_form ? std::exp(-z) : a * std::pow(1.0 + z, -(a + 1.0));
    case EffFamily::InvG: {
      const double u = 1.0 + theta * z;
      return -theta / (u * u);
    }
    case EffFamily::ExpG:
      return -theta * std::exp(-theta * z);
    case EffFamily::QuadG:
      return -2.0 * theta * (1.0 - theta * z);
    case EffFamily::Power:
      if (z == 0.0) return a < 1.0 ? kInf : 1.0;
      return a * std::pow(z, a - 1.0);
    case EffFamily::Linear:
      return role == Role::Attack ? b_slope : -b_slope;
  }
  throw DomainError("unknown efficiency family");
}

double EfficiencyFunction::deriv_at_zero() const {
  switch (family) {
    case EffFamily::ExpAttack:
      return exp_form ? 1.0 : a;
    case EffFamily::InvG:
      return -theta;
    case EffFamily::ExpG:
      return -theta;
    case EffFamily::QuadG:
      return -2.0 * theta;
    case EffFamily::Power:
      return a < 1.0 ? kInf : 1.0;
    case EffFamily::Linear:
      return role == Role::Attack ? b_slope : -b_slope;
  }
  throw DomainError("unknown efficiency family");
}

double EfficiencyFunction::inv_deriv(double v) const {
  if (family == EffFamily::Power) {
    // The power family keeps a positive slope in either role.
    if (v <= 0.0) bad_value("derivative value outside the power-family range", v);
    if (a == 1.0) {
      if (v >= 1.0) return 0.0;
      bad_value("constant-slope family has no interior inverse", v);
    }
    return std::pow(v / a, 1.0 / (a - 1.0));
  }
  if (role == Role::Attack) {
    // f' is positive and decreasing from f'(0). Requests at or above the
    // origin slope mean "allocate nothing".
    if (v <= 0.0) bad_value("derivative value outside attack range", v);
    switch (family) {
      case EffFamily::ExpAttack:
        if (exp_form) return v >= 1.0 ? 0.0 : -std::log(v);
        if (v >= a) return 0.0;
        return std::pow(a / v, 1.0 / (a + 1.0)) - 1.0;
      case EffFamily::Power:
        if (a == 1.0) {
          if (v >= 1.0) return 0.0;
          bad_value("constant-slope family has no interior inverse", v);
        }
        return std::pow(v / a, 1.0 / (a - 1.0));
      case EffFamily::Linear:
        if (v >= b_slope) return 0.0;
        bad_value("constant-slope family has no interior inverse", v);
      default:
        break;
    }
    throw RangeError("inverse derivative undefined for this family/role");
  }
  // Defence complement: derivative is negative, increasing toward 0.
  // Requests at or below the slope at zero mean "allocate nothing".
  if (v >= 0.0) bad_value("derivative value outside defence range", v);
  switch (family) {
    case EffFamily::InvG:
      if (v <= -theta) return 0.0;
      return (std::sqrt(-theta / v) - 1.0) / theta;
    case EffFamily::ExpG:
      if (v <= -theta) return 0.0;
      return -std::log(-v / theta) / theta;
    case EffFamily::QuadG:
      if (v <= -2.0 * theta) return 0.0;
      return (1.0 + v / (2.0 * theta)) / theta;
    case EffFamily::Linear:
      if (v <= -b_slope) return 0.0;
      bad_value("constant-slope family has no interior inverse", v);
    default:
      break;
  }
  throw RangeError("inverse derivative undefined for this family/role");
}

double EfficiencyFunction::g_value(double z) const {
  if (role != Role::Defence) throw DomainError("g_value needs a defence family");
  if (family == EffFamily::Power) return value(z);
  return 1.0 - value(z);
}

double EfficiencyFunction::g_deriv(double z) const {
  if (role != Role::Defence) throw DomainError("g_deriv needs a defence family");
  if (family == EffFamily::Power) return deriv(z);
  return -deriv(z);
}

EfficiencyFunction EfficiencyFunction::exp_attack() {
  EfficiencyFunction fn;
  fn.family = EffFamily::ExpAttack;
  fn.role = Role::Attack;
  fn.exp_form = true;
  return fn;
}

EfficiencyFunction EfficiencyFunction::exp_attack_pow(double a) {
  if (a <= 0.0) throw DomainError("ExpAttack exponent must be positive");
  EfficiencyFunction fn;
  fn.family = EffFamily::ExpAttack;
  fn.role = Role::Attack;
  fn.a = a;
  return fn;
}

EfficiencyFunction EfficiencyFunction::inv_g(double theta) {
  if (theta <= 0.0) throw DomainError("InvG theta must be positive");
  EfficiencyFunction fn;
  fn.family = EffFamily::InvG;
  fn.role = Role::Defence;
  fn.theta = theta;
  return fn;
}

EfficiencyFunction EfficiencyFunction::exp_g(double theta) {
  if (theta <= 0.0) throw DomainError("ExpG theta must be positive");
  EfficiencyFunction fn;
  fn.family = EffFamily::ExpG;
  fn.role = Role::Defence;
  fn.theta = theta;
  return fn;
}

EfficiencyFunction EfficiencyFunction::quad_g(double theta) {
  if (theta <= 0.0) throw DomainError("QuadG theta must be positive");
  EfficiencyFunction fn;
  fn.family = EffFamily::QuadG;
  fn.role = Role::Defence;
  fn.theta = theta;
  fn.domain_upper = 1.0 / theta;
  return fn;
}

EfficiencyFunction EfficiencyFunction::power(double a, Role role) {
  if (a <= 0.0 || a > 1.0) throw DomainError("Power exponent must be in (0, 1]");
  EfficiencyFunction fn;
  fn.family = EffFamily::Power;
  fn.role = role;
  fn.a = a;
  return fn;
}

EfficiencyFunction EfficiencyFunction::linear_attack() {
  EfficiencyFunction fn;
  fn.family = EffFamily::Linear;
  fn.role = Role::Attack;
  fn.b_slope = 1.0;
  return fn;
}

EfficiencyFunction EfficiencyFunction::linear_defence(double gamma) {
  if (gamma < 0.0 || gamma >= 1.0) throw DomainError("gamma must lie in [0, 1)");
  EfficiencyFunction fn;
  fn.family = EffFamily::Linear;
  fn.role = Role::Defence;
  fn.b_intercept = 1.0;
  fn.b_slope = 1.0 - gamma;
  fn.domain_upper = 1.0 / (1.0 - gamma);
  return fn;
}

RidClass rid_class(const EfficiencyFunction& fn) {
  if (fn.role != Role::Defence)
    throw DomainError("relative ineffectiveness is a defence-side notion");
  switch (fn.family) {
    case EffFamily::InvG:
      return RidClass::Increasing;  // -theta/(1+theta y) rises toward 0
    case EffFamily::ExpG:
      return RidClass::Constant;  // identically -theta
    case EffFamily::QuadG:
      return RidClass::Decreasing;  // -2theta/(1-theta y) falls
    case EffFamily::Linear: {
      // Sample the ratio's slope over the interior of the valid domain.
      const double hi = fn.domain_upper.value_or(1.0);
      const double h = hi / 200.0;
      int sign = 0;
      for (int k = 1; k < 20; ++k) {
        const double y = k * hi / 21.0;
        const double r0 = fn.deriv(y - h) / fn.value(y - h);
        const double r1 = fn.deriv(y + h) / fn.value(y + h);
        const double d = r1 - r0;
        if (std::abs(d) < 1e-14) continue;
        const int s = d > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        if (sign != s) throw DomainError("ineffectiveness ratio is not monotone");
      }
      if (sign > 0) return RidClass::Increasing;
      if (sign < 0) return RidClass::Decreasing;
      return RidClass::Constant;
    }
    default:
      break;
  }
  throw DomainError("no ineffectiveness class for this family");
}

}  // namespace secgame
