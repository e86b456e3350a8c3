#pragma once

#include <cmath>
#include <functional>

#include "secgame/types.hpp"

namespace secgame::detail {

// Bisection for a continuous function with f(lo) and f(hi) of opposite
// (weak) sign. Stops at the absolute width or iteration cap, whichever
// first; the caller decides acceptance from the residual at the result.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double f_lo, double width, int max_iters) {
  const bool lo_nonneg = f_lo >= 0.0;
  for (int it = 0; it < max_iters && hi - lo > width; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm >= 0.0) == lo_nonneg)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double width = tol::kDualWidth, int max_iters = tol::kDualIters) {
  return bisect(f, lo, hi, f(lo), width, max_iters);
}

// Root of a decreasing function on [lo, hi] given f(lo) >= 0 >= f(hi).
inline double bisect_decreasing(const std::function<double(double)>& f, double lo,
                                double hi, double width = tol::kDualWidth,
                                int max_iters = tol::kDualIters) {
  return bisect(f, lo, hi, 1.0, width, max_iters);
}

}  // namespace secgame::detail
