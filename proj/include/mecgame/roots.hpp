// include/mecgame/roots.hpp
//
// Bracketed bisection. Every equation solved in this library is monotone on
// its bracket, so bisection is both sufficient and robust.

#pragma once

#include <cmath>

#include "mecgame/types.hpp"

namespace mecgame {

struct BisectOptions {
  double x_tol = 1e-9;
  double f_tol = 1e-12;
  int max_iter = 200;
};

struct BisectResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Root of f on [lo, hi] given f(lo) and f(hi) of opposite sign (either
/// order). Stops once the bracket is narrower than x_tol and |f| <= f_tol,
/// when the bracket stops shrinking, or after max_iter halvings.
template <class F>
BisectResult bisect(F&& f, double lo, double hi, const BisectOptions& opt = {}) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, 0.0, 0};
  if (f_hi == 0.0) return {hi, 0.0, 0};
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw DomainError("bisect: root is not bracketed");
  }
  BisectResult out;
  for (out.iterations = 1; out.iterations <= opt.max_iter; ++out.iterations) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    out.x = mid;
    out.residual = f_mid;
    if (f_mid == 0.0) break;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    const bool narrow = (hi - lo) <= opt.x_tol;
    if (narrow && std::abs(f_mid) <= opt.f_tol) break;
    if (0.5 * (lo + hi) == lo || 0.5 * (lo + hi) == hi) break;
  }
  if (out.iterations > opt.max_iter) out.iterations = opt.max_iter;
  return out;
}

}  // namespace mecgame
