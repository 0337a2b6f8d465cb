#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <utility>

#include "rabi/errors.hpp"

namespace rabi {

inline constexpr double kDefaultRootTol = 1e-12;

/// Bracketed root of a scalar function: bisection interleaved with secant
/// steps. Iterates never leave the current bracket; a bisection step is
/// forced whenever the previous step failed to halve the bracket, so the
/// width drops below `tol` in at most ~2*log2((hi-lo)/tol) evaluations.
///
/// Returns the final bracket endpoint with the smaller |f|.
/// Throws Error{no_bracket} when f(lo) and f(hi) share a sign and
/// Error{non_finite} when f produces NaN/inf.
template <class F>
double find_root(F&& f, double lo, double hi, double tol = kDefaultRootTol) {
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  double fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi))
    throw Error(ErrorKind::non_finite, "find_root: non-finite value at bracket end");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream os;
    os << "find_root: no sign change on [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::no_bracket, os.str());
  }

  bool force_bisect = false;
  // 400 steps is far beyond what a double bracket can need.
  for (int iter = 0; iter < 400 && hi - lo > tol; ++iter) {
    const double width = hi - lo;
    const double mid = lo + 0.5 * width;
    double x = mid;
    if (!force_bisect) {
      const double s = hi - fhi * (hi - lo) / (fhi - flo);
      if (s > lo && s < hi) x = s;
    }
    if (x <= lo || x >= hi) {
      // Bracket is at floating-point resolution.
      if (mid <= lo || mid >= hi) break;
      x = mid;
    }
    const double fx = f(x);
    if (!std::isfinite(fx)) throw Error(ErrorKind::non_finite, "find_root: non-finite value inside bracket");
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    force_bisect = (hi - lo) > 0.5 * width;
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

/// Walks `steps` equal subintervals from `from` toward `to` and returns the
/// first subinterval over which f changes sign (or hits zero), ordered as
/// (near, far) relative to `from`.
template <class F>
std::optional<std::pair<double, double>> first_sign_change(F&& f, double from, double to, std::size_t steps) {
  double a = from;
  double fa = f(a);
  if (fa == 0.0) return std::pair{a, a};
  for (std::size_t i = 1; i <= steps; ++i) {
    const double b = (i == steps) ? to : from + (to - from) * static_cast<double>(i) / static_cast<double>(steps);
    const double fb = f(b);
    if (!std::isfinite(fb)) throw Error(ErrorKind::non_finite, "first_sign_change: non-finite value");
    if (fb == 0.0 || (fa > 0.0) != (fb > 0.0)) return std::pair{a, b};
    a = b;
    fa = fb;
  }
  return std::nullopt;
}

}  // namespace rabi
