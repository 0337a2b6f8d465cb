#pragma once

#include <cstdint>

namespace rabi {

/// Generalized Laguerre polynomial L_n^k(x) by the upward three-term
/// recurrence
///   (j+1) L_{j+1} = (2j+1+k-x) L_j - (j+k) L_{j-1}.
/// At x == 0 the binomial C(n+k, n) is returned directly.
inline double eval_laguerre(std::uint32_t n, std::uint32_t k, double x) {
  if (x == 0.0) {
    double c = 1.0;
    for (std::uint32_t i = 1; i <= k; ++i) c = c * static_cast<double>(n + i) / static_cast<double>(i);
    return c;
  }
  const double kk = static_cast<double>(k);
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + kk - x;
  for (std::uint32_t j = 1; j < n; ++j) {
    const double jj = static_cast<double>(j);
    const double next = ((2.0 * jj + 1.0 + kk - x) * cur - (jj + kk) * prev) / (jj + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace rabi
