#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rabi/errors.hpp"
#include "rabi/numerics/symmetric_matrix.hpp"

namespace rabi {

/// Ascending eigenvalues with orthonormal eigenvectors stored column-wise:
/// component i of eigenvector k is vectors[i * dim + k].
struct EigenDecomposition {
  std::vector<double> values;
  std::vector<double> vectors;

  std::size_t dim() const noexcept { return values.size(); }
  double component(std::size_t i, std::size_t k) const { return vectors[i * dim() + k]; }

  std::vector<double> vector(std::size_t k) const {
    std::vector<double> v(dim());
    for (std::size_t i = 0; i < dim(); ++i) v[i] = component(i, k);
    return v;
  }
};

namespace detail {

// Householder reduction to tridiagonal form (the classic tred2). On exit
// d holds the diagonal, e the subdiagonal in e[1..n-1], and v the
// accumulated orthogonal transformation.
inline void tridiagonalize(std::vector<std::vector<double>>& v, std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  for (int j = 0; j < n; ++j) d[j] = v[n - 1][j];

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v[i - 1][j];
        v[i][j] = 0.0;
        v[j][i] = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;

      for (int j = 0; j < i; ++j) {
        f = d[j];
        v[j][i] = f;
        g = e[j] + v[j][j] * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v[k][j] * d[k];
          e[k] += v[k][j] * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) v[k][j] -= (f * e[k] + g * d[k]);
        d[j] = v[i - 1][j];
        v[i][j] = 0.0;
      }
    }
    d[i] = h;
  }

  for (int i = 0; i < n - 1; ++i) {
    v[n - 1][i] = v[i][i];
    v[i][i] = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v[k][i + 1] / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v[k][i + 1] * v[k][j];
        for (int k = 0; k <= i; ++k) v[k][j] -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v[k][i + 1] = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v[n - 1][j];
    v[n - 1][j] = 0.0;
  }
  v[n - 1][n - 1] = 1.0;
  e[0] = 0.0;
}

// Implicit QL iteration on the tridiagonal form (tql2).
inline void tridiagonal_ql(std::vector<std::vector<double>>& v, std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  constexpr int kMaxIterPerValue = 60;

  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n - 1) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxIterPerValue)
          throw Error(ErrorKind::convergence_failure, "eigh: QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k) {
            h = v[k][i + 1];
            v[k][i + 1] = s * v[k][i] + c * h;
            v[k][i] = c * v[k][i] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace detail

/// Full eigendecomposition of a dense symmetric matrix (Householder
/// tridiagonalization followed by implicit QL). Values ascend; each
/// eigenvector's first component above 1e-12 of its largest magnitude is
/// made positive so outputs are reproducible.
inline EigenDecomposition eigh(const SymmetricMatrix& m) {
  const std::size_t n = m.dim();
  EigenDecomposition out;
  if (n == 0) return out;
  if (!m.all_finite()) throw Error(ErrorKind::non_finite, "eigh: matrix has non-finite entries");

  std::vector<std::vector<double>> v(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v[i][j] = m(i, j);
  std::vector<double> d(n), e(n);
  detail::tridiagonalize(v, d, e);
  detail::tridiagonal_ql(v, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = d[src];
    double big = 0.0;
    for (std::size_t i = 0; i < n; ++i) big = std::max(big, std::abs(v[i][src]));
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v[i][src]) > 1e-12 * big) {
        sign = v[i][src] < 0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = sign * v[i][src];
  }
  return out;
}

inline std::vector<double> eigvalsh(const SymmetricMatrix& m) { return eigh(m).values; }

}  // namespace rabi
