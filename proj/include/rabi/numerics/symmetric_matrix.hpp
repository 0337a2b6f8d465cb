#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace rabi {

/// Dense real symmetric matrix in row-major storage.
///
/// Writes always go through set(), which stores the value at (i, j) and
/// (j, i), so entries(i, j) == entries(j, i) holds bit-for-bit.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

  /// Builds from nested rows; throws std::invalid_argument unless the input
  /// is square, finite and exactly symmetric.
  static SymmetricMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> v;
    for (const auto& r : rows) v.emplace_back(r);
    return from_rows(v);
  }

  static SymmetricMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    SymmetricMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix is not square");
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (!std::isfinite(rows[i][j])) throw std::invalid_argument("matrix entry is not finite");
        if (rows[i][j] != rows[j][i]) throw std::invalid_argument("matrix is not symmetric");
        m.data_[i * m.dim_ + j] = rows[i][j];
      }
    }
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  void set(std::size_t i, std::size_t j, double value) {
    data_[i * dim_ + j] = value;
    data_[j * dim_ + i] = value;
  }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * dim_, dim_);
  }

  std::span<const double> data() const noexcept { return data_; }

  /// Maximum absolute row sum.
  double norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double s = 0.0;
      for (double v : row(i)) s += std::abs(v);
      best = std::max(best, s);
    }
    return best;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  std::vector<double> multiply(std::span<const double> x) const {
    if (x.size() != dim_) throw std::invalid_argument("dimension mismatch in multiply");
    std::vector<double> y(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      const double* r = data_.data() + i * dim_;
      double s = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) s += r[j] * x[j];
      y[i] = s;
    }
    return y;
  }

  /// Principal submatrix on the given (ordered) indices.
  SymmetricMatrix principal(std::span<const std::size_t> idx) const {
    SymmetricMatrix m(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a; b < idx.size(); ++b) m.set(a, b, (*this)(idx[a], idx[b]));
    return m;
  }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// A matrix together with the basis it is expressed in.
template <class State>
struct LabeledMatrix {
  std::vector<State> basis;
  SymmetricMatrix matrix;

  std::size_t dim() const noexcept { return basis.size(); }
};

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace rabi
