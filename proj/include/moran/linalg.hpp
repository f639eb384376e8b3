#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

// Dense Gaussian elimination shared by the exact (rational) and floating paths.
namespace moran::linalg {

template <class T>
using Matrix = std::vector<std::vector<T>>;

namespace detail {

template <class T>
double magnitude(const T& v) {
  if constexpr (std::is_floating_point_v<T>) {
    return std::abs(v);
  } else {
    return v == 0 ? 0.0 : 1.0;
  }
}

// Row of the pivot for column `col` at or below `row`; nullopt if the column is zero.
template <class T>
std::optional<std::size_t> pick_pivot(const Matrix<T>& a, std::size_t row, std::size_t col,
                                      double tiny) {
  std::size_t best = row;
  double best_mag = 0.0;
  for (std::size_t r = row; r < a.size(); ++r) {
    const double mag = magnitude(a[r][col]);
    if (mag > best_mag) {
      best = r;
      best_mag = mag;
      if constexpr (!std::is_floating_point_v<T>) break;
    }
  }
  if (best_mag <= tiny) return std::nullopt;
  return best;
}

template <class T>
double singular_threshold(const Matrix<T>& a) {
  if constexpr (std::is_floating_point_v<T>) {
    double scale = 0.0;
    for (const auto& row : a)
      for (const auto& v : row) scale = std::max(scale, std::abs(v));
    return scale * 1e-14 * static_cast<double>(a.size());
  } else {
    return 0.0;
  }
}

}  // namespace detail

/// Solves a x = b. Returns nullopt when a is (numerically) singular.
template <class T>
std::optional<std::vector<T>> solve(Matrix<T> a, std::vector<T> b) {
  const std::size_t n = a.size();
  const double tiny = detail::singular_threshold(a);
  for (std::size_t col = 0; col < n; ++col) {
    auto pivot = detail::pick_pivot(a, col, col, tiny);
    if (!pivot) return std::nullopt;
    std::swap(a[col], a[*pivot]);
    std::swap(b[col], b[*pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const T factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

template <class T>
T determinant(Matrix<T> a) {
  const std::size_t n = a.size();
  T det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    auto pivot = detail::pick_pivot(a, col, col, 0.0);
    if (!pivot) return T(0);
    if (*pivot != col) {
      std::swap(a[col], a[*pivot]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const T factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  return det;
}

}  // namespace moran::linalg
