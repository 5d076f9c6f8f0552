#pragma once

#include <cmath>
#include <cstddef>
#include <span>

// Flat row-major helpers for the small dense tensors used throughout. All
// norms are Euclidean on vectors and Frobenius on matrices and 3-tensors.
namespace roughlab::tensor {

inline double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return s;
}

inline double norm(std::span<const double> v) { return std::sqrt(squared_norm(v)); }

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double e = a[k] - b[k];
    s += e * e;
  }
  return s;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

/// out[r] = sum_k m[r * cols + k] * v[k]  (m is rows x cols).
inline void matvec(std::span<const double> m, std::span<const double> v, std::span<double> out) {
  const std::size_t cols = v.size();
  for (std::size_t r = 0; r < out.size(); ++r) {
    double s = 0.0;
    const double* row = m.data() + r * cols;
    for (std::size_t k = 0; k < cols; ++k) s += row[k] * v[k];
    out[r] = s;
  }
}

/// out[r] += sum_k m[r * cols + k] * v[k].
inline void matvec_add(std::span<const double> m, std::span<const double> v, std::span<double> out) {
  const std::size_t cols = v.size();
  for (std::size_t r = 0; r < out.size(); ++r) {
    double s = 0.0;
    const double* row = m.data() + r * cols;
    for (std::size_t k = 0; k < cols; ++k) s += row[k] * v[k];
    out[r] += s;
  }
}

/// Chen update of a level-2 increment: area += left ⊗ right.
inline void add_outer(std::span<const double> left, std::span<const double> right,
                      std::span<double> area) {
  const std::size_t d = right.size();
  for (std::size_t p = 0; p < left.size(); ++p) {
    for (std::size_t q = 0; q < d; ++q) area[p * d + q] += left[p] * right[q];
  }
}

}  // namespace roughlab::tensor
