#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "roughlab/grid.hpp"

namespace roughlab {

/// Subsampling control for two-parameter Hölder scans. With stride s only
/// pairs (i, j) with i and j both multiples of s are visited.
struct ScanOptions {
  std::size_t stride = 1;
};

/// (t_j - t_i)^(-2γ) for grid pairs, tabulated by lag on uniform grids.
class InversePowerTable {
 public:
  InversePowerTable(const Grid& grid, double gamma) : grid_(grid), two_gamma_(2.0 * gamma) {
    if (grid.is_uniform()) {
      const double h = grid.uniform_width();
      by_lag_.resize(grid.cells() + 1, INFINITY);
      for (std::size_t lag = 1; lag <= grid.cells(); ++lag) {
        by_lag_[lag] = std::pow(h * static_cast<double>(lag), -two_gamma_);
      }
    }
  }

  double operator()(std::size_t i, std::size_t j) const {
    if (!by_lag_.empty()) return by_lag_[j - i];
    return std::pow(grid_.time(j) - grid_.time(i), -two_gamma_);
  }

 private:
  const Grid& grid_;
  double two_gamma_;
  std::vector<double> by_lag_;
};

/// max over grid pairs i < j of |f(i, j)| / (t_j - t_i)^γ.
///
/// `squared(i, j)` returns |f(i, j)|^2. `row_bound(i)` returns an upper bound
/// on |f(i, j)| valid for every j > i; rows are abandoned as soon as the bound
/// divided by the (increasing) interval length cannot beat the current best,
/// so the result is exact while typically visiting far fewer than n^2 / 2
/// pairs. Pass a bound of +inf to force the exhaustive scan.
inline constexpr std::size_t kSeedLags = 8;

template <class Squared, class RowBound>
double holder_sup(const Grid& grid, double gamma, Squared&& squared, RowBound&& row_bound,
                  ScanOptions opts = {}, std::size_t* pairs = nullptr) {
  const std::size_t n = grid.cells();
  const std::size_t stride = std::max<std::size_t>(1, opts.stride);
  const InversePowerTable inv(grid, gamma);
  double best2 = 0.0;
  std::size_t visited = 0;
  // Short lags first: they usually carry the supremum and make the row cutoff bite early.
  for (std::size_t lag = stride; lag <= std::min(n, kSeedLags * stride); lag += stride) {
    for (std::size_t i = 0; i + lag <= n; i += stride) {
      ++visited;
      best2 = std::max(best2, squared(i, i + lag) * inv(i, i + lag));
    }
  }
  for (std::size_t i = 0; i + stride <= n; i += stride) {
    const double b = row_bound(i);
    const double b2 = b * b;
    for (std::size_t j = i + stride; j <= n; j += stride) {
      const double w = inv(i, j);
      if (b2 * w <= best2) break;
      ++visited;
      const double v = squared(i, j) * w;
      if (v > best2) best2 = v;
    }
  }
  if (pairs) *pairs += visited;
  return std::sqrt(best2);
}

inline double no_row_bound(std::size_t) { return std::numeric_limits<double>::infinity(); }

}  // namespace roughlab
