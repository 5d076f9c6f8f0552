#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace roughlab {

enum class GridKind { uniform, dyadic };

/// Strictly increasing sampling times 0 = t_0 < t_1 < ... < t_n = T.
///
/// Uniform grids are always generated as t_k = T * k / n so that windows and
/// subsampled grids of a uniform grid stay uniform to the last bit of the
/// cell-width ratio.
class Grid {
 public:
  /// Uniform grid on [0, T] with `cells` cells. The dyadic kind additionally
  /// requires `cells` to be a power of two.
  static Grid make(double horizon, std::size_t cells, GridKind kind = GridKind::uniform);

  /// Arbitrary grid. Requires times[0] == 0 and strict monotonicity.
  static Grid from_times(std::vector<double> times);

  std::size_t cells() const { return times_.size() - 1; }
  std::size_t nodes() const { return times_.size(); }
  double horizon() const { return times_.back(); }
  double time(std::size_t i) const { return times_[i]; }
  std::span<const double> times() const { return times_; }

  /// True when max cell width / min cell width <= 1 + 1e-12.
  bool is_uniform() const { return uniform_; }

  /// Width of a uniform cell; only meaningful when is_uniform().
  double uniform_width() const { return horizon() / static_cast<double>(cells()); }

  /// Largest cell width.
  double mesh() const;

  /// Nodes first..last, shifted so the window starts at time 0.
  Grid window(std::size_t first, std::size_t last) const;

  /// Every factor-th node. `factor` must divide cells().
  Grid subsample(std::size_t factor) const;

  friend bool operator==(const Grid& a, const Grid& b) { return a.times_ == b.times_; }

 private:
  Grid(std::vector<double> times, bool uniform) : times_(std::move(times)), uniform_(uniform) {}

  static std::vector<double> uniform_times(double horizon, std::size_t cells);

  std::vector<double> times_;
  bool uniform_ = false;
};

bool is_power_of_two(std::size_t n);

}  // namespace roughlab
