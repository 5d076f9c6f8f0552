#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "roughlab/grid.hpp"

namespace roughlab {

/// Throws InvalidArgument unless alpha lies in (1/3, 1/2].
void validate_alpha(double alpha);

/// First and second level of a rough path over one pair (s, t):
/// increment = X_{s,t} (length d), area = 𝕏_{s,t} (d x d, row-major) with
/// area[p * d + q] = ∫_s^t X^p_{s,r} dX^q_r.
struct LevelTwo {
  std::vector<double> increment;
  std::vector<double> area;
};

/// Chen product: (X_{s,u}, 𝕏_{s,u}) ⊗ (X_{u,t}, 𝕏_{u,t}) = (X_{s,t}, 𝕏_{s,t}).
LevelTwo chen_compose(const LevelTwo& left, const LevelTwo& right);

/// Level-2 α-Hölder rough path sampled on a grid.
///
/// Only the node values X_{t_k} and the per-cell second level 𝕏_{t_k,t_{k+1}}
/// are stored; the second level over any other grid pair is rebuilt by Chen
/// chaining, so Chen's relation holds by construction.
class RoughPath {
 public:
  /// `values` holds (n+1)*d node values, `cell_areas` n*d*d cell areas.
  RoughPath(Grid grid, std::size_t dim, std::vector<double> values, std::vector<double> cell_areas,
            double alpha, bool geometric = true);

  const Grid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t cells() const { return grid_.cells(); }
  double alpha() const { return alpha_; }

  /// Whether the second level came from a geometric (Stratonovich-type) lift.
  bool geometric() const { return geometric_; }

  std::span<const double> value(std::size_t k) const {
    return {values_.data() + k * dim_, dim_};
  }
  std::span<const double> cell_area(std::size_t k) const {
    return {areas_.data() + k * dim_ * dim_, dim_ * dim_};
  }
  std::span<const double> values() const { return values_; }
  std::span<const double> cell_areas() const { return areas_; }

  /// (X_{t_i,t_j}, 𝕏_{t_i,t_j}) by left-to-right Chen accumulation over the
  /// cells of [t_i, t_j]. Requires i <= j <= n.
  LevelTwo chen_pair(std::size_t i, std::size_t j) const;

  /// Allocation-free form of chen_pair.
  void chen_pair_into(std::size_t i, std::size_t j, std::span<double> increment,
                      std::span<double> area) const;

  /// The same path restricted to nodes first..last, re-based at time 0.
  std::shared_ptr<const RoughPath> window(std::size_t first, std::size_t last) const;

  /// True when both paths carry identical grids and data.
  bool same_data(const RoughPath& other) const;

 private:
  Grid grid_;
  std::size_t dim_;
  std::vector<double> values_;
  std::vector<double> areas_;
  double alpha_;
  bool geometric_;
};

using RoughPathPtr = std::shared_ptr<const RoughPath>;

}  // namespace roughlab
