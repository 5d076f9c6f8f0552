#include "roughlab/rough_path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roughlab/error.hpp"
#include "roughlab/tensor.hpp"

namespace roughlab {

void validate_alpha(double alpha) {
  if (!(alpha > 1.0 / 3.0 && alpha <= 0.5)) {
    throw InvalidArgument("core", "alpha must lie in (1/3, 1/2], got " + std::to_string(alpha));
  }
}

LevelTwo chen_compose(const LevelTwo& left, const LevelTwo& right) {
  const std::size_t d = left.increment.size();
  if (right.increment.size() != d || left.area.size() != d * d || right.area.size() != d * d) {
    throw InvalidArgument("core", "chen_compose: dimension mismatch");
  }
  LevelTwo out{std::vector<double>(d), std::vector<double>(d * d)};
  for (std::size_t p = 0; p < d; ++p) out.increment[p] = left.increment[p] + right.increment[p];
  for (std::size_t k = 0; k < d * d; ++k) out.area[k] = left.area[k] + right.area[k];
  tensor::add_outer(left.increment, right.increment, out.area);
  return out;
}

RoughPath::RoughPath(Grid grid, std::size_t dim, std::vector<double> values,
                     std::vector<double> cell_areas, double alpha, bool geometric)
    : grid_(std::move(grid)),
      dim_(dim),
      values_(std::move(values)),
      areas_(std::move(cell_areas)),
      alpha_(alpha),
      geometric_(geometric) {
  validate_alpha(alpha_);
  if (dim_ == 0) throw InvalidArgument("core", "rough path dimension must be positive");
  if (values_.size() != grid_.nodes() * dim_) {
    throw InvalidArgument("core", "rough path expects " + std::to_string(grid_.nodes() * dim_) +
                                      " node values, got " + std::to_string(values_.size()));
  }
  if (areas_.size() != grid_.cells() * dim_ * dim_) {
    throw InvalidArgument("core", "rough path expects " + std::to_string(grid_.cells() * dim_ * dim_) +
                                      " cell areas, got " + std::to_string(areas_.size()));
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(values_.begin(), values_.end(), finite) ||
      !std::all_of(areas_.begin(), areas_.end(), finite)) {
    throw NumericalError("core", "rough path data contains non-finite values");
  }
}

void RoughPath::chen_pair_into(std::size_t i, std::size_t j, std::span<double> increment,
                               std::span<double> area) const {
  if (j > cells() || i > j) {
    throw InvalidArgument("core", "chen_pair: need 0 <= i <= j <= n, got i=" + std::to_string(i) +
                                      " j=" + std::to_string(j));
  }
  const std::size_t d = dim_;
  std::fill(area.begin(), area.end(), 0.0);
  const auto xi = value(i);
  for (std::size_t k = i; k < j; ++k) {
    // 𝕏_{i,k+1} = 𝕏_{i,k} + 𝕏_{k,k+1} + X_{i,k} ⊗ X_{k,k+1}
    const auto xk = value(k);
    const auto xn = value(k + 1);
    const auto cell = cell_area(k);
    for (std::size_t p = 0; p < d; ++p) {
      const double left = xk[p] - xi[p];
      for (std::size_t q = 0; q < d; ++q) {
        area[p * d + q] += cell[p * d + q] + left * (xn[q] - xk[q]);
      }
    }
  }
  const auto xj = value(j);
  for (std::size_t p = 0; p < d; ++p) increment[p] = xj[p] - xi[p];
}

LevelTwo RoughPath::chen_pair(std::size_t i, std::size_t j) const {
  LevelTwo out{std::vector<double>(dim_), std::vector<double>(dim_ * dim_)};
  chen_pair_into(i, j, out.increment, out.area);
  return out;
}

std::shared_ptr<const RoughPath> RoughPath::window(std::size_t first, std::size_t last) const {
  Grid g = grid_.window(first, last);
  std::vector<double> x(values_.begin() + static_cast<std::ptrdiff_t>(first * dim_),
                        values_.begin() + static_cast<std::ptrdiff_t>((last + 1) * dim_));
  std::vector<double> a(areas_.begin() + static_cast<std::ptrdiff_t>(first * dim_ * dim_),
                        areas_.begin() + static_cast<std::ptrdiff_t>(last * dim_ * dim_));
  return std::make_shared<const RoughPath>(std::move(g), dim_, std::move(x), std::move(a), alpha_,
                                           geometric_);
}

bool RoughPath::same_data(const RoughPath& other) const {
  return this == &other || (dim_ == other.dim_ && alpha_ == other.alpha_ && grid_ == other.grid_ &&
                            values_ == other.values_ && areas_ == other.areas_);
}

}  // namespace roughlab
