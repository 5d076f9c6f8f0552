#include "roughlab/lift.hpp"

#include <string>

#include "roughlab/error.hpp"

namespace roughlab {
namespace {

void require_samples(const Grid& grid, std::span<const double> samples, std::size_t dim) {
  if (dim == 0) throw InvalidArgument("lift", "lift dimension must be positive");
  if (samples.size() < 2 * dim) throw InvalidArgument("lift", "a lift needs at least 2 samples");
  if (samples.size() != grid.nodes() * dim) {
    throw InvalidArgument("lift", "lift expects " + std::to_string(grid.nodes() * dim) + " sample values, got " +
                                      std::to_string(samples.size()));
  }
}

std::vector<double> linear_cell_areas(std::span<const double> x, std::size_t cells, std::size_t d) {
  std::vector<double> areas(cells * d * d);
  for (std::size_t k = 0; k < cells; ++k) {
    double* a = areas.data() + k * d * d;
    for (std::size_t p = 0; p < d; ++p) {
      const double dp = x[(k + 1) * d + p] - x[k * d + p];
      for (std::size_t q = 0; q < d; ++q) a[p * d + q] = 0.5 * dp * (x[(k + 1) * d + q] - x[k * d + q]);
    }
  }
  return areas;
}

void require_factor(const RoughPath& path, std::size_t factor) {
  if (factor == 0 || path.cells() % factor != 0) {
    throw InvalidArgument("lift", "factor " + std::to_string(factor) + " does not divide " +
                                      std::to_string(path.cells()) + " cells");
  }
}

RoughPathPtr halve(const RoughPath& path) {
  const std::size_t d = path.dim();
  const std::size_t coarse = path.cells() / 2;
  std::vector<double> x;
  x.reserve((coarse + 1) * d);
  for (std::size_t k = 0; k <= path.cells(); k += 2) {
    const auto v = path.value(k);
    x.insert(x.end(), v.begin(), v.end());
  }
  std::vector<double> areas(coarse * d * d);
  for (std::size_t k = 0; k < coarse; ++k) {
    const LevelTwo pair = path.chen_pair(2 * k, 2 * k + 2);
    std::copy(pair.area.begin(), pair.area.end(), areas.begin() + static_cast<std::ptrdiff_t>(k * d * d));
  }
  return std::make_shared<const RoughPath>(path.grid().subsample(2), d, std::move(x), std::move(areas),
                                           path.alpha(), path.geometric());
}

}  // namespace

RoughPathPtr lift_piecewise_linear(const Grid& grid, std::span<const double> samples, std::size_t dim,
                                   double alpha) {
  require_samples(grid, samples, dim);
  std::vector<double> x(samples.begin(), samples.end());
  auto areas = linear_cell_areas(x, grid.cells(), dim);
  return std::make_shared<const RoughPath>(grid, dim, std::move(x), std::move(areas), alpha, true);
}

RoughPathPtr lift_ito(const Grid& grid, std::span<const double> samples, std::size_t dim, double alpha) {
  require_samples(grid, samples, dim);
  std::vector<double> x(samples.begin(), samples.end());
  auto areas = linear_cell_areas(x, grid.cells(), dim);
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    const double dt = grid.time(k + 1) - grid.time(k);
    for (std::size_t p = 0; p < dim; ++p) areas[k * dim * dim + p * dim + p] -= 0.5 * dt;
  }
  return std::make_shared<const RoughPath>(grid, dim, std::move(x), std::move(areas), alpha, false);
}

RoughPathPtr coarsen(const RoughPath& path, std::size_t factor) {
  require_factor(path, factor);
  if (!is_power_of_two(factor)) {
    throw InvalidArgument("lift", "coarsening factor must be a power of two, got " + std::to_string(factor));
  }
  auto out = std::make_shared<const RoughPath>(path);
  for (std::size_t f = factor; f > 1; f /= 2) out = halve(*out);
  return out;
}

RoughPathPtr relift_linear(const RoughPath& path, std::size_t factor) {
  require_factor(path, factor);
  const std::size_t d = path.dim();
  const Grid& grid = path.grid();
  std::vector<double> x(grid.nodes() * d);
  for (std::size_t start = 0; start < grid.cells(); start += factor) {
    const std::size_t end = start + factor;
    const auto xa = path.value(start);
    const auto xb = path.value(end);
    const double ta = grid.time(start);
    const double span = grid.time(end) - ta;
    for (std::size_t k = start; k < end; ++k) {
      const double w = (grid.time(k) - ta) / span;
      for (std::size_t p = 0; p < d; ++p) x[k * d + p] = xa[p] + w * (xb[p] - xa[p]);
    }
  }
  const auto last = path.value(grid.cells());
  std::copy(last.begin(), last.end(), x.end() - static_cast<std::ptrdiff_t>(d));
  return lift_piecewise_linear(grid, x, d, path.alpha());
}

}  // namespace roughlab
