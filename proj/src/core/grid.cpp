#include "roughlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roughlab/error.hpp"

namespace roughlab {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> Grid::uniform_times(double horizon, std::size_t cells) {
  std::vector<double> t(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) {
    t[k] = horizon * static_cast<double>(k) / static_cast<double>(cells);
  }
  t[cells] = horizon;
  return t;
}

Grid Grid::make(double horizon, std::size_t cells, GridKind kind) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("core", "grid horizon must be positive and finite");
  }
  if (cells == 0) throw InvalidArgument("core", "grid needs at least one cell");
  if (kind == GridKind::dyadic && !is_power_of_two(cells)) {
    throw InvalidArgument("core",
                          "dyadic grid needs a power-of-two cell count, got " + std::to_string(cells));
  }
  return Grid(uniform_times(horizon, cells), true);
}

Grid Grid::from_times(std::vector<double> times) {
  if (times.size() < 2) throw InvalidArgument("core", "grid needs at least two times");
  if (times.front() != 0.0) throw InvalidArgument("core", "grid must start at time 0");
  double wmin = INFINITY;
  double wmax = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double w = times[k] - times[k - 1];
    if (!(w > 0.0) || !std::isfinite(times[k])) {
      throw InvalidArgument("core", "grid times must be finite and strictly increasing");
    }
    wmin = std::min(wmin, w);
    wmax = std::max(wmax, w);
  }
  const bool uniform = wmax / wmin <= 1.0 + 1e-12;
  return Grid(std::move(times), uniform);
}

double Grid::mesh() const {
  double m = 0.0;
  for (std::size_t k = 1; k < times_.size(); ++k) m = std::max(m, times_[k] - times_[k - 1]);
  return m;
}

Grid Grid::window(std::size_t first, std::size_t last) const {
  if (first >= last || last > cells()) {
    throw InvalidArgument("core", "grid window [" + std::to_string(first) + ", " +
                                      std::to_string(last) + "] is empty or out of range");
  }
  if (uniform_) {
    return Grid(uniform_times(uniform_width() * static_cast<double>(last - first), last - first), true);
  }
  std::vector<double> t(times_.begin() + static_cast<std::ptrdiff_t>(first),
                        times_.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  const double origin = t.front();
  for (double& v : t) v -= origin;
  t.front() = 0.0;
  return from_times(std::move(t));
}

Grid Grid::subsample(std::size_t factor) const {
  if (factor == 0 || cells() % factor != 0) {
    throw InvalidArgument("core", "subsampling factor " + std::to_string(factor) +
                                      " does not divide " + std::to_string(cells()) + " cells");
  }
  if (uniform_) return Grid(uniform_times(horizon(), cells() / factor), true);
  std::vector<double> t;
  t.reserve(cells() / factor + 1);
  for (std::size_t k = 0; k <= cells(); k += factor) t.push_back(times_[k]);
  return from_times(std::move(t));
}

}  // namespace roughlab
