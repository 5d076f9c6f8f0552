#include "roughlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "roughlab/error.hpp"
#include "roughlab/tensor.hpp"

namespace roughlab {
namespace {

// dev[i] = |v_i - v_0| and suffix[i] = max_{k >= i} dev[k], so that
// |v_j - v_i| <= dev[i] + suffix[i] for every j >= i.
struct Spread {
  std::vector<double> dev;
  std::vector<double> suffix;

  double bound(std::size_t i) const { return dev[i] + suffix[i]; }
};

Spread spread_of(std::span<const double> values, std::size_t width) {
  const std::size_t n1 = values.size() / width;
  Spread s{std::vector<double>(n1), std::vector<double>(n1)};
  const auto v0 = values.subspan(0, width);
  for (std::size_t k = 0; k < n1; ++k) s.dev[k] = tensor::distance(values.subspan(k * width, width), v0);
  double m = 0.0;
  for (std::size_t k = n1; k-- > 0;) {
    m = std::max(m, s.dev[k]);
    s.suffix[k] = m;
  }
  return s;
}

std::vector<double> node_norms(std::span<const double> values, std::size_t width) {
  const std::size_t n1 = values.size() / width;
  std::vector<double> out(n1);
  for (std::size_t k = 0; k < n1; ++k) out[k] = tensor::norm(values.subspan(k * width, width));
  return out;
}

std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

void require_compatible(const ControlledPath& a, const ControlledPath& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("core", "controlled paths live on different grids");
  if (a.shape() != b.shape() || a.dim() != b.dim()) {
    throw InvalidArgument("core", "controlled paths have different value shapes or dimensions");
  }
}

// ‖R^0‖_{2α} of the pair (values, derivs) against driver values x. When
// `other_derivs`/`other_x` are given, the remainder subtracted is
// derivs_i X_{ij} - other_derivs_i X̃_{ij} instead (distance across bases).
double r0_scan(const Grid& grid, double alpha, std::span<const double> values,
               std::span<const double> derivs, std::span<const double> x,
               std::span<const double> other_derivs, std::span<const double> other_x, std::size_t vs,
               std::size_t d, ScanOptions opts, std::size_t* pairs) {
  const bool two_bases = !other_derivs.empty();
  const Spread sv = spread_of(values, vs);
  const Spread sx = spread_of(x, d);
  const std::vector<double> dn = node_norms(derivs, vs * d);
  Spread sx2;
  std::vector<double> dn2;
  if (two_bases) {
    sx2 = spread_of(other_x, d);
    dn2 = node_norms(other_derivs, vs * d);
  }
  std::vector<double> dx(d), dx2(d);
  auto squared = [&](std::size_t i, std::size_t j) {
    const double* xi = x.data() + i * d;
    const double* xj = x.data() + j * d;
    for (std::size_t p = 0; p < d; ++p) dx[p] = xj[p] - xi[p];
    if (two_bases) {
      const double* ui = other_x.data() + i * d;
      const double* uj = other_x.data() + j * d;
      for (std::size_t p = 0; p < d; ++p) dx2[p] = uj[p] - ui[p];
    }
    const double* yi = values.data() + i * vs;
    const double* yj = values.data() + j * vs;
    const double* di = derivs.data() + i * vs * d;
    const double* ei = two_bases ? other_derivs.data() + i * vs * d : nullptr;
    double s = 0.0;
    for (std::size_t a = 0; a < vs; ++a) {
      double r = yj[a] - yi[a];
      const double* row = di + a * d;
      for (std::size_t p = 0; p < d; ++p) r -= row[p] * dx[p];
      if (two_bases) {
        const double* row2 = ei + a * d;
        for (std::size_t p = 0; p < d; ++p) r += row2[p] * dx2[p];
      }
      s += r * r;
    }
    return s;
  };
  auto bound = [&](std::size_t i) {
    double b = sv.bound(i) + dn[i] * sx.bound(i);
    if (two_bases) b += dn2[i] * sx2.bound(i);
    return b;
  };
  return holder_sup(grid, 2.0 * alpha, squared, bound, opts, pairs);
}

double increment_scan(const Grid& grid, double gamma, std::span<const double> values, std::size_t width,
                      ScanOptions opts, std::size_t* pairs) {
  const Spread s = spread_of(values, width);
  auto squared = [&](std::size_t i, std::size_t j) {
    return tensor::squared_distance(values.subspan(j * width, width), values.subspan(i * width, width));
  };
  auto bound = [&](std::size_t i) { return s.bound(i); };
  return holder_sup(grid, gamma, squared, bound, opts, pairs);
}

// Row-wise Chen accumulation of 𝕏_{i,j} (and of 𝕏̃_{i,j} when `other` is set),
// returning max |𝕏_{i,j} - 𝕏̃_{i,j}| / (t_j - t_i)^{2α}.
double area_scan(const RoughPath& path, const RoughPath* other, ScanOptions opts, std::size_t* pairs) {
  const Grid& grid = path.grid();
  const std::size_t n = grid.cells();
  const std::size_t d = path.dim();
  const std::size_t stride = std::max<std::size_t>(1, opts.stride);
  const InversePowerTable inv(grid, 2.0 * path.alpha());
  std::vector<double> area(d * d), area2(d * d);
  double best2 = 0.0;
  std::size_t visited = 0;

  auto accumulate = [d](const RoughPath& p, std::size_t i, std::size_t k, std::vector<double>& acc) {
    const auto xi = p.value(i);
    const auto xk = p.value(k);
    const auto xn = p.value(k + 1);
    const auto cell = p.cell_area(k);
    for (std::size_t a = 0; a < d; ++a) {
      const double left = xk[a] - xi[a];
      for (std::size_t b = 0; b < d; ++b) acc[a * d + b] += cell[a * d + b] + left * (xn[b] - xk[b]);
    }
  };

  for (std::size_t i = 0; i + stride <= n; i += stride) {
    std::fill(area.begin(), area.end(), 0.0);
    std::fill(area2.begin(), area2.end(), 0.0);
    for (std::size_t k = i; k < n; ++k) {
      accumulate(path, i, k, area);
      if (other) accumulate(*other, i, k, area2);
      const std::size_t j = k + 1;
      if ((j - i) % stride != 0) continue;
      ++visited;
      const double s = other ? tensor::squared_distance(area, area2) : tensor::squared_norm(area);
      best2 = std::max(best2, s * inv(i, j));
    }
  }
  if (pairs) *pairs += visited;
  return std::sqrt(best2);
}

}  // namespace

HolderReport holder_norms(const RoughPath& path, ScanOptions opts) {
  if (path.cells() < 1) throw InvalidArgument("core", "holder_norms: degenerate grid");
  HolderReport r;
  std::size_t x_pairs = 0;
  // The first level is scanned exhaustively as well so that pairs_scanned
  // counts every grid pair once.
  r.x_alpha = holder_sup(
      path.grid(), path.alpha(),
      [&](std::size_t i, std::size_t j) { return tensor::squared_distance(path.value(j), path.value(i)); },
      no_row_bound, opts, &x_pairs);
  r.xx_2alpha = area_scan(path, nullptr, opts, &r.pairs_scanned);
  return r;
}

RemainderNorms remainder_norms(const ControlledPath& y, ScanOptions opts) {
  RemainderNorms r;
  const std::size_t vs = y.value_size();
  const std::size_t d = y.dim();
  r.r0_2alpha = r0_scan(y.grid(), y.alpha(), y.values(), y.derivatives(), y.base().values(), {}, {}, vs, d,
                        opts, &r.pairs_scanned);
  r.r1_alpha = increment_scan(y.grid(), y.alpha(), y.derivatives(), vs * d, opts, &r.pairs_scanned);
  return r;
}

RemainderNorms remainder_distance(const ControlledPath& y, const ControlledPath& other, ScanOptions opts) {
  require_compatible(y, other);
  RemainderNorms r;
  const std::size_t vs = y.value_size();
  const std::size_t d = y.dim();
  const std::vector<double> dv = difference(y.values(), other.values());
  const std::vector<double> dd = difference(y.derivatives(), other.derivatives());
  if (same_base(y, other)) {
    // Remainders are linear in (Y, Y') for a fixed base.
    r.r0_2alpha = r0_scan(y.grid(), y.alpha(), dv, dd, y.base().values(), {}, {}, vs, d, opts,
                          &r.pairs_scanned);
  } else {
    r.r0_2alpha = r0_scan(y.grid(), y.alpha(), dv, y.derivatives(), y.base().values(), other.derivatives(),
                          other.base().values(), vs, d, opts, &r.pairs_scanned);
  }
  r.r1_alpha = increment_scan(y.grid(), y.alpha(), dd, vs * d, opts, &r.pairs_scanned);
  return r;
}

HolderReport controlled_report(const ControlledPath& y, ScanOptions opts) {
  HolderReport r = holder_norms(y.base(), opts);
  const RemainderNorms rn = remainder_norms(y, opts);
  r.r0_2alpha = rn.r0_2alpha;
  r.r1_alpha = rn.r1_alpha;
  r.seminorm = rn.r0_2alpha + rn.r1_alpha;
  r.pairs_scanned += rn.pairs_scanned;
  return r;
}

double controlled_seminorm(const ControlledPath& y, ScanOptions opts) {
  const RemainderNorms r = remainder_norms(y, opts);
  return r.r0_2alpha + r.r1_alpha;
}

double controlled_distance(const ControlledPath& y, const ControlledPath& other, ScanOptions opts) {
  const RemainderNorms r = remainder_distance(y, other, opts);
  return r.r0_2alpha + r.r1_alpha;
}

double rough_distance(const RoughPath& a, const RoughPath& b, ScanOptions opts) {
  if (!(a.grid() == b.grid()) || a.dim() != b.dim()) {
    throw InvalidArgument("core", "rough_distance: paths differ in grid or dimension");
  }
  const std::vector<double> dx = difference(a.values(), b.values());
  const double first = increment_scan(a.grid(), a.alpha(), dx, a.dim(), opts, nullptr);
  const double second = area_scan(a, &b, opts, nullptr);
  return first + second;
}

double path_holder(const Grid& grid, std::span<const double> values, std::size_t width, double gamma,
                   ScanOptions opts) {
  if (values.size() != grid.nodes() * width) {
    throw InvalidArgument("core", "path_holder: value count does not match grid");
  }
  return increment_scan(grid, gamma, values, width, opts, nullptr);
}

double sup_gap(std::span<const double> a, std::span<const double> b, std::size_t width) {
  if (a.size() != b.size()) throw InvalidArgument("core", "sup_gap: size mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); k += width) {
    m = std::max(m, tensor::squared_distance(a.subspan(k, width), b.subspan(k, width)));
  }
  return std::sqrt(m);
}

double sup_norm(std::span<const double> a, std::size_t width) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); k += width) m = std::max(m, tensor::squared_norm(a.subspan(k, width)));
  return std::sqrt(m);
}

}  // namespace roughlab
