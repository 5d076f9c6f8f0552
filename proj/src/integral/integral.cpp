#include "roughlab/integral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roughlab/compensated.hpp"
#include "roughlab/error.hpp"
#include "roughlab/norms.hpp"
#include "roughlab/tensor.hpp"

namespace roughlab {
namespace {

void require_pair(const ControlledPath& y, const ControlledPath& z) {
  if (!same_base(y, z)) throw InvalidArgument("integral", "integrand and integrator have different bases");
  if (z.shape().cols != 1) throw InvalidArgument("integral", "integrator must be vector-valued");
  if (y.shape().cols != z.shape().rows) {
    throw InvalidArgument("integral", "integrand has " + std::to_string(y.shape().cols) +
                                          " columns but integrator has dimension " +
                                          std::to_string(z.shape().rows));
  }
}

void require_range(const ControlledPath& y, std::size_t i, std::size_t j) {
  if (i > j || j > y.cells()) {
    throw InvalidArgument("integral", "need 0 <= i <= j <= n, got i=" + std::to_string(i) +
                                          " j=" + std::to_string(j));
  }
}

// Evaluates the two compensated-sum terms of one pair into scratch buffers.
class PairTerms {
 public:
  PairTerms(const ControlledPath& y, const ControlledPath& z)
      : y_(y),
        z_(z),
        d_(y.dim()),
        w_(z.shape().rows),
        dz_(w_),
        dx_(d_),
        area_(d_ * d_),
        m_(w_ * d_),
        term1_(y.shape().rows),
        term2_(y.shape().rows) {}

  void eval(std::size_t p, std::size_t q) {
    if (q == p + 1) {
      const auto a = y_.base().cell_area(p);
      std::copy(a.begin(), a.end(), area_.begin());
    } else {
      y_.base().chen_pair_into(p, q, dx_, area_);
    }
    eval_with_area(p, q, area_);
  }

  // Same as eval but with a caller-supplied second level over (t_p, t_q).
  void eval_with_area(std::size_t p, std::size_t q, std::span<const double> area) {
    const auto zp = z_.value(p);
    const auto zq = z_.value(q);
    for (std::size_t b = 0; b < w_; ++b) dz_[b] = zq[b] - zp[b];
    tensor::matvec(y_.value(p), dz_, term1_);
    // m[b, i] = Σ_j Z'_bj 𝕏[i][j]
    const auto zd = z_.derivative(p);
    for (std::size_t b = 0; b < w_; ++b) {
      for (std::size_t i = 0; i < d_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d_; ++j) s += zd[b * d_ + j] * area[i * d_ + j];
        m_[b * d_ + i] = s;
      }
    }
    tensor::matvec(y_.derivative(p), m_, term2_);
  }

  std::span<const double> term1() const { return term1_; }
  std::span<const double> term2() const { return term2_; }

 private:
  const ControlledPath& y_;
  const ControlledPath& z_;
  std::size_t d_;
  std::size_t w_;
  std::vector<double> dz_, dx_, area_, m_, term1_, term2_;
};

double integrand_seminorm_plus_start(const ControlledPath& p) {
  return tensor::norm(p.derivative(0)) + controlled_seminorm(p);
}

}  // namespace

std::vector<double> compensated_sum(const ControlledPath& y, const ControlledPath& z,
                                    std::span<const std::size_t> nodes) {
  require_pair(y, z);
  if (nodes.size() < 2) throw InvalidArgument("integral", "a partition needs at least two nodes");
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    if (nodes[k] >= nodes[k + 1]) throw InvalidArgument("integral", "partition nodes must strictly increase");
  }
  if (nodes.back() > y.cells()) throw InvalidArgument("integral", "partition node beyond the grid");

  PairTerms terms(y, z);
  NeumaierVector acc(y.shape().rows);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    terms.eval(nodes[k], nodes[k + 1]);
    acc.add(terms.term1());
    acc.add(terms.term2());
  }
  return acc.value();
}

std::vector<double> rough_integral(const ControlledPath& y, const ControlledPath& z, std::size_t i,
                                   std::size_t j) {
  require_pair(y, z);
  require_range(y, i, j);
  PairTerms terms(y, z);
  NeumaierVector acc(y.shape().rows);
  for (std::size_t k = i; k < j; ++k) {
    terms.eval(k, k + 1);
    acc.add(terms.term1());
    acc.add(terms.term2());
  }
  return acc.value();
}

ControlledPath integral_controlled(const ControlledPath& y, const ControlledPath& z) {
  require_pair(y, z);
  const std::size_t u = y.shape().rows;
  const std::size_t w = z.shape().rows;
  const std::size_t d = y.dim();
  const std::size_t n = y.cells();

  std::vector<double> values((n + 1) * u, 0.0);
  PairTerms terms(y, z);
  NeumaierVector acc(u);
  for (std::size_t k = 0; k < n; ++k) {
    terms.eval(k, k + 1);
    acc.add(terms.term1());
    acc.add(terms.term2());
    acc.value_into(std::span<double>(values).subspan((k + 1) * u, u));
  }

  std::vector<double> derivs((n + 1) * u * d, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto yk = y.value(k);
    const auto zd = z.derivative(k);
    double* out = derivs.data() + k * u * d;
    for (std::size_t a = 0; a < u; ++a) {
      for (std::size_t b = 0; b < w; ++b) {
        const double yab = yk[a * w + b];
        for (std::size_t i = 0; i < d; ++i) out[a * d + i] += yab * zd[b * d + i];
      }
    }
  }
  return ControlledPath(y.base_ptr(), ValueShape{u, 1}, std::move(values), std::move(derivs));
}

double local_expansion_error(const ControlledPath& y, const ControlledPath& z, std::size_t i,
                             std::size_t j) {
  require_range(y, i, j);
  if (i == j) throw InvalidArgument("integral", "local expansion needs i < j");
  const auto full = rough_integral(y, z, i, j);
  const std::size_t ends[2] = {i, j};
  const auto coarse = compensated_sum(y, z, ends);
  return tensor::distance(full, coarse);
}

RateFit fit_rate(std::vector<RateFit::Point> points) {
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.scale > b.scale; });
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!(points[k].scale > 0.0)) throw InvalidArgument("integral", "rate fit scales must be positive");
    if (k > 0 && points[k].scale == points[k - 1].scale) {
      throw InvalidArgument("integral", "rate fit scales must be distinct");
    }
  }
  RateFit fit;
  fit.points = std::move(points);

  std::vector<double> lx, ly;
  for (const auto& p : fit.points) {
    if (std::isfinite(p.error) && p.error > kRateNoiseFloor) {
      lx.push_back(std::log(p.scale));
      ly.push_back(std::log(p.error));
    }
  }
  fit.used = lx.size();
  if (fit.used < 3) {
    fit.degenerate = true;
    return fit;
  }
  const double m = static_cast<double>(fit.used);
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < fit.used; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < fit.used; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

RateFit mesh_convergence(const ControlledPath& y, const ControlledPath& z,
                         std::span<const std::size_t> factors) {
  require_pair(y, z);
  if (factors.size() < 3) throw InvalidArgument("integral", "mesh convergence needs at least 3 levels");
  const std::size_t n = y.cells();
  const auto reference = rough_integral(y, z, 0, n);
  std::vector<RateFit::Point> points;
  for (const std::size_t f : factors) {
    if (f == 0 || n % f != 0) {
      throw InvalidArgument("integral", "factor " + std::to_string(f) + " does not divide " +
                                            std::to_string(n) + " cells");
    }
    std::vector<std::size_t> nodes;
    for (std::size_t k = 0; k <= n; k += f) nodes.push_back(k);
    const auto coarse = compensated_sum(y, z, nodes);
    points.push_back({y.grid().subsample(f).mesh(), tensor::distance(coarse, reference)});
  }
  return fit_rate(std::move(points));
}

RateFit local_expansion_rate(const ControlledPath& y, const ControlledPath& z) {
  require_pair(y, z);
  const std::size_t n = y.cells();
  std::size_t levels = 0;
  while ((std::size_t{2} << (levels + 3)) <= n) ++levels;  // 2^(levels+3) <= n

  std::vector<RateFit::Point> points;
  for (std::size_t k = 1; k <= levels; ++k) {
    const std::size_t len = std::size_t{1} << k;
    NeumaierSum err;
    NeumaierSum width;
    std::size_t count = 0;
    for (std::size_t s = 0; s + len <= n; s += len) {
      err.add(local_expansion_error(y, z, s, s + len));
      width.add(y.grid().time(s + len) - y.grid().time(s));
      ++count;
    }
    const double c = static_cast<double>(count);
    points.push_back({width.value() / c, err.value() / c});
  }
  return fit_rate(std::move(points));
}

double point_removal_gap(const ControlledPath& y, const ControlledPath& z,
                         std::span<const std::size_t> nodes, std::size_t removed) {
  if (removed == 0 || removed + 1 >= nodes.size()) {
    throw InvalidArgument("integral", "only interior partition nodes can be removed");
  }
  // Only the two cells adjacent to the removed node differ between the sums.
  const std::size_t with[3] = {nodes[removed - 1], nodes[removed], nodes[removed + 1]};
  const std::size_t without[2] = {nodes[removed - 1], nodes[removed + 1]};
  return tensor::distance(compensated_sum(y, z, with), compensated_sum(y, z, without));
}

double point_removal_constant(const ControlledPath& y, const ControlledPath& z) {
  require_pair(y, z);
  const double a = y.alpha();
  const double t = y.grid().horizon();
  const HolderReport x = holder_norms(y.base());
  return (1.0 + std::pow(t, a) + std::pow(t, 2.0 * a)) * integrand_seminorm_plus_start(y) *
         integrand_seminorm_plus_start(z) * (1.0 + x.rough_norm());
}

std::vector<double> classical_rough_integral(const ControlledPath& y, std::size_t i, std::size_t j) {
  const std::size_t d = y.dim();
  if (y.shape().cols != d) {
    throw InvalidArgument("integral", "classical integrand must have one column per driver component");
  }
  require_range(y, i, j);
  const std::size_t u = y.shape().rows;
  const RoughPath& x = y.base();
  std::vector<NeumaierSum> acc(u);
  for (std::size_t k = i; k < j; ++k) {
    const auto yv = y.value(k);
    const auto yd = y.derivative(k);
    const auto x0 = x.value(k);
    const auto x1 = x.value(k + 1);
    const auto area = x.cell_area(k);
    for (std::size_t a = 0; a < u; ++a) {
      double first = 0.0;
      double second = 0.0;
      for (std::size_t b = 0; b < d; ++b) {
        first += yv[a * d + b] * (x1[b] - x0[b]);
        for (std::size_t c = 0; c < d; ++c) second += yd[(a * d + b) * d + c] * area[c * d + b];
      }
      acc[a].add(first);
      acc[a].add(second);
    }
  }
  std::vector<double> out(u);
  for (std::size_t a = 0; a < u; ++a) out[a] = acc[a].value();
  return out;
}

}  // namespace roughlab
