#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <string>

#include "roughlab/error.hpp"
#include "roughlab/lift.hpp"
#include "roughlab/rng.hpp"

namespace roughlab {
namespace {

std::vector<double> brownian(const SignalSpec& spec, const Grid& grid) {
  const std::size_t d = spec.dim;
  const std::size_t n = grid.cells();
  std::vector<double> x((n + 1) * d, 0.0);
  for (std::size_t p = 0; p < d; ++p) {
    const GaussianStream normals(spec.seed, p);
    for (std::size_t k = 0; k < n; ++k) {
      const double sd = std::sqrt(grid.time(k + 1) - grid.time(k));
      x[(k + 1) * d + p] = x[k * d + p] + sd * normals.at(k);
    }
  }
  return x;
}

// Exact fBm: B = L ξ with L the Cholesky factor of
// Cov(B_s, B_t) = ½ (s^{2H} + t^{2H} - |t - s|^{2H}) on t_1..t_n.
std::vector<double> fractional(const SignalSpec& spec, const Grid& grid) {
  const double h = spec.hurst;
  if (!(h > 1.0 / 3.0 && h <= 1.0)) {
    throw InvalidArgument("lift", "fbm Hurst index must lie in (1/3, 1], got " + std::to_string(h));
  }
  const std::size_t n = grid.cells();
  if (n > kMaxFbmCells) {
    throw InvalidArgument("lift", "fbm grid has " + std::to_string(n) + " cells, limit is " +
                                      std::to_string(kMaxFbmCells));
  }
  const std::size_t d = spec.dim;
  std::vector<double> x((n + 1) * d, 0.0);

  if (h == 1.0) {
    // Degenerate covariance s t: B_t = t ξ.
    for (std::size_t p = 0; p < d; ++p) {
      const double xi = GaussianStream(spec.seed, p).at(0);
      for (std::size_t k = 0; k <= n; ++k) x[k * d + p] = grid.time(k) * xi;
    }
    return x;
  }

  const double two_h = 2.0 * h;
  Eigen::MatrixXd cov(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    const double s = grid.time(a + 1);
    for (std::size_t b = 0; b <= a; ++b) {
      const double t = grid.time(b + 1);
      const double c = 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(s - t), two_h));
      cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = c;
      cov(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = c;
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("lift", "fbm covariance is not numerically positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();
  Eigen::VectorXd xi(static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < d; ++p) {
    const GaussianStream normals(spec.seed, p);
    for (std::size_t k = 0; k < n; ++k) xi[static_cast<Eigen::Index>(k)] = normals.at(k);
    const Eigen::VectorXd b = lower * xi;
    for (std::size_t k = 0; k < n; ++k) x[(k + 1) * d + p] = b[static_cast<Eigen::Index>(k)];
  }
  return x;
}

std::vector<double> sinusoid(const SignalSpec& spec, const Grid& grid) {
  if (spec.omega.empty()) throw InvalidArgument("lift", "sin signal needs at least one frequency");
  const std::size_t d = spec.dim;
  if (spec.omega.size() != 1 && spec.omega.size() != d) {
    throw InvalidArgument("lift", "sin signal needs 1 or d frequencies");
  }
  if (!spec.phase.empty() && spec.phase.size() != d) {
    throw InvalidArgument("lift", "sin signal needs 0 or d phases");
  }
  std::vector<double> x(grid.nodes() * d);
  for (std::size_t p = 0; p < d; ++p) {
    const double w = spec.omega.size() == 1 ? spec.omega[0] * static_cast<double>(p + 1) : spec.omega[p];
    const double phi = spec.phase.empty() ? 0.0 : spec.phase[p];
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
      x[k * d + p] = spec.amplitude * std::sin(w * grid.time(k) + phi);
    }
  }
  return x;
}

std::vector<double> polynomial(const SignalSpec& spec, const Grid& grid) {
  const std::size_t d = spec.dim;
  if (spec.coefficients.size() != 1 && spec.coefficients.size() != d) {
    throw InvalidArgument("lift", "poly signal needs 1 or d coefficient rows");
  }
  std::vector<double> x(grid.nodes() * d);
  for (std::size_t p = 0; p < d; ++p) {
    const auto& c = spec.coefficients.size() == 1 ? spec.coefficients[0] : spec.coefficients[p];
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
      const double t = grid.time(k);
      double v = 0.0;
      for (std::size_t m = c.size(); m-- > 0;) v = v * t + c[m];  // Horner
      x[k * d + p] = v;
    }
  }
  return x;
}

}  // namespace

std::vector<double> sample_signal(const SignalSpec& spec, const Grid& grid) {
  if (spec.dim == 0) throw InvalidArgument("lift", "signal dimension must be positive");
  switch (spec.kind) {
    case SignalKind::bm:
      return brownian(spec, grid);
    case SignalKind::fbm:
      return fractional(spec, grid);
    case SignalKind::sin:
      return sinusoid(spec, grid);
    case SignalKind::poly:
      return polynomial(spec, grid);
    case SignalKind::samples:
      if (spec.samples.size() != grid.nodes() * spec.dim) {
        throw InvalidArgument("lift", "custom samples: expected " + std::to_string(grid.nodes() * spec.dim) +
                                          " values, got " + std::to_string(spec.samples.size()));
      }
      return spec.samples;
  }
  throw InvalidArgument("lift", "unknown signal kind");
}

}  // namespace roughlab
