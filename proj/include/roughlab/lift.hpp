#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "roughlab/grid.hpp"
#include "roughlab/rough_path.hpp"

namespace roughlab {

enum class SignalKind { bm, fbm, sin, poly, samples };

/// Description of a first-level signal in R^d.
///
///  - bm:      independent Gaussian increments of variance Δt per coordinate
///  - fbm:     fractional Brownian motion with Hurst index `hurst` in (1/3, 1],
///             sampled exactly from its covariance
///  - sin:     X^k_t = amplitude * sin(omega_k t + phase_k); a single omega is
///             applied as omega * (k + 1), missing phases default to 0
///  - poly:    X^k_t = sum_p coefficients_k[p] t^p; a single coefficient row is
///             shared by all coordinates
///  - samples: user-provided node values, (n+1) * d row-major
struct SignalSpec {
  SignalKind kind = SignalKind::bm;
  std::size_t dim = 1;
  double hurst = 0.5;
  double amplitude = 1.0;
  std::vector<double> omega{1.0};
  std::vector<double> phase;
  std::vector<std::vector<double>> coefficients{{0.0, 1.0}};
  std::vector<double> samples;
  std::uint64_t seed = 0;
};

/// Largest fBm grid (in cells) accepted by the dense covariance factorization.
inline constexpr std::size_t kMaxFbmCells = std::size_t{1} << 13;

/// Node values of the signal on `grid`, (n+1) * d row-major. Deterministic in
/// (spec, grid).
std::vector<double> sample_signal(const SignalSpec& spec, const Grid& grid);

/// Geometric lift: per-cell area ½ ΔX ⊗ ΔX, the exact iterated integral of
/// the piecewise-linear interpolant.
RoughPathPtr lift_piecewise_linear(const Grid& grid, std::span<const double> samples, std::size_t dim,
                                   double alpha);

/// Itô lift of Brownian samples: per-cell area ½ (ΔW ⊗ ΔW - Δt I). Marked
/// non-geometric.
RoughPathPtr lift_ito(const Grid& grid, std::span<const double> samples, std::size_t dim, double alpha);

/// Keeps every factor-th node; coarse cell areas are Chen-accumulated from the
/// fine cells, so the result represents the same rough path on fewer nodes.
/// `factor` must be a power of two dividing n; coarsening is performed by
/// repeated halving so coarsen(coarsen(R, 2), 2) == coarsen(R, 4) bit for bit.
RoughPathPtr coarsen(const RoughPath& path, std::size_t factor);

/// Smoothed driver for Wong-Zakai studies: the first level is subsampled at
/// every factor-th node, linearly interpolated back onto the fine grid and
/// lifted piecewise-linearly. The result shares the fine grid.
RoughPathPtr relift_linear(const RoughPath& path, std::size_t factor);

}  // namespace roughlab
