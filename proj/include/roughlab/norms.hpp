#pragma once

#include <cstddef>
#include <span>

#include "roughlab/controlled_path.hpp"
#include "roughlab/holder_scan.hpp"
#include "roughlab/rough_path.hpp"

namespace roughlab {

/// Hölder norms computed as maxima over grid pairs. These are lower bounds of
/// the continuum norms of any path interpolating the grid data.
struct HolderReport {
  double x_alpha = 0.0;     // ‖X‖_α
  double xx_2alpha = 0.0;   // ‖𝕏‖_{2α}
  double r0_2alpha = 0.0;   // ‖R^0‖_{2α}
  double r1_alpha = 0.0;    // ‖R^1‖_α
  double seminorm = 0.0;    // ‖Y‖_{X;α} = ‖R^0‖_{2α} + ‖R^1‖_α
  std::size_t pairs_scanned = 0;

  /// ‖X‖_α + ‖𝕏‖_{2α}, the homogeneous rough path norm.
  double rough_norm() const { return x_alpha + xx_2alpha; }
};

/// ‖X‖_α and ‖𝕏‖_{2α} of a rough path by an exhaustive row-wise Chen scan.
HolderReport holder_norms(const RoughPath& path, ScanOptions opts = {});

/// Driver norms plus remainder norms of a controlled path.
HolderReport controlled_report(const ControlledPath& y, ScanOptions opts = {});

/// ‖R^0‖_{2α} + ‖R^1‖_α.
double controlled_seminorm(const ControlledPath& y, ScanOptions opts = {});

/// ‖R^{0,Y} - R^{0,Ỹ}‖_{2α} + ‖R^{1,Y} - R^{1,Ỹ}‖_α. The two paths must share
/// grid and value shape; their bases may differ.
double controlled_distance(const ControlledPath& y, const ControlledPath& other, ScanOptions opts = {});

/// Separate remainder norms; seminorm == r0 + r1.
struct RemainderNorms {
  double r0_2alpha = 0.0;
  double r1_alpha = 0.0;
  std::size_t pairs_scanned = 0;
};
RemainderNorms remainder_norms(const ControlledPath& y, ScanOptions opts = {});
RemainderNorms remainder_distance(const ControlledPath& y, const ControlledPath& other,
                                  ScanOptions opts = {});

/// ‖X - X̃‖_α + ‖𝕏 - 𝕏̃‖_{2α} over grid pairs.
double rough_distance(const RoughPath& a, const RoughPath& b, ScanOptions opts = {});

/// γ-Hölder seminorm of a path with `width` components per node.
double path_holder(const Grid& grid, std::span<const double> values, std::size_t width, double gamma,
                   ScanOptions opts = {});

/// max_k |a_k - b_k| over nodes, with `width` components per node.
double sup_gap(std::span<const double> a, std::span<const double> b, std::size_t width);

/// max_k |a_k| over nodes.
double sup_norm(std::span<const double> a, std::size_t width);

}  // namespace roughlab
