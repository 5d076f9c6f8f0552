#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "roughlab/controlled_path.hpp"

namespace roughlab {

// Shapes for ∫ Y dZ: Y takes values in L(W, U) = u x w matrices with
// derivative u x w x d, Z takes values in W = R^w (shape w x 1) with
// derivative w x d. Both must be controlled by the same rough path.

/// Σ over consecutive node pairs (p, q) of
///   Y(t_p) Z_{t_p,t_q} + Y'(t_p) Z'(t_p) 𝕏_{t_p,t_q},
/// with term1_a = Σ_b Y_ab Z_b and term2_a = Σ_{b,i,j} Y'_abi Z'_bj 𝕏[i][j].
/// `nodes` is a strictly increasing list of at least two grid indices.
std::vector<double> compensated_sum(const ControlledPath& y, const ControlledPath& z,
                                    std::span<const std::size_t> nodes);

/// ∫_{t_i}^{t_j} Y dZ: the compensated sum over every grid node in [t_i, t_j].
std::vector<double> rough_integral(const ControlledPath& y, const ControlledPath& z, std::size_t i,
                                   std::size_t j);

/// (∫_0^· Y dZ, Y Z') as a controlled path over the same base, with
/// (Y Z')_ai = Σ_b Y_ab Z'_bi.
ControlledPath integral_controlled(const ControlledPath& y, const ControlledPath& z);

/// |∫_{t_i}^{t_j} Y dZ - Y_{t_i} Z_{t_i,t_j} - Y'_{t_i} Z'_{t_i} 𝕏_{t_i,t_j}|.
double local_expansion_error(const ControlledPath& y, const ControlledPath& z, std::size_t i,
                             std::size_t j);

/// Least-squares fit of log(error) = slope * log(scale) + intercept.
struct RateFit {
  struct Point {
    double scale = 0.0;
    double error = 0.0;
  };
  std::vector<Point> points;  // every measured point, scales strictly decreasing
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t used = 0;     // points above the noise floor that entered the fit
  bool degenerate = false;  // fewer than 3 usable points; slope is meaningless
};

/// Errors at or below this value are treated as floating-point noise.
inline constexpr double kRateNoiseFloor = 1e-13;

/// Fits the points, which are sorted by decreasing scale first. Scales must be
/// positive and distinct.
RateFit fit_rate(std::vector<RateFit::Point> points);

/// For each factor f: error_f = |compensated sum over every f-th node -
/// full-grid integral over [0, T]|, fitted against the coarse mesh f-fold.
RateFit mesh_convergence(const ControlledPath& y, const ControlledPath& z,
                         std::span<const std::size_t> factors);

/// Mean local expansion error over disjoint windows of 2^k cells,
/// k = 1 .. floor(log2 n) - 3, fitted against the window length.
RateFit local_expansion_rate(const ControlledPath& y, const ControlledPath& z);

/// |sum_P - sum_{P \ {t}}| where t = nodes[removed] is an interior node of P.
double point_removal_gap(const ControlledPath& y, const ControlledPath& z,
                         std::span<const std::size_t> nodes, std::size_t removed);

/// K = (1 + T^α + T^{2α}) (|Y'_0| + ‖Y‖_{X;α}) (|Z'_0| + ‖Z‖_{X;α})
///     (1 + ‖X‖_α + ‖𝕏‖_{2α}),
/// the constant in |sum_P - sum_{P\{t_j}}| <= K (t_{j+1} - t_{j-1})^{3α}.
double point_removal_constant(const ControlledPath& y, const ControlledPath& z);

/// Classical integral of an X-controlled path against the rough path itself:
/// Σ Y_ab X^b_{p,q} + Σ Y'_abi 𝕏_{p,q}[i][b] over every cell of [t_i, t_j].
/// Y must have shape u x d.
std::vector<double> classical_rough_integral(const ControlledPath& y, std::size_t i, std::size_t j);

}  // namespace roughlab
