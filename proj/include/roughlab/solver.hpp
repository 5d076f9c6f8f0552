#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "roughlab/controlled_path.hpp"
#include "roughlab/error.hpp"
#include "roughlab/vector_field.hpp"

namespace roughlab {

// dY = F(Y) dZ, Y(0) = y0, with Z a q-dimensional controlled path (shape q x 1)
// over a d-dimensional rough path and F : R^m -> R^{m x q}. Solutions are
// m x 1 controlled paths on the base of Z.

struct SolveConfig {
  double tol = 1e-10;                  // on sup node gap + seminorm gap of successive iterates
  std::size_t max_iters = 50;          // Picard iterations per window
  std::size_t tau_shrink = 2;          // window division factor after a rejected window
  std::size_t min_window_cells = 4;    // smallest admissible window
  std::size_t initial_window_cells = 0;  // 0 means the whole grid
};

/// Throws InvalidArgument for a configuration that cannot be run.
void validate(const SolveConfig& cfg);

/// Bookkeeping for one attempted window [start, end] (global node indices).
struct WindowRecord {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t iterations = 0;
  double ratio = 0.0;     // last observed gap_k / gap_{k-1}
  double residual = 0.0;  // residual of the returned iterate on the window
  bool accepted = false;
  std::string reason;       // why a window was rejected
  std::vector<double> gaps;  // successive-iterate gaps, one per iteration
  std::vector<double> residuals;  // residual of every iterate (when recorded)
  double ball_radius = 0.0;       // R of the local existence argument
  double center_distance = 0.0;   // ‖Y - H‖_{X;α} of the returned iterate
  bool ball_exceeded = false;     // center_distance > 10 R
};

struct SolveReport {
  std::vector<WindowRecord> windows;  // rejected attempts included, in order
  std::size_t total_picard_iters = 0;
  std::size_t halvings = 0;
  double final_residual = 0.0;  // residual of the stitched path over [0, T]
  bool success = false;
};

/// Raised by solve when no admissible window exists; carries the windows
/// attempted so far.
class SolveFailure : public NumericalError {
 public:
  SolveFailure(const std::string& what, SolveReport report)
      : NumericalError("solver", what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// M(Y) = (y0 + ∫_0^· F(Y) dZ, F(Y) Z') with y0 = Y(0).
ControlledPath picard_map(const VectorField& f, const ControlledPath& z, const ControlledPath& y);

/// H_t = y0 + F(y0) Z'_0 X_{0,t}, H' = F(y0) Z'_0. Both remainders vanish.
ControlledPath initial_center(const VectorField& f, std::span<const double> y0, const ControlledPath& z);

/// sup_k |Y_k - M(Y)_k| + d(Y, M(Y)).
double fixed_point_gap(const VectorField& f, const ControlledPath& z, const ControlledPath& y);

/// max_k |Y'_k - F(Y_k) Z'_k|.
double derivative_deviation(const VectorField& f, const ControlledPath& z, const ControlledPath& y);

/// max(fixed_point_gap, derivative_deviation).
double residual(const VectorField& f, const ControlledPath& z, const ControlledPath& y);

struct LocalSolve {
  ControlledPath path;  // on the windowed base, re-based at time 0
  WindowRecord record;
};

/// Picard iteration on nodes first..last. Starts from `guess` (a path on the
/// windowed base, starting at y0) or from the center H. A window that does not contract is
/// returned with record.accepted == false. Set `track_residuals` to record the
/// residual of every iterate.
LocalSolve solve_local(const VectorField& f, const ControlledPath& z, std::span<const double> y0,
                       std::size_t first, std::size_t last, const SolveConfig& cfg,
                       const ControlledPath* guess = nullptr, bool track_residuals = false);

struct Solution {
  ControlledPath path;
  SolveReport report;
};

/// Global solve by stitching windows, halving the window on rejection.
/// Throws SolveFailure once a window would drop below min_window_cells.
Solution solve(const VectorField& f, const ControlledPath& z, std::span<const double> y0,
               const SolveConfig& cfg = {});

/// Explicit level-2 scheme for Z = (X, id):
///   Y_{k+1} = Y_k + F(Y_k) X_{k,k+1} + Σ_{b,c,i} ∂_c F_ab(Y_k) F_ci(Y_k) 𝕏_{k,k+1}[i][b],
/// with derivative F(Y). Coded independently of the Picard machinery.
ControlledPath solve_classical(const VectorField& f, RoughPathPtr base, std::span<const double> y0);

}  // namespace roughlab
