#include "roughlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "roughlab/integral.hpp"
#include "roughlab/norms.hpp"
#include "roughlab/tensor.hpp"

namespace roughlab {
namespace {

void require_problem(const VectorField& f, const ControlledPath& z) {
  if (z.shape().cols != 1) throw InvalidArgument("solver", "the driver Z must be vector-valued");
  if (z.shape().rows != f.q()) {
    throw InvalidArgument("solver", "field expects a driver of dimension " + std::to_string(f.q()) +
                                        ", got " + std::to_string(z.shape().rows));
  }
}

void require_state(const VectorField& f, const ControlledPath& y) {
  if (y.shape().cols != 1 || y.shape().rows != f.m()) {
    throw InvalidArgument("solver", "solution must be a vector of dimension " + std::to_string(f.m()));
  }
}

bool all_finite(const ControlledPath& y) {
  const auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(y.values().begin(), y.values().end(), finite) &&
         std::all_of(y.derivatives().begin(), y.derivatives().end(), finite);
}

// (F(Y_k) Z'_k)_{ai} = Σ_b F_ab(Y_k) Z'_bi at every node.
std::vector<double> field_times_driver(const VectorField& f, const ControlledPath& z, const ControlledPath& y) {
  const std::size_t m = f.m();
  const std::size_t q = f.q();
  const std::size_t d = z.dim();
  std::vector<double> out(y.nodes() * m * d, 0.0);
  std::vector<double> fy(m * q);
  for (std::size_t k = 0; k < y.nodes(); ++k) {
    f.eval(y.value(k), fy);
    const auto zd = z.derivative(k);
    double* o = out.data() + k * m * d;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < q; ++b) {
        for (std::size_t i = 0; i < d; ++i) o[a * d + i] += fy[a * q + b] * zd[b * d + i];
      }
    }
  }
  return out;
}

double successive_gap(const ControlledPath& a, const ControlledPath& b) {
  return sup_gap(a.values(), b.values(), a.value_size()) + controlled_distance(a, b);
}

// C_α = (1 + T^α + T^{2α}) 2^{3α} ζ(3α).
double sewing_constant(double horizon, double alpha) {
  const double ta = std::pow(horizon, alpha);
  return (1.0 + ta + ta * ta) * std::pow(2.0, 3.0 * alpha) * std::riemann_zeta(3.0 * alpha);
}

double ball_radius(const VectorField& f, const ControlledPath& z, const ControlledPath& y) {
  const auto& cb = f.cb_norms();
  if (!cb) return std::numeric_limits<double>::infinity();
  const double cb2 = cb->f + cb->df + cb->d2f;
  const HolderReport zr = controlled_report(z);
  return 2.0 * (1.0 + sewing_constant(z.grid().horizon(), z.alpha())) * cb2 *
         (1.0 + tensor::norm(y.derivative(0))) * (1.0 + tensor::norm(z.derivative(0))) * (1.0 + zr.rough_norm()) *
         (1.0 + zr.seminorm);
}

}  // namespace

void validate(const SolveConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw InvalidArgument("solver", "tol must be positive");
  if (cfg.max_iters < 1) throw InvalidArgument("solver", "max_iters must be at least 1");
  if (cfg.tau_shrink < 2) throw InvalidArgument("solver", "tau_shrink must be at least 2");
  if (cfg.min_window_cells < 1) throw InvalidArgument("solver", "min_window_cells must be at least 1");
}

ControlledPath picard_map(const VectorField& f, const ControlledPath& z, const ControlledPath& y) {
  require_problem(f, z);
  require_state(f, y);
  const ControlledPath integral = integral_controlled(compose(f, y), z);
  std::vector<double> values(integral.values().begin(), integral.values().end());
  const auto y0 = y.value(0);
  const std::size_t m = f.m();
  for (std::size_t k = 0; k < y.nodes(); ++k) {
    for (std::size_t a = 0; a < m; ++a) values[k * m + a] += y0[a];
  }
  return ControlledPath(z.base_ptr(), ValueShape{m, 1}, std::move(values),
                        std::vector<double>(integral.derivatives().begin(), integral.derivatives().end()));
}

ControlledPath initial_center(const VectorField& f, std::span<const double> y0, const ControlledPath& z) {
  require_problem(f, z);
  const std::size_t m = f.m();
  if (y0.size() != m) throw InvalidArgument("solver", "initial value has the wrong dimension");
  const std::size_t d = z.dim();
  const std::size_t q = f.q();
  const auto f0 = f.eval(y0);
  const auto z0 = z.derivative(0);
  std::vector<double> slope(m * d, 0.0);  // F(y0) Z'_0
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < q; ++b) {
      for (std::size_t i = 0; i < d; ++i) slope[a * d + i] += f0[a * q + b] * z0[b * d + i];
    }
  }
  const RoughPath& x = z.base();
  const auto x0 = x.value(0);
  std::vector<double> values(z.nodes() * m);
  std::vector<double> derivs(z.nodes() * m * d);
  std::vector<double> dx(d);
  for (std::size_t k = 0; k < z.nodes(); ++k) {
    const auto xk = x.value(k);
    for (std::size_t i = 0; i < d; ++i) dx[i] = xk[i] - x0[i];
    auto out = std::span<double>(values).subspan(k * m, m);
    tensor::matvec(slope, dx, out);
    for (std::size_t a = 0; a < m; ++a) out[a] += y0[a];
    std::copy(slope.begin(), slope.end(), derivs.begin() + static_cast<std::ptrdiff_t>(k * m * d));
  }
  return ControlledPath(z.base_ptr(), ValueShape{m, 1}, std::move(values), std::move(derivs));
}

double fixed_point_gap(const VectorField& f, const ControlledPath& z, const ControlledPath& y) {
  return successive_gap(y, picard_map(f, z, y));
}

double derivative_deviation(const VectorField& f, const ControlledPath& z, const ControlledPath& y) {
  require_problem(f, z);
  require_state(f, y);
  const auto target = field_times_driver(f, z, y);
  return sup_gap(y.derivatives(), target, y.derivative_size());
}

double residual(const VectorField& f, const ControlledPath& z, const ControlledPath& y) {
  return std::max(fixed_point_gap(f, z, y), derivative_deviation(f, z, y));
}

LocalSolve solve_local(const VectorField& f, const ControlledPath& z, std::span<const double> y0,
                       std::size_t first, std::size_t last, const SolveConfig& cfg, const ControlledPath* guess,
                       bool track_residuals) {
  validate(cfg);
  require_problem(f, z);
  if (first >= last || last > z.cells()) {
    throw InvalidArgument("solver", "invalid window [" + std::to_string(first) + ", " + std::to_string(last) + "]");
  }
  const ControlledPath zw = (first == 0 && last == z.cells()) ? z : z.window(first, last);
  ControlledPath y = guess ? *guess : initial_center(f, y0, zw);
  if (guess) {
    require_state(f, *guess);
    if (!(guess->grid() == zw.grid())) throw InvalidArgument("solver", "initial guess lives on another grid");
    if (sup_gap(guess->value(0), y0, y0.size()) != 0.0) {
      throw InvalidArgument("solver", "initial guess must start at the initial value");
    }
    y = guess->rebased(zw.base_ptr());
  }

  WindowRecord rec;
  rec.start = first;
  rec.end = last;
  bool converged = false;
  std::size_t above = 0;
  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    ControlledPath next = picard_map(f, zw, y);
    rec.iterations = it;
    if (!all_finite(next)) {
      rec.reason = "non-finite iterate";
      break;
    }
    const double g = successive_gap(y, next);
    if (!std::isfinite(g)) {
      rec.reason = "non-finite iterate";
      break;
    }
    rec.gaps.push_back(g);
    if (rec.gaps.size() >= 2) {
      const double prev = rec.gaps[rec.gaps.size() - 2];
      rec.ratio = prev > 0.0 ? g / prev : 0.0;
      above = rec.ratio > 0.5 ? above + 1 : 0;
    }
    y = std::move(next);
    if (track_residuals) rec.residuals.push_back(residual(f, zw, y));
    if (g <= cfg.tol) {
      converged = true;
      break;
    }
    if (above >= 3) {
      rec.reason = "gap ratio above 1/2 for 3 consecutive iterations";
      break;
    }
  }
  if (!converged && rec.reason.empty()) rec.reason = "iteration cap reached";
  if (converged && rec.ratio > 0.5 + 1e-9) {
    rec.reason = "final gap ratio " + std::to_string(rec.ratio) + " above 1/2";
    converged = false;
  }
  if (!converged) return {std::move(y), std::move(rec)};

  // Remark 3.8 fixes the derivative of the solution: Y' = F(Y) Z'.
  y = ControlledPath(zw.base_ptr(), y.shape(), std::vector<double>(y.values().begin(), y.values().end()),
                     field_times_driver(f, zw, y));
  rec.residual = residual(f, zw, y);
  rec.accepted = true;
  rec.ball_radius = ball_radius(f, zw, y);
  rec.center_distance = controlled_distance(y, initial_center(f, y0, zw));
  rec.ball_exceeded = rec.center_distance > 10.0 * rec.ball_radius;
  return {std::move(y), std::move(rec)};
}

Solution solve(const VectorField& f, const ControlledPath& z, std::span<const double> y0, const SolveConfig& cfg) {
  validate(cfg);
  require_problem(f, z);
  const std::size_t m = f.m();
  const std::size_t d = z.dim();
  const std::size_t n = z.cells();
  if (y0.size() != m) throw InvalidArgument("solver", "initial value has the wrong dimension");
  if (n < cfg.min_window_cells) {
    throw InvalidArgument("solver", "grid has " + std::to_string(n) + " cells, fewer than min_window_cells");
  }

  SolveReport report;
  std::vector<double> values((n + 1) * m);
  std::vector<double> derivs((n + 1) * m * d);
  std::vector<double> start(y0.begin(), y0.end());
  std::size_t window = cfg.initial_window_cells ? std::min(cfg.initial_window_cells, n) : n;
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t w = std::min(window, n - pos);
    if (n - pos - w > 0 && n - pos - w < cfg.min_window_cells) w = n - pos;  // absorb a short tail
    LocalSolve local = solve_local(f, z, start, pos, pos + w, cfg);
    report.total_picard_iters += local.record.iterations;
    const bool ok = local.record.accepted;
    const std::string reason = local.record.reason;
    report.windows.push_back(std::move(local.record));
    if (!ok) {
      const std::size_t next = w / cfg.tau_shrink;
      if (next < cfg.min_window_cells) {
        throw SolveFailure("window [" + std::to_string(pos) + ", " + std::to_string(pos + w) + "] rejected (" +
                               reason + ") and cannot shrink below " + std::to_string(cfg.min_window_cells) +
                               " cells: driver too rough for this grid and alpha",
                           std::move(report));
      }
      window = next;
      ++report.halvings;
      continue;
    }
    const ControlledPath& y = local.path;
    std::copy(y.values().begin(), y.values().end(), values.begin() + static_cast<std::ptrdiff_t>(pos * m));
    std::copy(y.derivatives().begin(), y.derivatives().end(),
              derivs.begin() + static_cast<std::ptrdiff_t>(pos * m * d));
    const auto last = y.value(w);
    start.assign(last.begin(), last.end());
    pos += w;
  }
  ControlledPath path(z.base_ptr(), ValueShape{m, 1}, std::move(values), std::move(derivs));
  report.final_residual = residual(f, z, path);
  report.success = true;
  return {std::move(path), std::move(report)};
}

ControlledPath solve_classical(const VectorField& f, RoughPathPtr base, std::span<const double> y0) {
  const std::size_t d = base->dim();
  const std::size_t m = f.m();
  if (f.q() != d) throw InvalidArgument("solver", "classical scheme needs q equal to the driver dimension");
  if (y0.size() != m) throw InvalidArgument("solver", "initial value has the wrong dimension");
  const std::size_t n = base->cells();
  std::vector<double> values((n + 1) * m);
  std::vector<double> derivs((n + 1) * m * d);
  std::copy(y0.begin(), y0.end(), values.begin());
  std::vector<double> fy(m * d), df(f.deriv1_size());
  for (std::size_t k = 0;; ++k) {
    const std::span<const double> yk(values.data() + k * m, m);
    f.eval(yk, fy);
    std::copy(fy.begin(), fy.end(), derivs.begin() + static_cast<std::ptrdiff_t>(k * m * d));
    if (k == n) break;
    f.deriv1(yk, df);
    const auto x0 = base->value(k);
    const auto x1 = base->value(k + 1);
    const auto area = base->cell_area(k);
    for (std::size_t a = 0; a < m; ++a) {
      double v = yk[a];
      for (std::size_t b = 0; b < d; ++b) {
        v += fy[a * d + b] * (x1[b] - x0[b]);
        for (std::size_t c = 0; c < m; ++c) {
          const double g = df[(a * d + b) * m + c];
          for (std::size_t i = 0; i < d; ++i) v += g * fy[c * d + i] * area[i * d + b];
        }
      }
      if (!std::isfinite(v)) throw NumericalError("solver", "classical scheme produced a non-finite value");
      values[(k + 1) * m + a] = v;
    }
  }
  return ControlledPath(std::move(base), ValueShape{m, 1}, std::move(values), std::move(derivs));
}

}  // namespace roughlab
