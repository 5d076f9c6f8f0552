#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "roughlab/lab.hpp"
#include "roughlab/norms.hpp"
#include "roughlab/rng.hpp"
#include "roughlab/tensor.hpp"

namespace roughlab::lab {
namespace {

// Runs task(k) for k in [0, count) on a small pool. Results must be written
// to per-k slots by the task, so the outcome is independent of scheduling.
template <class Task>
void parallel_for(std::size_t count, Task&& task) {
  const std::size_t workers = worker_count(count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          task(k);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double start_gap(const ControlledPath& a, const ControlledPath& b) {
  return tensor::distance(a.value(0), b.value(0)) + tensor::distance(a.derivative(0), b.derivative(0));
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] < v[k - 1])) return false;
  }
  return true;
}

// Columns at rounding level, such as z_dist for Z = (X, id), count as zero.
constexpr double kZeroColumn = 1e-12;

bool negligible(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::abs(x) <= kZeroColumn; });
}

}  // namespace

std::size_t worker_count(std::size_t tasks) {
  std::size_t w = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ROUGHLAB_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap > 0) w = std::min<std::size_t>(w, cap);
  }
  return std::max<std::size_t>(1, std::min(w, tasks));
}

Grid build_grid(const ExperimentConfig& cfg) { return Grid::make(cfg.horizon, cfg.n, cfg.grid); }

RoughPathPtr build_driver(const ExperimentConfig& cfg, std::size_t trial) {
  const Grid grid = build_grid(cfg);
  SignalSpec spec = cfg.driver;
  spec.seed = derive_seed(cfg.seed, trial);
  const auto samples = sample_signal(spec, grid);
  return cfg.lift == LiftKind::ito ? lift_ito(grid, samples, spec.dim, cfg.alpha)
                                   : lift_piecewise_linear(grid, samples, spec.dim, cfg.alpha);
}

ControlledPath build_z(const ExperimentConfig& cfg, RoughPathPtr x) {
  switch (cfg.z_mode) {
    case ZMode::identity:
      return ControlledPath::identity(std::move(x));
    case ZMode::integral: {
      const std::size_t d = x->dim();
      const VectorField g = build_field(cfg.z_field, d, d);
      const ControlledPath id = ControlledPath::identity(std::move(x));
      return integral_controlled(compose(g, id), id);
    }
    case ZMode::custom:
      return ControlledPath(std::move(x), ValueShape{cfg.z_dim, 1}, cfg.z_values, cfg.z_derivatives);
  }
  throw InvalidArgument("lab", "unknown z_mode");
}

VectorField build_field(const FieldSpec& spec, std::size_t m, std::size_t q) {
  std::vector<double> lambda = spec.lambda;
  if (lambda.empty()) {
    const double s = spec.lambda_scalar.value_or(1.0);
    lambda.assign(m * q * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < q; ++b) lambda[(a * q + b) * m + a] = s;
    }
  }
  if (spec.name == "constant") {
    return constant_field(m, q, spec.a.empty() ? std::vector<double>(m * q, 0.0) : spec.a);
  }
  if (spec.name == "linear") return linear_field(m, q, std::move(lambda));
  if (spec.name == "tanh") return tanh_field(m, q, std::move(lambda), spec.scale);
  if (spec.name == "sin") return sin_field(m, q, std::move(lambda), spec.scale);
  if (spec.name == "rotation") {
    if (m != 2) throw InvalidArgument("lab", "the rotation field needs a 2-dimensional y0");
    std::vector<double> omega = spec.omega.empty() ? std::vector<double>(q, 1.0) : spec.omega;
    if (omega.size() != q) throw InvalidArgument("lab", "rotation omega must have one entry per Z component");
    return rotation_field(std::move(omega));
  }
  throw InvalidArgument("lab", "unknown field '" + spec.name + "'");
}

RatesResult run_rates(const ExperimentConfig& cfg) {
  if (cfg.levels.size() < 3) throw ConfigError("config: key 'levels': rates need at least 3 levels", "levels", 0);
  RatesResult result;
  result.trials.resize(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t t) {
    const ControlledPath z = build_z(cfg, build_driver(cfg, t));
    const std::size_t q = z.shape().rows;
    const ControlledPath y = compose(build_field(cfg.field, q, q), z);
    RatesTrial& out = result.trials[t];
    out.trial = t;
    out.mesh = mesh_convergence(y, z, cfg.levels);
    out.local = local_expansion_rate(y, z);
    // Fit points are ordered by decreasing scale, hence by decreasing factor and window length.
    out.mesh_factors.assign(cfg.levels.begin(), cfg.levels.end());
    std::sort(out.mesh_factors.begin(), out.mesh_factors.end(), std::greater<>());
    for (std::size_t k = out.local.points.size(); k >= 1; --k) out.local_cells.push_back(std::size_t{1} << k);
  });
  std::vector<double> mesh, local;
  for (const auto& t : result.trials) {
    if (!t.mesh.degenerate) mesh.push_back(t.mesh.slope);
    if (!t.local.degenerate) local.push_back(t.local.slope);
  }
  if (!mesh.empty()) result.median_mesh = median(mesh);
  if (!local.empty()) result.median_local = median(local);
  return result;
}

ContractionResult run_contraction(const ExperimentConfig& cfg) {
  const ControlledPath z = build_z(cfg, build_driver(cfg, 0));
  const VectorField f = build_field(cfg.field, cfg.y0.size(), z.shape().rows);
  ContractionResult result;
  try {
    result.report = solve(f, z, cfg.y0, cfg.solver).report;
  } catch (const SolveFailure& e) {
    result.report = e.report();
    result.failure = e.what();
  }
  return result;
}

std::string StabilityVerdict::text() const {
  std::string s = y_decreasing ? "y_dist strictly decreasing" : "y_dist NOT strictly decreasing";
  s += "; final/initial = " + format_number(final_over_initial);
  s += inputs_decreasing ? "; inputs decreasing" : "; inputs NOT decreasing";
  return s;
}

StabilityResult run_stability(const ExperimentConfig& cfg) {
  if (cfg.levels.empty()) throw ConfigError("config: key 'levels': stability needs at least one level", "levels", 0);
  std::vector<std::vector<StabilityRow>> per_trial(cfg.trials);
  std::vector<std::string> failures(cfg.trials);
  std::vector<std::string> failure_modules(cfg.trials);

  parallel_for(cfg.trials, [&](std::size_t t) {
    try {
      const RoughPathPtr x = build_driver(cfg, t);
      const ControlledPath z = build_z(cfg, x);
      const VectorField f = build_field(cfg.field, cfg.y0.size(), z.shape().rows);
      const ControlledPath y = solve(f, z, cfg.y0, cfg.solver).path;
      std::vector<double> y0t = cfg.y0;
      for (double& v : y0t) v += cfg.y0_shift;
      for (const std::size_t factor : cfg.levels) {
        const RoughPathPtr xt = relift_linear(*x, factor);
        const ControlledPath zt = build_z(cfg, xt);
        const ControlledPath yt = solve(f, zt, y0t, cfg.solver).path;
        StabilityRow row;
        row.trial = t;
        row.factor = factor;
        row.x_dist = rough_distance(*x, *xt);
        row.z_dist = controlled_distance(z, zt);
        row.y_dist = controlled_distance(y, yt);
        row.y0_gap = start_gap(y, yt);
        row.z0_gap = start_gap(z, zt);
        row.terminal_gap = tensor::distance(y.value(y.cells()), yt.value(yt.cells()));
        per_trial[t].push_back(row);
      }
    } catch (const NumericalError& e) {
      failures[t] = e.what();
      failure_modules[t] = e.module();
    }
  });

  StabilityResult result;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    result.rows.insert(result.rows.end(), per_trial[t].begin(), per_trial[t].end());
    if (!failures[t].empty() && !result.failure) {
      result.failure = "trial " + std::to_string(t) + ": " + failures[t];
      result.failure_module = failure_modules[t];
    }
  }

  // Medians per level, ordered from the coarsest approximation to the finest.
  std::vector<std::size_t> order(cfg.levels.begin(), cfg.levels.end());
  std::stable_sort(order.begin(), order.end(), std::greater<>());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  std::vector<double> xs, zs, ys, y0s, z0s;
  for (const std::size_t factor : order) {
    std::vector<double> c[6];
    for (const auto& r : result.rows) {
      if (r.factor != factor) continue;
      c[0].push_back(r.x_dist);
      c[1].push_back(r.z_dist);
      c[2].push_back(r.y_dist);
      c[3].push_back(r.y0_gap);
      c[4].push_back(r.z0_gap);
      c[5].push_back(r.terminal_gap);
    }
    if (c[0].empty()) continue;
    StabilityRow m;
    m.factor = factor;
    m.x_dist = median(c[0]);
    m.z_dist = median(c[1]);
    m.y_dist = median(c[2]);
    m.y0_gap = median(c[3]);
    m.z0_gap = median(c[4]);
    m.terminal_gap = median(c[5]);
    result.medians.push_back(m);
    xs.push_back(m.x_dist);
    zs.push_back(m.z_dist);
    ys.push_back(m.y_dist);
    y0s.push_back(m.y0_gap);
    z0s.push_back(m.z0_gap);
  }
  if (!ys.empty()) {
    result.verdict.y_decreasing = ys.size() >= 2 && strictly_decreasing(ys);
    result.verdict.final_over_initial = ys.front() > 0.0 ? ys.back() / ys.front() : 0.0;
    const auto input_ok = [](const std::vector<double>& v) { return negligible(v) || strictly_decreasing(v); };
    result.verdict.inputs_decreasing = input_ok(xs) && input_ok(zs) && input_ok(y0s) && input_ok(z0s);
  }
  return result;
}

}  // namespace roughlab::lab
