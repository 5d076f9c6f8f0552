// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "roughlab/integral.hpp"
#include "roughlab/lab.hpp"
#include "roughlab/norms.hpp"
#include "roughlab/solver.hpp"
#include "roughlab/vector_field.hpp"
#include "support.hpp"

using namespace roughlab;
using namespace roughlab::test;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> mixing(std::size_t m, std::size_t q, std::uint64_t seed, double scale = 1.0) {
  TestRng rng(seed);
  std::vector<double> lambda(m * q * m);
  for (double& v : lambda) v = rng.uniform(-scale, scale);
  return lambda;
}

// Sorted triple i <= k <= j drawn uniformly from 0..n.
void triple(TestRng& rng, std::size_t n, std::size_t& i, std::size_t& k, std::size_t& j) {
  std::size_t v[3] = {rng.below(n + 1), rng.below(n + 1), rng.below(n + 1)};
  std::sort(v, v + 3);
  i = v[0];
  k = v[1];
  j = v[2];
}

lab::ExperimentConfig config(const std::string& text) {
  lab::ExperimentConfig cfg = lab::parse_config(text);
  lab::validate(cfg, text);
  return cfg;
}

Outcome chen_exactness() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = bm_lift(1024, 2, 1000 + seed);
    TestRng rng(seed);
    for (int t = 0; t < 1000; ++t) {
      std::size_t i, k, j;
      triple(rng, 1024, i, k, j);
      const LevelTwo direct = brute_pair(*x, i, j);
      const LevelTwo chained = chen_compose(x->chen_pair(i, k), x->chen_pair(k, j));
      const double scale = max_abs(direct.increment) + max_abs(direct.area);
      const double diff = std::max(max_abs_diff(chained.area, direct.area),
                                   max_abs_diff(chained.increment, direct.increment));
      if (diff > 0.0) worst = std::max(worst, scale > 0.0 ? diff / scale : INFINITY);
    }
  }
  return {worst <= 1e-10, fmt("max relative error %.3g over 10000 triples (tol 1e-10)", worst)};
}

Outcome geometric_symmetry() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = bm_lift(1024, 2, 1000 + seed);
    TestRng rng(seed + 50);
    for (int t = 0; t < 1000; ++t) {
      std::size_t i, k, j;
      triple(rng, 1024, i, k, j);
      const LevelTwo p = x->chen_pair(i, j);
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          const double sym = 0.5 * (p.area[a * 2 + b] + p.area[b * 2 + a]);
          worst = std::max(worst, std::abs(sym - 0.5 * p.increment[a] * p.increment[b]));
        }
      }
    }
  }
  return {worst <= 1e-12, fmt("max |Sym - X(x)X/2| %.3g (tol 1e-12)", worst)};
}

Outcome integral_additivity() {
  const auto x = bm_lift(1 << 12, 2, 2024);
  const ControlledPath z = ControlledPath::identity(x);
  const ControlledPath y = compose(tanh_field(2, 2, mixing(2, 2, 3)), z);
  TestRng rng(3);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::size_t i, k, j;
    triple(rng, 1 << 12, i, k, j);
    if (i == j) j = std::min<std::size_t>(i + 1, 1 << 12), i = j - 1;
    const auto whole = rough_integral(y, z, i, j);
    const auto left = rough_integral(y, z, i, k);
    const auto right = rough_integral(y, z, k, j);
    for (std::size_t a = 0; a < whole.size(); ++a) {
      const double scale = std::max({std::abs(whole[a]), std::abs(left[a]) + std::abs(right[a]), 1e-300});
      worst = std::max(worst, std::abs(whole[a] - left[a] - right[a]) / scale);
    }
  }
  return {worst <= 1e-12, fmt("max relative split error %.3g over 100 splits (tol 1e-12)", worst)};
}

Outcome point_removal() {
  std::size_t violations = 0, instances = 0;
  double tightest = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = bm_lift(512, 2, 500 + seed);
    const ControlledPath z = ControlledPath::identity(x);
    const VectorField f = seed % 2 ? sin_field(2, 2, mixing(2, 2, seed, 1.5)) : tanh_field(2, 2, mixing(2, 2, seed, 1.5));
    const ControlledPath y = compose(f, z);
    const double k = point_removal_constant(y, z);
    TestRng rng(seed + 70);
    for (int t = 0; t < 100; ++t) {
      std::vector<std::size_t> nodes{0, 512};
      const std::size_t extra = 1 + rng.below(40);
      for (std::size_t e = 0; e < extra; ++e) nodes.push_back(1 + rng.below(511));
      std::sort(nodes.begin(), nodes.end());
      nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
      const std::size_t r = 1 + rng.below(nodes.size() - 2);
      const double span = x->grid().time(nodes[r + 1]) - x->grid().time(nodes[r - 1]);
      const double ratio = point_removal_gap(y, z, nodes, r) / (k * std::pow(span, 3.0 * x->alpha()));
      tightest = std::max(tightest, ratio);
      if (!(ratio <= 1.0)) ++violations;
      ++instances;
    }
  }
  return {violations == 0 && instances == 500,
          fmt("%zu violations in %zu instances, max gap/bound %.3g", violations, instances, tightest)};
}

Outcome mesh_and_local_rates(bool local) {
  static const lab::RatesResult sin_rates = lab::run_rates(config(
      R"({"schema": 1, "alpha": 0.5, "n": 4096, "driver": {"kind": "sin", "dim": 2},
          "field": {"name": "tanh"}, "levels": [32, 16, 8, 4, 2]})"));
  static const lab::RatesResult bm_rates = lab::run_rates(config(
      R"({"schema": 1, "alpha": 0.45, "n": 4096, "seed": 11, "trials": 10, "driver": {"kind": "bm", "dim": 2},
          "z_mode": "integral", "field": {"name": "tanh"}, "levels": [32, 16, 8, 4, 2]})"));
  if (local) {
    const double tol = 3.0 * 0.45 - 0.15;
    if (!bm_rates.median_local) return {false, "every local fit degenerate"};
    return {*bm_rates.median_local >= tol - 1e-12,
            fmt("median local slope %.4f over 10 seeds (>= %.2f)", *bm_rates.median_local, tol)};
  }
  const auto& s = sin_rates.trials.front().mesh;
  const double sin_tol = 3.0 * 0.5 - 1.0 - 0.1, bm_tol = 3.0 * 0.45 - 1.0 - 0.1;
  const bool sin_ok = !s.degenerate && s.slope >= sin_tol - 1e-12;
  const bool bm_ok = bm_rates.median_mesh && *bm_rates.median_mesh >= bm_tol - 1e-12;
  return {sin_ok && bm_ok,
          fmt("sin slope %.4f%s (>= %.2f); BM median slope %.4f (>= %.2f)", s.slope, s.degenerate ? " degenerate" : "",
              sin_tol, bm_rates.median_mesh.value_or(NAN), bm_tol)};
}

Outcome closure() {
  const auto fine = bm_lift(1 << 12, 2, 77);
  const VectorField f = sin_field(2, 2, mixing(2, 2, 9));
  std::vector<double> r0;
  std::string values;
  for (std::size_t n = 1 << 8; n <= (1u << 12); n *= 2) {
    const auto x = coarsen(*fine, (1u << 12) / n);
    const ControlledPath id = ControlledPath::identity(x);
    r0.push_back(remainder_norms(integral_controlled(compose(f, id), id)).r0_2alpha);
    values += fmt("%s%.4g", values.empty() ? "" : ", ", r0.back());
  }
  const auto [lo, hi] = std::minmax_element(r0.begin(), r0.end());
  const bool ok = std::isfinite(*hi) && *lo > 0.0 && *hi <= 2.0 * *lo;
  return {ok, fmt("R0 norms [%s], max/min %.3f (<= 2)", values.c_str(), *hi / *lo)};
}

Outcome linear_oracle() {
  std::vector<double> errors;
  std::string values;
  for (std::size_t n = 1 << 8; n <= (1u << 12); n *= 2) {
    const auto x = time_lift(n, 0.5);
    const Solution s = solve(linear_field(1, 1, {1.0}), ControlledPath::identity(x), std::vector<double>{1.0});
    errors.push_back(std::abs(s.path.value(n)[0] - std::numbers::e) / std::numbers::e);
    values += fmt("%s%.3g", values.empty() ? "" : ", ", errors.back());
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < errors.size(); ++k) decreasing = decreasing && errors[k] < errors[k - 1];
  return {decreasing && errors.back() <= 1e-4,
          fmt("relative errors n=2^8..2^12 [%s] (final <= 1e-4, strictly decreasing)", values.c_str())};
}

// Standard suite: linear and tanh fields against sin and Brownian drivers.
struct SuiteRun {
  std::string name;
  SolveReport report;
  double deviation = 0.0;
};

const std::vector<SuiteRun>& suite() {
  static const std::vector<SuiteRun> runs = [] {
    std::vector<SuiteRun> out;
    for (int driver = 0; driver < 2; ++driver) {
      for (int field = 0; field < 2; ++field) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
          const auto x = driver == 0 ? sin_lift(2048, 2, 0.5, 1.0 + static_cast<double>(seed))
                                     : bm_lift(2048, 2, 900 + seed, 0.45, 1.0 + static_cast<double>(seed));
          const ControlledPath z = ControlledPath::identity(x);
          const VectorField f = field == 0 ? linear_field(2, 2, mixing(2, 2, 20 + seed, 1.5))
                                           : tanh_field(2, 2, mixing(2, 2, 30 + seed, 2.0));
          const Solution s = solve(f, z, std::vector<double>{0.5, -0.5});
          out.push_back({fmt("%s/%s/%llu", driver ? "bm" : "sin", field ? "tanh" : "linear",
                             static_cast<unsigned long long>(seed)),
                         s.report, derivative_deviation(f, z, s.path)});
        }
      }
    }
    return out;
  }();
  return runs;
}

Outcome contraction_certificate() {
  std::size_t accepted = 0, rejected = 0, bad = 0;
  double worst = 0.0;
  for (const auto& run : suite()) {
    for (const auto& w : run.report.windows) {
      if (!w.accepted) {
        ++rejected;
        continue;
      }
      ++accepted;
      worst = std::max(worst, w.ratio);
      if (!(w.ratio <= 0.5 + 1e-9)) ++bad;
    }
  }
  return {bad == 0 && accepted > 0,
          fmt("%zu accepted windows (%zu rejected) over %zu solves, max ratio %.4f (<= 0.5 + 1e-9)", accepted,
              rejected, suite().size(), worst)};
}

Outcome derivative_identity() {
  const double tol = 10.0 * SolveConfig{}.tol;
  double worst = 0.0;
  for (const auto& run : suite()) worst = std::max(worst, run.deviation);
  return {worst <= tol, fmt("max |Y' - F(Y)Z'| %.3g over %zu solves (<= %.0e)", worst, suite().size(), tol)};
}

Outcome universal_limit() {
  const lab::StabilityResult r = lab::run_stability(config(
      R"({"schema": 1, "n": 4096, "seed": 7, "trials": 10, "driver": {"kind": "bm", "dim": 2},
          "y0": [0.5, -0.3], "field": {"name": "tanh"}, "levels": [16, 8, 4, 2]})"));
  if (r.failure) return {false, "solve failed in " + r.failure_module + ": " + *r.failure};
  std::string y, x;
  for (const auto& m : r.medians) {
    y += fmt("%s%.4g", y.empty() ? "" : ", ", m.y_dist);
    x += fmt("%s%.4g", x.empty() ? "" : ", ", m.x_dist);
  }
  const auto& v = r.verdict;
  return {v.y_decreasing && v.final_over_initial < 0.2 && v.inputs_decreasing,
          fmt("median y_dist [%s] %s, final/initial %.4f (< 0.2); median x_dist [%s] inputs %s", y.c_str(),
              v.y_decreasing ? "decreasing" : "NOT decreasing", v.final_over_initial, x.c_str(),
              v.inputs_decreasing ? "decreasing" : "NOT decreasing")};
}

Outcome reduction_consistency() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto x = bm_lift(1024, 2, 1200 + s);
    const ControlledPath z = ControlledPath::identity(x);
    const double scale = 0.5 + 0.1 * static_cast<double>(s % 10);
    const VectorField f = s % 2 ? sin_field(2, 2, mixing(2, 2, 40 + s, 2.0), scale)
                                : tanh_field(2, 2, mixing(2, 2, 40 + s, 2.0), scale);
    const ControlledPath y = compose(f, z);
    TestRng rng(s);
    for (int t = 0; t < 5; ++t) {
      std::size_t i = 0, k = 0, j = 1024;
      if (t > 0) triple(rng, 1024, i, k, j);
      const auto a = rough_integral(y, z, i, j);
      const auto b = classical_rough_integral(y, i, j);
      worst = std::max(worst, max_abs_diff(a, b));
    }
  }
  return {worst <= 1e-10, fmt("max |pipeline - classical| %.3g over 20 integrands (<= 1e-10)", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"chen exactness", chen_exactness},
      {"geometric symmetry", geometric_symmetry},
      {"integral additivity", integral_additivity},
      {"point removal", point_removal},
      {"mesh rate", [] { return mesh_and_local_rates(false); }},
      {"local expansion order", [] { return mesh_and_local_rates(true); }},
      {"remainder closure", closure},
      {"linear oracle", linear_oracle},
      {"contraction certificate", contraction_certificate},
      {"derivative identity", derivative_identity},
      {"universal limit decay", universal_limit},
      {"reduction consistency", reduction_consistency},
  };
  int failed = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %-24s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c + 1, criteria[c].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
