#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "roughlab/controlled_path.hpp"
#include "roughlab/lift.hpp"
#include "roughlab/rough_path.hpp"

namespace roughlab::test {

inline RoughPathPtr bm_lift(std::size_t n, std::size_t d, std::uint64_t seed, double alpha = 0.45,
                            double horizon = 1.0) {
  const Grid grid = Grid::make(horizon, n);
  SignalSpec s;
  s.kind = SignalKind::bm;
  s.dim = d;
  s.seed = seed;
  return lift_piecewise_linear(grid, sample_signal(s, grid), d, alpha);
}

inline RoughPathPtr sin_lift(std::size_t n, std::size_t d = 1, double alpha = 0.5, double horizon = 1.0) {
  const Grid grid = Grid::make(horizon, n);
  SignalSpec s;
  s.kind = SignalKind::sin;
  s.dim = d;
  return lift_piecewise_linear(grid, sample_signal(s, grid), d, alpha);
}

// X_t = t on [0, T].
inline RoughPathPtr time_lift(std::size_t n, double alpha = 0.5, double horizon = 1.0) {
  const Grid grid = Grid::make(horizon, n);
  std::vector<double> v(grid.times().begin(), grid.times().end());
  return lift_piecewise_linear(grid, v, 1, alpha);
}

// (X_{t_i,t_j}, 𝕏_{t_i,t_j}) summed directly from the cells:
// 𝕏 = Σ_k 𝕏_k + Σ_{k<l} ΔX_k ⊗ ΔX_l, accumulated without Chen helpers.
inline LevelTwo brute_pair(const RoughPath& x, std::size_t i, std::size_t j) {
  const std::size_t d = x.dim();
  LevelTwo out{std::vector<double>(d, 0.0), std::vector<double>(d * d, 0.0)};
  for (std::size_t k = i; k < j; ++k) {
    const auto a = x.value(k), b = x.value(k + 1), area = x.cell_area(k);
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = 0; q < d; ++q) {
        out.area[p * d + q] += area[p * d + q] + out.increment[p] * (b[q] - a[q]);
      }
    }
    for (std::size_t p = 0; p < d; ++p) out.increment[p] += b[p] - a[p];
  }
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Splitmix64 stream for test-side random choices, independent of the library RNG.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t s_;
};

// A random smooth controlled path Y = (φ(X), Dφ(X)) with φ_a(x) = Σ_p c_ap sin(x_p + s_ap).
inline ControlledPath random_controlled(RoughPathPtr x, std::size_t u, std::uint64_t seed) {
  TestRng rng(seed);
  const std::size_t d = x->dim();
  std::vector<double> c(u * d), s(u * d);
  for (std::size_t k = 0; k < u * d; ++k) {
    c[k] = rng.uniform(-1.0, 1.0);
    s[k] = rng.uniform(-3.0, 3.0);
  }
  const std::size_t nodes = x->cells() + 1;
  std::vector<double> vals(nodes * u, 0.0), ders(nodes * u * d, 0.0);
  for (std::size_t k = 0; k < nodes; ++k) {
    const auto xk = x->value(k);
    for (std::size_t a = 0; a < u; ++a) {
      for (std::size_t p = 0; p < d; ++p) {
        vals[k * u + a] += c[a * d + p] * std::sin(xk[p] + s[a * d + p]);
        ders[(k * u + a) * d + p] = c[a * d + p] * std::cos(xk[p] + s[a * d + p]);
      }
    }
  }
  return ControlledPath(std::move(x), ValueShape{u, 1}, std::move(vals), std::move(ders));
}

}  // namespace roughlab::test
