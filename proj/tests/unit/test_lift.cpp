#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "roughlab/error.hpp"
#include "roughlab/norms.hpp"
#include "roughlab/rng.hpp"
#include "support.hpp"

using namespace roughlab;
using namespace roughlab::test;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("Gaussian stream is addressable and standard") {
  const GaussianStream g(42, 3);
  std::vector<double> block(1000);
  g.fill(block, 500);
  CHECK(block[17] == g.at(517));
  CHECK(GaussianStream(42, 3).at(9) == g.at(9));
  CHECK(GaussianStream(42, 4).at(9) != g.at(9));

  double sum = 0.0, sq = 0.0;
  const std::size_t n = 200000;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = g.at(k);
    sum += v;
    sq += v * v;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);

  for (std::size_t k = 0; k < 1000; ++k) {
    const double u = uniform_at(1, 2, k);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("derived seeds are distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(derive_seed(7, k));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
}

TEST_CASE("sin signal closed form") {
  SignalSpec s;
  s.kind = SignalKind::sin;
  s.omega = {2.0 * std::numbers::pi};
  const auto v = sample_signal(s, Grid::make(1.0, 4));
  const std::vector<double> expected{0.0, 1.0, 0.0, -1.0, 0.0};
  CHECK(max_abs_diff(v, expected) <= 1e-15);
}

TEST_CASE("poly signal and samples") {
  SignalSpec s;
  s.kind = SignalKind::poly;
  s.dim = 2;
  s.coefficients = {{1.0, 0.0, 2.0}, {0.0, -1.0}};
  const auto v = sample_signal(s, Grid::make(2.0, 2));
  const std::vector<double> expected{1.0, 0.0, 3.0, -1.0, 9.0, -2.0};
  CHECK(max_abs_diff(v, expected) <= 1e-15);

  SignalSpec raw;
  raw.kind = SignalKind::samples;
  raw.samples = {0.0, 1.0, 4.0};
  CHECK(sample_signal(raw, Grid::make(1.0, 2)) == raw.samples);
  raw.samples.pop_back();
  CHECK_THROWS_AS(sample_signal(raw, Grid::make(1.0, 2)), InvalidArgument);
}

TEST_CASE("bm sampling is deterministic in the seed") {
  SignalSpec s;
  s.dim = 3;
  s.seed = 99;
  const Grid g = Grid::make(1.0, 256);
  CHECK(sample_signal(s, g) == sample_signal(s, g));
  SignalSpec t = s;
  t.seed = 100;
  CHECK(sample_signal(s, g) != sample_signal(t, g));
}

TEST_CASE("fbm with H = 1/2 has Brownian increment variance") {
  const Grid g = Grid::make(1.0, 64);
  const double dt = 1.0 / 64.0;
  double sq = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SignalSpec s;
    s.kind = SignalKind::fbm;
    s.hurst = 0.5;
    s.seed = seed;
    const auto v = sample_signal(s, g);
    for (std::size_t k = 0; k < 64; ++k) {
      sq += (v[k + 1] - v[k]) * (v[k + 1] - v[k]);
      ++count;
    }
  }
  CHECK(std::abs(sq / static_cast<double>(count) / dt - 1.0) < 0.1);
}

TEST_CASE("fbm variance at the horizon") {
  const double hurst = 0.7;
  const Grid g = Grid::make(2.0, 32);
  double sq = 0.0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    SignalSpec s;
    s.kind = SignalKind::fbm;
    s.hurst = hurst;
    s.seed = seed;
    const auto v = sample_signal(s, g);
    sq += v.back() * v.back();
  }
  CHECK(std::abs(sq / 400.0 / std::pow(2.0, 2.0 * hurst) - 1.0) < 0.15);
}

TEST_CASE("fbm parameter checks") {
  SignalSpec s;
  s.kind = SignalKind::fbm;
  s.hurst = 0.3;
  CHECK_THROWS_AS(sample_signal(s, Grid::make(1.0, 8)), InvalidArgument);
  s.hurst = 0.6;
  CHECK_THROWS_AS(sample_signal(s, Grid::make(1.0, kMaxFbmCells + 1)), InvalidArgument);
}

TEST_CASE("piecewise-linear lift of single cells") {
  const auto t = time_lift(1);
  CHECK(t->cell_area(0)[0] == doctest::Approx(0.5));
  CHECK(t->geometric());

  const double a = 0.7, b = -1.3;
  const auto x = lift_piecewise_linear(Grid::make(1.0, 1), std::vector<double>{0.0, 0.0, a, b}, 2, 0.45);
  const auto area = x->cell_area(0);
  CHECK(area[0] == doctest::Approx(0.5 * a * a));
  CHECK(area[1] == doctest::Approx(0.5 * a * b));
  CHECK(area[2] == area[1]);
  CHECK(area[3] == doctest::Approx(0.5 * b * b));
}

TEST_CASE("geometric lift symmetric part over long intervals") {
  const auto x = bm_lift(512, 2, 8);
  for (std::size_t i = 0; i < 512; i += 37) {
    for (std::size_t j = i; j <= 512; j += 53) {
      const LevelTwo p = x->chen_pair(i, j);
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
          const double sym = 0.5 * (p.area[r * 2 + c] + p.area[c * 2 + r]);
          CHECK(sym == doctest::Approx(0.5 * p.increment[r] * p.increment[c]).epsilon(1e-12).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("sin lift second level against the closed form") {
  const double horizon = 2.0;
  const auto x = sin_lift(1024, 1, 0.5, horizon);
  const double s = std::sin(horizon);
  CHECK(std::abs(x->chen_pair(0, 1024).area[0] - 0.5 * s * s) <= 1e-4);
}

TEST_CASE("Ito lift subtracts the bracket") {
  const Grid g = Grid::make(1.0, 128);
  SignalSpec s;
  s.dim = 2;
  s.seed = 5;
  const auto v = sample_signal(s, g);
  const auto ito = lift_ito(g, v, 2, 0.45);
  CHECK_FALSE(ito->geometric());
  const double dt = 1.0 / 128.0;
  for (std::size_t k = 0; k < 128; k += 9) {
    const double d0 = v[(k + 1) * 2] - v[k * 2], d1 = v[(k + 1) * 2 + 1] - v[k * 2 + 1];
    CHECK(ito->cell_area(k)[0] == doctest::Approx(0.5 * (d0 * d0 - dt)));
    CHECK(ito->cell_area(k)[1] == doctest::Approx(0.5 * d0 * d1));
  }
}

TEST_CASE("coarsening") {
  const auto x = bm_lift(1024, 2, 12);
  const auto same = coarsen(*x, 1);
  CHECK(same->same_data(*x));

  const auto twice = coarsen(*coarsen(*x, 2), 2);
  const auto once = coarsen(*x, 4);
  CHECK(twice->same_data(*once));

  for (std::size_t f : {2, 8, 64}) {
    const auto c = coarsen(*x, f);
    CHECK(c->cells() == 1024 / f);
    const LevelTwo coarse = c->chen_pair(0, c->cells());
    const LevelTwo fine = x->chen_pair(0, 1024);
    CHECK(max_abs_diff(coarse.area, fine.area) <= 1e-12 * (1.0 + max_abs(fine.area)));
    CHECK(max_abs_diff(coarse.increment, fine.increment) <= 1e-12);
  }
  CHECK_THROWS_AS(coarsen(*x, 3), InvalidArgument);
  CHECK_THROWS_AS(coarsen(*x, 2048), InvalidArgument);
}

TEST_CASE("linear relift") {
  const auto x = bm_lift(1024, 2, 13);
  CHECK(relift_linear(*x, 1)->same_data(*x));
  const auto r = relift_linear(*x, 16);
  CHECK(r->grid() == x->grid());
  for (std::size_t k = 0; k <= 1024; k += 16) {
    CHECK(r->value(k)[0] == x->value(k)[0]);
    CHECK(r->value(k)[1] == x->value(k)[1]);
  }
  CHECK(rough_distance(*x, *r) > 0.0);
}

TEST_CASE("relift distance decreases with the factor in median") {
  std::vector<std::vector<double>> d(4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = bm_lift(1024, 2, 200 + seed);
    const std::size_t factors[] = {16, 8, 4, 2};
    for (std::size_t l = 0; l < 4; ++l) d[l].push_back(rough_distance(*x, *relift_linear(*x, factors[l])));
  }
  std::vector<double> med;
  for (auto& v : d) {
    std::sort(v.begin(), v.end());
    med.push_back(0.5 * (v[4] + v[5]));
  }
  for (std::size_t l = 1; l < 4; ++l) CHECK(med[l] < med[l - 1]);
}
