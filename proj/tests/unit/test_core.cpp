#include <doctest.h>

#include <cmath>

#include "roughlab/compensated.hpp"
#include "roughlab/error.hpp"
#include "roughlab/norms.hpp"
#include "support.hpp"

using namespace roughlab;
using namespace roughlab::test;

TEST_CASE("grid construction") {
  const Grid g = Grid::make(1.0, 4);
  const std::vector<double> expected{0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK(std::vector<double>(g.times().begin(), g.times().end()) == expected);
  CHECK(g.is_uniform());

  const Grid one = Grid::make(2.0, 1);
  CHECK(one.nodes() == 2);
  CHECK(one.time(1) == 2.0);

  CHECK_THROWS_AS(Grid::make(1.0, 3, GridKind::dyadic), InvalidArgument);
  CHECK_THROWS_AS(Grid::make(1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(Grid::from_times({0.0, 0.5, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(Grid::from_times({0.1, 0.5}), InvalidArgument);
}

TEST_CASE("grid windows and subsampling stay uniform") {
  const Grid g = Grid::make(1.0, 12);
  const Grid w = g.window(4, 10);
  CHECK(w.cells() == 6);
  CHECK(w.time(0) == 0.0);
  CHECK(w.is_uniform());
  const Grid s = g.subsample(3);
  CHECK(s.cells() == 4);
  CHECK(s.time(1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(g.subsample(5), InvalidArgument);
  CHECK(Grid::from_times({0.0, 0.1, 0.5}).mesh() == doctest::Approx(0.4));
}

TEST_CASE("chen_pair on trivial data") {
  const auto x = time_lift(8);
  const LevelTwo empty = x->chen_pair(3, 3);
  CHECK(empty.increment[0] == 0.0);
  CHECK(empty.area[0] == 0.0);
  const LevelTwo whole = x->chen_pair(0, 8);
  CHECK(whole.increment[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(whole.area[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(x->chen_pair(5, 2), InvalidArgument);
}

TEST_CASE("chen_pair matches direct cell summation and composes") {
  const auto x = bm_lift(256, 2, 11);
  TestRng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t i = rng.below(257), k = rng.below(257), j = rng.below(257);
    if (i > k) std::swap(i, k);
    if (k > j) std::swap(k, j);
    if (i > k) std::swap(i, k);
    const LevelTwo direct = brute_pair(*x, i, j);
    const LevelTwo chained = chen_compose(x->chen_pair(i, k), x->chen_pair(k, j));
    const LevelTwo whole = x->chen_pair(i, j);
    const double scale = 1.0 + max_abs(direct.area) + max_abs(direct.increment);
    CHECK(max_abs_diff(whole.area, direct.area) <= 1e-12 * scale);
    CHECK(max_abs_diff(chained.area, whole.area) <= 1e-12 * scale);
    CHECK(max_abs_diff(chained.increment, whole.increment) <= 1e-12 * scale);
  }
}

TEST_CASE("rough path rejects bad data") {
  const Grid g = Grid::make(1.0, 2);
  CHECK_THROWS_AS(RoughPath(g, 1, {0.0, 1.0}, {0.0, 0.0}, 0.45), InvalidArgument);
  CHECK_THROWS_AS(RoughPath(g, 1, {0.0, 1.0, 2.0}, {0.0, 0.0}, 0.3), InvalidArgument);
  CHECK_THROWS_AS(RoughPath(g, 1, {0.0, NAN, 2.0}, {0.0, 0.0}, 0.45), NumericalError);
  CHECK_NOTHROW(RoughPath(g, 1, {0.0, 1.0, 2.0}, {0.5, 0.5}, 0.5));
}

TEST_CASE("holder norms of closed-form paths") {
  const Grid g = Grid::make(1.0, 16);
  const RoughPath flat(g, 1, std::vector<double>(17, 3.0), std::vector<double>(16, 0.0), 0.45);
  const HolderReport c = holder_norms(flat);
  CHECK(c.x_alpha == 0.0);
  CHECK(c.xx_2alpha == 0.0);

  const HolderReport t = holder_norms(*time_lift(64, 0.5));
  CHECK(t.x_alpha == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(t.xx_2alpha == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("holder norms agree with an exhaustive pair scan") {
  const auto x = bm_lift(1024, 2, 7);
  double x_best = 0.0, xx_best = 0.0;
  const std::size_t n = x->cells();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> inc(2, 0.0), area(4, 0.0);
    for (std::size_t j = i + 1; j <= n; ++j) {
      const auto a = x->value(j - 1), b = x->value(j), cell = x->cell_area(j - 1);
      for (std::size_t p = 0; p < 2; ++p) {
        for (std::size_t q = 0; q < 2; ++q) area[p * 2 + q] += cell[p * 2 + q] + inc[p] * (b[q] - a[q]);
      }
      for (std::size_t p = 0; p < 2; ++p) inc[p] += b[p] - a[p];
      const double dt = x->grid().time(j) - x->grid().time(i);
      x_best = std::max(x_best, std::hypot(inc[0], inc[1]) / std::pow(dt, 0.45));
      double s = 0.0;
      for (double v : area) s += v * v;
      xx_best = std::max(xx_best, std::sqrt(s) / std::pow(dt, 0.9));
    }
  }
  const HolderReport r = holder_norms(*x);
  CHECK(std::isfinite(r.x_alpha));
  CHECK(r.x_alpha == doctest::Approx(x_best).epsilon(1e-12));
  CHECK(r.xx_2alpha == doctest::Approx(xx_best).epsilon(1e-12));
  CHECK(r.pairs_scanned > 0);
}

TEST_CASE("pruned scan equals the exhaustive scan") {
  const auto x = bm_lift(512, 1, 3);
  const auto v = x->values();
  const double pruned = path_holder(x->grid(), v, 1, 0.45);
  const auto squared = [&](std::size_t i, std::size_t j) { return (v[j] - v[i]) * (v[j] - v[i]); };
  const double full = holder_sup(x->grid(), 0.45, squared, no_row_bound);
  CHECK(pruned == full);
}

TEST_CASE("remainders of exact expansions vanish") {
  const auto x = time_lift(32);
  const std::size_t nodes = 33;
  std::vector<double> vals(x->values().begin(), x->values().end());
  const ControlledPath y(x, ValueShape{1, 1}, vals, std::vector<double>(nodes, 1.0));
  const std::vector<double> c{2.5};
  const ControlledPath k = ControlledPath::constant(x, ValueShape{1, 1}, c);
  for (std::size_t i = 0; i < nodes; i += 3) {
    for (std::size_t j = i; j < nodes; j += 5) {
      CHECK(std::abs(remainders(y, i, j).r0[0]) <= 1e-15);
      CHECK(remainders(k, i, j).r0[0] == 0.0);
      CHECK(remainders(k, i, j).r1[0] == 0.0);
    }
  }
  CHECK(controlled_seminorm(k) == 0.0);
}

TEST_CASE("remainder of X squared is the squared increment") {
  const auto x = time_lift(64);
  std::vector<double> vals, ders;
  for (std::size_t k = 0; k <= 64; ++k) {
    const double t = x->grid().time(k);
    vals.push_back(t * t);
    ders.push_back(2.0 * t);
  }
  const ControlledPath y(x, ValueShape{1, 1}, vals, ders);
  for (std::size_t i = 0; i <= 64; i += 7) {
    for (std::size_t j = i; j <= 64; j += 3) {
      const double dt = x->grid().time(j) - x->grid().time(i);
      CHECK(remainders(y, i, j).r0[0] == doctest::Approx(dt * dt).epsilon(1e-12));
    }
  }
}

TEST_CASE("controlled distance is a pseudometric") {
  const auto x = bm_lift(128, 2, 21);
  const ControlledPath y = random_controlled(x, 2, 1);
  CHECK(controlled_distance(y, y) == 0.0);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const ControlledPath a = random_controlled(x, 2, 3 * s + 10);
    const ControlledPath b = random_controlled(x, 2, 3 * s + 11);
    const ControlledPath c = random_controlled(x, 2, 3 * s + 12);
    const double ab = controlled_distance(a, b), bc = controlled_distance(b, c), ac = controlled_distance(a, c);
    CHECK(ab == doctest::Approx(controlled_distance(b, a)).epsilon(1e-14));
    CHECK(ac <= ab + bc + 1e-12);
  }
}

TEST_CASE("controlled distance across bases") {
  const auto x = bm_lift(128, 1, 4);
  const auto shifted = std::make_shared<const RoughPath>(
      x->grid(), 1,
      [&] {
        std::vector<double> v(x->values().begin(), x->values().end());
        for (double& e : v) e += 1.0;
        return v;
      }(),
      std::vector<double>(x->cell_areas().begin(), x->cell_areas().end()), x->alpha());
  const ControlledPath a = ControlledPath::identity(x);
  const ControlledPath b = ControlledPath::identity(shifted);
  CHECK(controlled_distance(a, b) <= 1e-12);
  CHECK(rough_distance(*x, *x) == 0.0);
  CHECK(rough_distance(*x, *shifted) <= 1e-12);
}

TEST_CASE("rough distance to a linear relift shrinks as the relift resolution grows") {
  // Fine lift on 2^10 cells against relifts through 2^6 .. 2^9 nodes.
  std::vector<double> medians;
  for (std::size_t coarse = 64; coarse <= 512; coarse *= 2) {
    std::vector<double> d;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto x = bm_lift(1024, 2, 100 + seed);
      d.push_back(rough_distance(*x, *relift_linear(*x, 1024 / coarse)));
    }
    std::sort(d.begin(), d.end());
    CHECK(d.front() > 0.0);
    medians.push_back(0.5 * (d[4] + d[5]));
  }
  for (std::size_t k = 1; k < medians.size(); ++k) CHECK(medians[k] < medians[k - 1]);
}

TEST_CASE("Neumaier summation keeps small addends") {
  NeumaierSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
  NeumaierSum t;
  for (int k = 0; k < 10; ++k) t += 0.1;
  CHECK(t.value() == 1.0);
}

TEST_CASE("sup gap and norm") {
  const std::vector<double> a{0.0, 0.0, 3.0, 4.0}, b{0.0, 1.0, 0.0, 0.0};
  CHECK(sup_gap(a, b, 2) == doctest::Approx(5.0));
  CHECK(sup_norm(a, 2) == doctest::Approx(5.0));
  CHECK_THROWS_AS(sup_gap(a, std::vector<double>{1.0}, 2), InvalidArgument);
}
