#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "kpath/grid.hpp"
#include "kpath/rng.hpp"

using namespace kpath;

TEST_CASE("grid validates size and exposes uniform nodes") {
  CHECK_THROWS_AS(Grid(1.0, 6), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1.0, 24), std::invalid_argument);
  CHECK_THROWS_AS(Grid(0.0, 16), std::invalid_argument);

  Grid g(two_pi, 16);
  CHECK(g.size() == 16);
  CHECK(g.spacing() == doctest::Approx(two_pi / 16.0));
  CHECK(g.point(0) == 0.0);
  CHECK(g.point(15) == doctest::Approx(two_pi * 15.0 / 16.0));
  CHECK(g == Grid(two_pi, 16));
  CHECK(g != Grid(1.0, 16));
}

TEST_CASE("node_index wraps periodically and rejects off-grid points") {
  Grid g(two_pi, 8);
  CHECK(g.node_index(0.0) == 0);
  CHECK(g.node_index(g.point(3)) == 3);
  CHECK(g.node_index(two_pi) == 0);           // wraparound
  CHECK(g.node_index(-g.spacing()) == 7);     // negative wraparound
  CHECK(g.node_index(0.1) == -1);             // off-grid
}

TEST_CASE("grid function sampling and sup norm") {
  Grid g(two_pi, 64);
  GridFunction f = GridFunction::sample(g, [](double t) { return std::sin(t); });
  CHECK(f.sup_abs() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(GridFunction(g, std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("counter rng is stateless and stream-separated") {
  CounterRng a(42, 0);
  CounterRng b(42, 0);
  CounterRng c(42, 1);
  const CounterRng frozen(42, 0);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t va = a.next();
    CHECK(va == b.next());
    CHECK(va == frozen.value_at(static_cast<std::uint64_t>(i)));  // counter access
  }
  // Different streams give different outputs essentially always.
  int agree = 0;
  CounterRng a2(42, 0);
  for (int i = 0; i < 100; ++i)
    if (a2.next() == c.next()) ++agree;
  CHECK(agree == 0);
}

TEST_CASE("uniform draws stay strictly inside (0,1)") {
  CounterRng rng(7, 3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("inverse normal cdf matches reference quantiles") {
  // Reference values from standard normal tables (15+ digits).
  CHECK(CounterRng::inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(CounterRng::inverse_normal_cdf(0.975) ==
        doctest::Approx(1.9599639845400545).epsilon(1e-12));
  CHECK(CounterRng::inverse_normal_cdf(0.84134474606854293) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(CounterRng::inverse_normal_cdf(0.001) ==
        doctest::Approx(-3.0902323061678132).epsilon(1e-12));
  CHECK(CounterRng::inverse_normal_cdf(1e-10) ==
        doctest::Approx(-6.3613409024040557).epsilon(1e-10));
  // Symmetry.
  for (double p : {0.01, 0.2, 0.37, 0.45}) {
    CHECK(CounterRng::inverse_normal_cdf(p) ==
          doctest::Approx(-CounterRng::inverse_normal_cdf(1.0 - p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(CounterRng::inverse_normal_cdf(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CounterRng::inverse_normal_cdf(1.0), std::invalid_argument);
}

TEST_CASE("normal draws have the right first two moments") {
  CounterRng rng(123, 0);
  const int n = 40000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}
