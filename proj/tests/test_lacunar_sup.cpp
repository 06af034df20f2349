#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "kpath/grid.hpp"
#include "kpath/lacunar_sup.hpp"
#include "kpath/rng.hpp"

using namespace kpath;

namespace {

// Dense reference maximum of sum c_j cos(F_j u) over one period.
double brute_max(const std::vector<double>& c, const std::vector<double>& freqs,
                 int n_points) {
  double best = -1e300;
  for (int i = 0; i < n_points; ++i) {
    const double u = two_pi * static_cast<double>(i) / static_cast<double>(n_points);
    double v = 0.0;
    for (size_t j = 0; j < c.size(); ++j) v += c[j] * std::cos(freqs[j] * u);
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("single cosine has sup equal to the coefficient") {
  LacunarPoly p{{0.7}, {}, {0}};
  SupResult r = lacunar_sup(p, 1e-8);
  CHECK(r.converged);
  CHECK(r.lower == doctest::Approx(0.7).epsilon(1e-7));
  CHECK(r.upper == doctest::Approx(0.7).epsilon(1e-7));
  // Negative coefficient: the maximum is still |c|, attained at cos = -1.
  LacunarPoly q{{-0.7}, {}, {0}};
  SupResult s = lacunar_sup(q, 1e-8);
  CHECK(s.lower == doctest::Approx(0.7).epsilon(1e-7));
}

TEST_CASE("two-term blocks match a dense reference") {
  LacunarPoly p = LacunarPoly::from_ratios({1.0, 1.0}, {5});
  SupResult r = lacunar_sup(p, 1e-6);
  const double ref = brute_max({1.0, 1.0}, {1.0, 5.0}, 400000);
  CHECK(r.converged);
  CHECK(r.lower <= r.upper);
  CHECK(ref <= r.upper + 1e-9);
  CHECK(r.lower >= ref - 1e-5);  // dense grid itself is accurate to ~1e-8
}

TEST_CASE("signed three-term blocks match a dense reference") {
  const std::vector<std::vector<double>> cases = {
      {0.9, -0.4, 0.3}, {-1.0, 0.8, -0.6}, {0.2, 0.2, -1.3}, {1.0, -1.0, 1.0}};
  for (const auto& c : cases) {
    LacunarPoly p = LacunarPoly::from_ratios(c, {5, 7});
    SupResult r = lacunar_sup(p, 1e-6);
    const double ref = brute_max(c, {1.0, 5.0, 35.0}, 600000);
    CHECK(r.converged);
    CHECK(r.upper - r.lower <= 1e-6 + 1e-12);
    CHECK(ref <= r.upper + 1e-8);
    CHECK(r.lower >= ref - 2e-6);
    // Trivial envelope.
    double abs_sum = 0.0;
    for (double x : c) abs_sum += std::abs(x);
    CHECK(r.upper <= abs_sum + 1e-9);
  }
}

TEST_CASE("depth gaps between active terms are handled") {
  // Frequencies 1 and 35: two radix levels with no coefficient in between.
  LacunarPoly p{{1.0, 0.5}, {5, 7}, {0, 2}};
  SupResult r = lacunar_sup(p, 1e-6);
  const double ref = brute_max({1.0, 0.5}, {1.0, 35.0}, 600000);
  CHECK(r.converged);
  CHECK(ref <= r.upper + 1e-8);
  CHECK(r.lower >= ref - 2e-6);
}

TEST_CASE("absolute sup takes the larger of the two signed sups") {
  // f(u) = cos u - 0.9 cos 5u: max f != max(-f) in general.
  LacunarPoly p = LacunarPoly::from_ratios({1.0, -0.9}, {5});
  SupResult plus = lacunar_sup(p, 1e-7);
  LacunarPoly m = p;
  for (double& c : m.coeffs) c = -c;
  SupResult minus = lacunar_sup(m, 1e-7);
  SupResult both = lacunar_sup_abs(p, 1e-7);
  CHECK(both.lower == doctest::Approx(std::max(plus.lower, minus.lower)).epsilon(1e-9));
  CHECK(both.upper >= std::max(plus.lower, minus.lower));
}

TEST_CASE("huge frequency ratios converge to near coefficient-sum sups") {
  // Ratio 5^16 ~ 1.5e11: frequencies decouple, so sup ~ |c1| + |c2|.
  LacunarPoly p{{0.6, 0.4}, std::vector<std::uint32_t>(16, 5u), {0, 16}};
  SupResult r = lacunar_sup(p, 1e-6);
  CHECK(r.converged);
  CHECK(r.upper <= 1.0 + 1e-6 + 1e-12);  // sup is exactly 1, upper within tol
  CHECK(r.lower >= 1.0 - 1e-5);
}

TEST_CASE("random blocks: certified interval always brackets the dense reference") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    CounterRng rng(17, trial);
    std::vector<double> c(4);
    for (double& x : c) x = rng.normal();
    LacunarPoly p = LacunarPoly::from_ratios(c, {5, 5, 7});
    SupResult r = lacunar_sup(p, 1e-5);
    const double ref = brute_max(c, {1.0, 5.0, 25.0, 175.0}, 800000);
    CHECK(r.converged);
    CHECK(ref <= r.upper + 1e-7);
    // The attained value never exceeds the true sup, but the dense grid can
    // undershoot it by ~ f'' h^2 / 8 ~ 3e-6 at these frequencies.
    CHECK(r.lower <= ref + 1e-5);
    CHECK(r.lower >= ref - 2e-5);
  }
}

TEST_CASE("malformed polynomials are rejected") {
  CHECK_THROWS_AS(lacunar_sup(LacunarPoly{{}, {}, {}}, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(lacunar_sup(LacunarPoly{{1.0}, {}, {1}}, 1e-6),
                  std::invalid_argument);  // depths must start at 0
  CHECK_THROWS_AS(lacunar_sup(LacunarPoly{{1.0, 1.0}, {5}, {0, 0}}, 1e-6),
                  std::invalid_argument);  // depths must increase
  CHECK_THROWS_AS(lacunar_sup(LacunarPoly{{1.0, 1.0}, {}, {0, 1}}, 1e-6),
                  std::invalid_argument);  // missing radix
  CHECK_THROWS_AS(lacunar_sup(LacunarPoly{{1.0, 1.0}, {1}, {0, 1}}, 1e-6),
                  std::invalid_argument);  // radix below 2
}
