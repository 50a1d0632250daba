#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "levyenv/errors.hpp"
#include "levyenv/path_core.hpp"
#include "levyenv/stable_env.hpp"

using namespace levyenv;
using levyenv::test::g;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

std::vector<double> vals(const GridPath& p) { return {p.values().begin(), p.values().end()}; }

TwoSidedPath random_env(std::uint64_t seed, std::size_t n = 200, double h = 0.1) {
  auto s = StableLawSpec::with_defaults(1.5, 0.4);
  s.seed = seed;
  return sample_two_sided(s, n, h, 0);
}

}  // namespace

TEST_CASE("GridPath construction and evaluation") {
  CHECK_THROWS_AS(GridPath({}, 1.0), ParameterError);
  CHECK_THROWS_AS(GridPath({0.0}, 0.0), ParameterError);
  CHECK_THROWS_AS(GridPath({0.0, 1.0}, 1.0, 2), ParameterError);
  CHECK_THROWS_AS(GridPath({0.0, NAN}, 1.0), ParameterError);
  const GridPath p({5.0, 6.0, 7.0, 8.0}, 0.1, 1);
  CHECK(p.min_point() == -1);
  CHECK(p.max_point() == 2);
  CHECK(p.eval(0.0) == 6.0);
  CHECK(p.eval(0.1) == 7.0);  // snap at exact grid multiples
  CHECK(p.eval(0.3 - 0.1) == 8.0);  // 0.19999999999999998 snaps onto x = 0.2
  CHECK(p.eval(0.19) == 7.0);  // right-continuous step
  CHECK(p.eval(-0.05) == 5.0);
  CHECK_THROWS_AS(p.eval(0.31), RangeError);
  CHECK_THROWS_AS(p.at(-2), RangeError);
}

TEST_CASE("running and future extrema examples") {
  const GridPath p = g({0, 1, -1, 2});
  CHECK(vals(running_infimum(p)) == std::vector<double>{0, 0, -1, -1});
  CHECK(vals(running_supremum(p)) == std::vector<double>{0, 1, 1, 2});
  CHECK(vals(future_infimum(p)) == std::vector<double>{-1, -1, -1, 2});
  const GridPath up = g({0, 1, 1, 3});
  CHECK(vals(running_infimum(up)) == std::vector<double>{0, 0, 0, 0});
  CHECK(future_infimum(up) == up);
  const GridPath down = g({0, -1, -1, -3});
  CHECK(vals(running_supremum(down)) == std::vector<double>{0, 0, 0, 0});
}

TEST_CASE("running extrema are idempotent and future infimum matches brute force") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GridPath p(test::lattice_walk(1 + seed * 5, seed), 0.5);
    CHECK(running_infimum(running_infimum(p)) == running_infimum(p));
    CHECK(running_supremum(running_supremum(p)) == running_supremum(p));
    const auto fi = future_infimum(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      double m = p[i];
      for (std::size_t j = i; j < p.size(); ++j) m = std::min(m, p[j]);
      REQUIRE(fi[i] == m);
    }
    // Future infimum is the reversed running infimum of the reversed path.
    CHECK(vals(future_infimum(reverse(p))) == vals(reverse(running_infimum(p))));
    CHECK(reverse(reverse(p)) == p);
    CHECK(negate(negate(p)) == p);
  }
}

TEST_CASE("recenter and rescale") {
  const TwoSidedPath env = random_env(3);
  CHECK(recenter(env, 0).flat() == env.flat());
  for (const GridPoint x0 : {-50, -1, 1, 17, 150}) {
    const TwoSidedPath r = recenter(env, x0);
    CHECK(r.eval(0.0) == 0.0);
    // Shifting back recovers the path up to the additive constant and the window.
    const TwoSidedPath back = recenter(r, -x0);
    for (GridPoint i = back.min_point(); i <= back.max_point(); ++i) {
      REQUIRE(env.contains(i));
      REQUIRE(back.at(i) == doctest::Approx(env.at(i)).epsilon(1e-12).scale(1.0));
    }
  }
  CHECK(rescale(env, 1.0, 1.5).flat() == env.flat());
  const TwoSidedPath z = test::constant_path(0.0, 5, 0.1);
  const TwoSidedPath z4 = rescale(z, 4.0, 2.0);
  for (const double v : z4.flat().values()) CHECK(v == 0.0);
  const TwoSidedPath s = rescale(env, 2.0, 1.5);
  CHECK(s.step_h() == doctest::Approx(0.1 / std::pow(2.0, 1.5)));
  CHECK(s.at(7) == doctest::Approx(env.at(7) / 2.0));
}

TEST_CASE("exp_integral examples") {
  const TwoSidedPath zero = test::constant_path(0.0, 8, 0.25);
  CHECK(exp_integral(zero, 0.0, 1.0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  const TwoSidedPath five = test::constant_path(5.0, 20, 0.1);
  CHECK(exp_integral(five, 0.0, 2.0, 1) == doctest::Approx(5.0 + std::log(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(exp_integral(five, 0.0, 2.2, 1), RangeError);
  CHECK_THROWS_AS(exp_integral(five, 0.0, 1.0, 2), ParameterError);
  CHECK_THROWS_AS(exp_integral(five, 1.0, 0.0, 1), ParameterError);
}

TEST_CASE("exp_integral against a 50-digit oracle, monotone and additive") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    // Large values make the integrand span hundreds of orders of magnitude.
    std::vector<double> v = test::gaussian_walk(401, seed, 25.0);
    const TwoSidedPath env(GridPath(v, 0.1, 200));
    for (const int sign : {1, -1}) {
      Big sum = 0;
      for (GridPoint i = -100; i < 150; ++i) sum += boost::multiprecision::exp(Big(sign * env.at(i)));
      const double want = static_cast<double>(boost::multiprecision::log(Big(0.1) * sum));
      CHECK(exp_integral(env, -10.0, 15.0, sign) == doctest::Approx(want).epsilon(1e-13));
      const double left = exp_integral(env, -10.0, 2.0, sign);
      const double right = exp_integral(env, 2.0, 15.0, sign);
      const double joined = std::max(left, right) + std::log1p(std::exp(-std::abs(left - right)));
      CHECK(joined == doctest::Approx(exp_integral(env, -10.0, 15.0, sign)).epsilon(1e-12));
      double prev = -INFINITY;
      for (double b = -9.9; b <= 15.0; b += 0.7) {
        const double cur = exp_integral(env, -10.0, b, sign);
        REQUIRE(cur >= prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("normalize_profile") {
  const TwoSidedPath zero = test::constant_path(0.0, 10, 0.25);
  const ProfileWeights w = normalize_profile(zero, 0.0, 1.0);
  REQUIRE(w.log_weights.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(w.density(k) == doctest::Approx(1.0));

  std::vector<double> well(21, 1e6);
  well[10] = 0.0;
  const TwoSidedPath deep(GridPath(well, 0.1, 10));
  const ProfileWeights d = normalize_profile(deep, -1.0, 1.0);
  for (std::size_t k = 0; k < d.log_weights.size(); ++k) {
    CHECK(d.density(k) * 0.1 == doctest::Approx(d.x_of(k) == 0.0 ? 1.0 : 0.0));
  }

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TwoSidedPath env = random_env(seed);
    const ProfileWeights p = normalize_profile(env, -15.0, 17.0);
    double total = 0.0;
    for (std::size_t k = 0; k < p.log_weights.size(); ++k) total += p.density(k) * p.step_h;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("laplace_ratio examples") {
  const TwoSidedPath v = test::abs_path(3.0, 0.01);
  const double r = laplace_ratio(v, 100.0, -2.0, 2.0, -1.0, 1.0);
  CHECK(r >= 1.0);
  CHECK(r <= 1.0 + 1e-40);
  CHECK(laplace_ratio(v, 0.0, -2.0, 2.0, -1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(laplace_ratio(v, 1.0, -2.0, 2.0, -1.0, 1.0) >
        laplace_ratio(v, 5.0, -2.0, 2.0, -1.0, 1.0));
}

TEST_CASE("points_in covers [a, b)") {
  const TwoSidedPath z = test::constant_path(0.0, 10, 0.1);
  const PointRange r = points_in(z, -0.3, 0.5);
  CHECK(r.first == -3);
  CHECK(r.end == 5);
}
