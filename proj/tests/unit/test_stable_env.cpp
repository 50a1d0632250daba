#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "levyenv/errors.hpp"
#include "levyenv/stable_env.hpp"
#include "levyenv/stats.hpp"

using namespace levyenv;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::vector<double> increments(const StableLawSpec& s, double h, std::uint64_t stream, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = stable_increment_at(s, h, stream, i);
  return out;
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("law validation") {
  CHECK_NOTHROW(StableLawSpec::with_defaults(1.0).validate());
  CHECK_NOTHROW(StableLawSpec::with_defaults(2.0).validate());
  CHECK_THROWS_AS(StableLawSpec::with_defaults(2.5).validate(), ParameterError);
  CHECK_THROWS_AS(StableLawSpec::with_defaults(0.9).validate(), ParameterError);
  CHECK_THROWS_AS(StableLawSpec::with_defaults(1.5, 1.2).validate(), ParameterError);
  CHECK_THROWS_AS(StableLawSpec::with_defaults(1.0, 0.5).validate(), ParameterError);
  StableLawSpec bad = StableLawSpec::with_defaults(1.5);
  bad.scale_k = 0.0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("default scales") {
  CHECK(StableLawSpec::with_defaults(2.0).scale_k == 0.5);
  CHECK(StableLawSpec::with_defaults(1.5).scale_k == 1.0);
  CHECK(StableLawSpec::with_defaults(1.0).scale_k == 1.0);
}

TEST_CASE("Gaussian increments at k = 0.5, h = 1 are standard normal") {
  const auto s = StableLawSpec::with_defaults(2.0);
  const auto x = increments(s, 1.0, 5, 10000);
  CHECK(stats::ks_one_sample(x, normal_cdf).p_value > 0.01);
}

TEST_CASE("same spec, seed and stream give bit-identical paths") {
  auto s = StableLawSpec::with_defaults(1.5, 0.3);
  s.seed = 42;
  const GridPath a = sample_one_sided(s, 500, 0.1, 7);
  const GridPath b = sample_one_sided(s, 500, 0.1, 7);
  CHECK(a == b);
  CHECK(a[0] == 0.0);
  CHECK(a.size() == 501);
  const GridPath longer = sample_one_sided(s, 800, 0.1, 7);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(longer[i] == a[i]);
  CHECK_FALSE(sample_one_sided(s, 500, 0.1, 8) == a);
}

TEST_CASE("two-sided path: V(0) = 0 and the minus side has the law of -V+") {
  auto s = StableLawSpec::with_defaults(1.5, 0.6);
  std::vector<double> plus, neg_minus, minus;
  for (std::uint64_t b = 0; b < 3000; ++b) {
    const TwoSidedPath env = sample_two_sided(s, 10, 0.1, b);
    REQUIRE(env.eval(0.0) == 0.0);
    plus.push_back(env.at(10));
    minus.push_back(env.at(-10));
    neg_minus.push_back(-env.at(-10));
  }
  CHECK(stats::ks_two_sample(plus, neg_minus).p_value > 0.01);
  // Skewed law: V+ and V- themselves differ.
  CHECK(stats::ks_two_sample(plus, minus).p_value < 0.01);
  CHECK(std::abs(stats::pearson(plus, minus)) < 3.0 / std::sqrt(3000.0));
}

TEST_CASE("symmetric Gaussian sides agree in law") {
  const auto s = StableLawSpec::with_defaults(2.0);
  std::vector<double> plus, minus;
  for (std::uint64_t b = 0; b < 10000; ++b) {
    const TwoSidedPath env = sample_two_sided(s, 1, 1.0, b);
    plus.push_back(env.at(1));
    minus.push_back(env.at(-1));
  }
  CHECK(stats::ks_two_sample(plus, minus).p_value > 0.01);
}

TEST_CASE("characteristic function examples") {
  const auto s = StableLawSpec::with_defaults(2.0);
  const std::vector<double> x = increments(s, 1.0, 3, 20000);
  const std::vector<double> lambdas{0.0, 1.0};
  const auto pts = charfn_check(x, s, 1.0, lambdas);
  CHECK(pts[0].empirical == doctest::Approx(1.0));
  CHECK(pts[0].theoretical == 1.0);
  CHECK(pts[1].theoretical == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("characteristic function matches on a probe set for every supported law") {
  const std::vector<double> lambdas{0.25, 0.5, 1.0, 2.0, 4.0};
  struct Case {
    double alpha, beta, d;
  };
  for (const Case c : {Case{2.0, 0.0, 0.0}, Case{1.5, 0.0, 0.0}, Case{1.5, 0.8, 0.0},
                       Case{1.2, -1.0, 0.0}, Case{1.0, 0.0, 0.7}, Case{1.8, 1.0, 0.0}}) {
    auto s = StableLawSpec::with_defaults(c.alpha, c.beta);
    s.drift_d = c.d;
    const std::size_t n = 20000;
    const auto x = increments(s, 0.3, 11, n);
    for (const auto& p : charfn_check(x, s, 0.3, lambdas)) {
      CAPTURE(c.alpha);
      CAPTURE(c.beta);
      CHECK(std::abs(p.empirical - p.theoretical) <= 3.0 / std::sqrt(static_cast<double>(n)));
    }
  }
}

TEST_CASE("Cauchy drift shifts the median to -d h") {
  auto s = StableLawSpec::with_defaults(1.0);
  s.drift_d = 2.0;
  const auto x = increments(s, 0.5, 4, 40000);
  CHECK(median(x) == doctest::Approx(-1.0).epsilon(0.03));
}

TEST_CASE("stability scaling: c^-1 V(c^alpha) has the law of V(1)") {
  for (const double alpha : {2.0, 1.5, 1.2}) {
    auto s = StableLawSpec::with_defaults(alpha, alpha == 2.0 ? 0.0 : 0.5);
    const double c = 3.0;
    const std::size_t n = 10000;
    std::vector<double> one(n), scaled(n);
    for (std::size_t i = 0; i < n; ++i) {
      one[i] = stable_increment_at(s, 1.0, 1, i);
      // c^alpha split over 8 grid steps: convolution and scaling together.
      const GridPath p = sample_one_sided(s, 8, std::pow(c, alpha) / 8.0, 1000 + i);
      scaled[i] = p[8] / c;
    }
    CAPTURE(alpha);
    CHECK(stats::ks_two_sample(one, scaled).p_value > 0.01);
  }
}

TEST_CASE("rho estimates for symmetric laws") {
  const std::size_t n = 20000;
  for (const double alpha : {2.0, 1.5}) {
    const double rho = rho_estimate(StableLawSpec::with_defaults(alpha), n, 9);
    CHECK(std::abs(rho - 0.5) <= 3.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("totally skewed laws move rho away from one half") {
  // Spectrally negative alpha = 1.5: rho = 1 / alpha.
  const std::size_t n = 20000;
  const double rho = rho_estimate(StableLawSpec::with_defaults(1.5, -1.0), n, 9);
  CHECK(std::abs(rho - 1.0 / 1.5) <= 4.0 / std::sqrt(static_cast<double>(n)));
}
