#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "levyenv/errors.hpp"
#include "levyenv/rng.hpp"
#include "levyenv/stats.hpp"

using namespace levyenv;

namespace {

std::vector<double> uniforms(std::size_t n, std::uint64_t seed, double shift = 0.0) {
  CounterRng rng(seed, 0);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform() + shift;
  return v;
}

}  // namespace

TEST_CASE("Kolmogorov distribution reference values") {
  // Tabulated survival function of the Kolmogorov distribution.
  CHECK(stats::kolmogorov_sf(0.5) == doctest::Approx(0.963945).epsilon(1e-5));
  CHECK(stats::kolmogorov_sf(1.0) == doctest::Approx(0.269999).epsilon(1e-5));
  CHECK(stats::kolmogorov_sf(1.36) == doctest::Approx(0.049471).epsilon(1e-4));
  CHECK(stats::kolmogorov_sf(1.63) == doctest::Approx(0.009888).epsilon(1e-3));
  CHECK(stats::kolmogorov_sf(0.0) == 1.0);
  CHECK(stats::kolmogorov_sf(10.0) < 1e-80);
}

TEST_CASE("two-sample KS examples") {
  const auto a = uniforms(100, 1);
  const auto same = stats::ks_two_sample(a, a);
  CHECK(same.distance == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK(stats::ks_two_sample(a, uniforms(100, 2, 5.0)).distance == 1.0);
  CHECK_THROWS_AS(stats::ks_two_sample(uniforms(10, 1), a), ParameterError);
}

TEST_CASE("KS distance handles ties jointly") {
  const std::vector<double> a(40, 1.0);
  std::vector<double> b(40, 1.0);
  b[0] = 2.0;
  CHECK(stats::ks_two_sample(a, b).distance == doctest::Approx(1.0 / 40));
}

TEST_CASE("KS p-values are roughly uniform under the null") {
  int rejections = 0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    const auto p = stats::ks_two_sample(uniforms(200, 2 * t), uniforms(300, 2 * t + 1)).p_value;
    rejections += p < 0.05 ? 1 : 0;
  }
  CHECK(rejections > 5);
  CHECK(rejections < 40);
}

TEST_CASE("one-sample KS against the uniform CDF") {
  const auto x = uniforms(5000, 7);
  const auto r = stats::ks_one_sample(x, [](double u) { return std::clamp(u, 0.0, 1.0); });
  CHECK(r.p_value > 0.01);
  const auto shifted = stats::ks_one_sample(uniforms(5000, 7, 0.1),
                                            [](double u) { return std::clamp(u, 0.0, 1.0); });
  CHECK(shifted.distance == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("weighted KS with unit weights reduces to the two-sample test") {
  const auto a = uniforms(300, 3);
  const auto b = uniforms(500, 4);
  const std::vector<double> w(b.size(), 1.0);
  const auto plain = stats::ks_two_sample(a, b);
  const auto weighted = stats::ks_weighted(a, b, w);
  CHECK(weighted.distance == doctest::Approx(plain.distance));
  CHECK(weighted.p_value == doctest::Approx(plain.p_value));
  std::vector<double> half(b.size(), 0.0);
  for (std::size_t i = 0; i < half.size(); i += 2) half[i] = 1.0;
  CHECK(stats::ks_weighted(a, b, half).n_eff < plain.n_eff);
}

TEST_CASE("moments and correlation") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(stats::mean(x) == 2.5);
  CHECK(stats::variance(x) == doctest::Approx(5.0 / 3.0));
  const std::vector<double> y{2, 4, 6, 8};
  CHECK(stats::pearson(x, y) == doctest::Approx(1.0));
  const std::vector<double> z{4, 3, 2, 1};
  CHECK(stats::pearson(x, z) == doctest::Approx(-1.0));
}
