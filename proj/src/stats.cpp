#include "levyenv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "levyenv/errors.hpp"

namespace levyenv::stats {
namespace {

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return s;
}

void require_size(std::span<const double> x, const char* what) {
  if (x.size() < 30) throw ParameterError(std::string(what) + " needs at least 30 points");
}

}  // namespace

double kolmogorov_sf(double x) noexcept {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // Theta-function form converges fast for small x.
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * x * x));
    const double y8 = std::pow(y, 8.0);
    const double cdf = std::sqrt(2.0 * std::numbers::pi) / x *
                       (y + std::pow(y, 9.0) + std::pow(y, 25.0) + std::pow(y8, 6.125));
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double ks_p_value(double d, double n_eff) noexcept {
  const double sn = std::sqrt(n_eff);
  return kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require_size(a, "ks_two_sample");
  require_size(b, "ks_two_sample");
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  return {d, ks_p_value(d, ne), ne};
}

KsResult ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf) {
  require_size(a, "ks_one_sample");
  const auto s = sorted_copy(a);
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n), n};
}

KsResult ks_weighted(std::span<const double> a, std::span<const double> b,
                     std::span<const double> weights_b) {
  require_size(a, "ks_weighted");
  require_size(b, "ks_weighted");
  if (weights_b.size() != b.size()) throw ParameterError("one weight per point of b");
  const auto sa = sorted_copy(a);
  std::vector<std::size_t> order(b.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return b[x] < b[y]; });
  double w_total = 0.0;
  double w_sq = 0.0;
  for (const double w : weights_b) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("weights must be finite and >= 0");
    w_total += w;
    w_sq += w * w;
  }
  if (!(w_total > 0.0)) throw ParameterError("weights sum to zero");
  const double na = static_cast<double>(sa.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double wb = 0.0;
  double d = 0.0;
  while (i < sa.size() && j < order.size()) {
    const double x = std::min(sa[i], b[order[j]]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < order.size() && b[order[j]] == x) wb += weights_b[order[j++]];
    d = std::max(d, std::abs(static_cast<double>(i) / na - wb / w_total));
  }
  const double nb_eff = w_total * w_total / w_sq;
  const double ne = na * nb_eff / (na + nb_eff);
  return {d, ks_p_value(d, ne), ne};
}

double mean(std::span<const double> x) {
  if (x.empty()) throw ParameterError("mean of an empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw ParameterError("variance needs two points");
  const double m = mean(x);
  double s = 0.0;
  for (const double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw ParameterError("pearson needs paired samples");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace levyenv::stats
