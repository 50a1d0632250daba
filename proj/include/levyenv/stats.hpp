#pragma once

#include <functional>
#include <span>
#include <vector>

namespace levyenv::stats {

struct KsResult {
  double distance = 0.0;
  double p_value = 1.0;
  double n_eff = 0.0;
};

/// Survival function of the Kolmogorov distribution, P(K > x).
double kolmogorov_sf(double x) noexcept;

/// p-value for statistic d at effective size n_eff, with the
/// (sqrt(n) + 0.12 + 0.11/sqrt(n)) small-sample correction.
double ks_p_value(double d, double n_eff) noexcept;

/// Two-sample test; ParameterError when either sample has fewer than 30
/// points. The distance is exact (ties handled jointly).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample test against a continuous CDF.
KsResult ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf);

/// Unweighted sample a against sample b carrying nonnegative weights; the
/// effective size of b is Kish's (sum w)^2 / sum w^2.
KsResult ks_weighted(std::span<const double> a, std::span<const double> b,
                     std::span<const double> weights_b);

double mean(std::span<const double> x);
double variance(std::span<const double> x);
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace levyenv::stats
