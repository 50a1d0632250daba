#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "levyenv/grid_path.hpp"

namespace levyenv {

/**
 * Parameters of a strictly alpha-stable Levy environment with exponent
 *   psi(l) = k |l|^alpha (1 - i beta sgn(l) tan(pi alpha / 2))   (alpha != 1)
 *   psi(l) = k |l| + i d l                                       (alpha == 1)
 * so that E exp(i l V(t)) = exp(-t psi(l)).
 */
struct StableLawSpec {
  double alpha = 2.0;
  double beta = 0.0;
  double scale_k = 0.5;
  double drift_d = 0.0;
  std::uint64_t seed = 0;

  /// Default scale: k = 0.5 for the Gaussian case (standard Brownian
  /// motion), k = 1 otherwise.
  static StableLawSpec with_defaults(double alpha, double beta = 0.0, std::uint64_t seed = 0);

  /// Throws ParameterError when alpha is outside [1, 2], beta outside
  /// [-1, 1], k <= 0, or beta != 0 at alpha == 1 (the asymmetric Cauchy
  /// family is not strictly stable and is not supported).
  void validate() const;

  std::complex<double> psi(double lambda) const noexcept;

  /// Law of -V: skewness and drift negated.
  StableLawSpec negated() const noexcept;

  bool gaussian() const noexcept { return alpha == 2.0; }
};

/// One increment over a step of length h, from two independent uniforms on
/// (0, 1). Exact: its characteristic function is exp(-h psi).
double stable_increment(const StableLawSpec& spec, double h, double u_angle, double u_exp) noexcept;

/// Increment number `index` (0-based) of stream `stream_id`; a pure function
/// of (spec.seed, stream_id, index).
double stable_increment_at(const StableLawSpec& spec, double h, std::uint64_t stream_id,
                           std::uint64_t index) noexcept;

/// Path with n_steps + 1 values starting at 0. Paths of different lengths on
/// the same stream share their common prefix bit for bit.
GridPath sample_one_sided(const StableLawSpec& spec, std::size_t n_steps, double step_h,
                          std::uint64_t stream_id);

/// Plus side on substream(base, kEnvPlus), minus side from the law of -V+ on
/// substream(base, kEnvMinus).
TwoSidedPath sample_two_sided(const StableLawSpec& spec, std::size_t n_steps_each,
                              double step_h, std::uint64_t base_stream = 0);

struct CharFnPoint {
  double empirical;
  double theoretical;
};

/// |mean exp(i l dV)| against |exp(-h psi(l))| for every probe l.
std::vector<CharFnPoint> charfn_check(std::span<const double> increments,
                                      const StableLawSpec& spec, double step_h,
                                      std::span<const double> lambdas);

/// Monte Carlo estimate of rho = P(V(t) >= 0) from n_samples draws of V(t),
/// t = 1 unless given.
double rho_estimate(const StableLawSpec& spec, std::size_t n_samples, std::uint64_t stream_id,
                    double t = 1.0);

}  // namespace levyenv
