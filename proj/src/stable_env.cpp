#include "levyenv/stable_env.hpp"

#include <cmath>
#include <numbers>

#include "levyenv/errors.hpp"
#include "levyenv/rng.hpp"

namespace levyenv {

StableLawSpec StableLawSpec::with_defaults(double alpha, double beta, std::uint64_t seed) {
  StableLawSpec s;
  s.alpha = alpha;
  s.beta = beta;
  s.scale_k = alpha == 2.0 ? 0.5 : 1.0;
  s.seed = seed;
  return s;
}

void StableLawSpec::validate() const {
  if (!(alpha >= 1.0 && alpha <= 2.0)) throw ParameterError("alpha must lie in [1, 2]");
  if (!(beta >= -1.0 && beta <= 1.0)) throw ParameterError("beta must lie in [-1, 1]");
  if (!(scale_k > 0.0) || !std::isfinite(scale_k)) throw ParameterError("scale k must be positive");
  if (!std::isfinite(drift_d)) throw ParameterError("drift must be finite");
  if (alpha == 1.0 && beta != 0.0) {
    throw ParameterError("alpha = 1 requires beta = 0 (use the drift for asymmetry)");
  }
}

std::complex<double> StableLawSpec::psi(double lambda) const noexcept {
  const double a = std::abs(lambda);
  if (alpha == 1.0) return {scale_k * a, drift_d * lambda};
  if (alpha == 2.0) return {scale_k * lambda * lambda, 0.0};
  const double sgn = lambda > 0 ? 1.0 : (lambda < 0 ? -1.0 : 0.0);
  const double mod = scale_k * std::pow(a, alpha);
  return {mod, -mod * beta * sgn * std::tan(std::numbers::pi * alpha / 2.0)};
}

StableLawSpec StableLawSpec::negated() const noexcept {
  StableLawSpec s = *this;
  s.beta = -beta;
  s.drift_d = -drift_d;
  return s;
}

double stable_increment(const StableLawSpec& spec, double h, double u_angle,
                        double u_exp) noexcept {
  using std::numbers::pi;
  const double v = pi * (u_angle - 0.5);
  const double w = -std::log(u_exp);
  const double a = spec.alpha;
  if (a == 2.0) {
    // Chambers-Mallows-Stuck at alpha = 2 reduces to 2 sin(V) sqrt(W), a
    // centred Gaussian with variance 2.
    return std::sqrt(spec.scale_k * h) * 2.0 * std::sin(v) * std::sqrt(w);
  }
  if (a == 1.0) {
    // psi = k|l| + i d l: Cauchy with scale k h, shifted by -d h.
    return spec.scale_k * h * std::tan(v) - spec.drift_d * h;
  }
  const double t = spec.beta * std::tan(pi * a / 2.0);
  const double b = std::atan(t) / a;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * a));
  const double x = s * std::sin(a * (v + b)) / std::pow(std::cos(v), 1.0 / a) *
                   std::pow(std::cos(v - a * (v + b)) / w, (1.0 - a) / a);
  return std::pow(spec.scale_k * h, 1.0 / a) * x;
}

double stable_increment_at(const StableLawSpec& spec, double h, std::uint64_t stream_id,
                           std::uint64_t index) noexcept {
  const auto bits = random_pair_at(spec.seed, stream_id, index);
  return stable_increment(spec, h, to_open_unit(bits.first), to_open_unit(bits.second));
}

GridPath sample_one_sided(const StableLawSpec& spec, std::size_t n_steps, double step_h,
                          std::uint64_t stream_id) {
  spec.validate();
  if (n_steps < 1) throw ParameterError("n_steps must be at least 1");
  if (!(step_h > 0.0)) throw ParameterError("step_h must be positive");
  std::vector<double> values(n_steps + 1);
  values[0] = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n_steps; ++i) {
    acc += stable_increment_at(spec, step_h, stream_id, i);
    values[i + 1] = acc;
  }
  return GridPath(std::move(values), step_h);
}

TwoSidedPath sample_two_sided(const StableLawSpec& spec, std::size_t n_steps_each,
                              double step_h, std::uint64_t base_stream) {
  const GridPath plus =
      sample_one_sided(spec, n_steps_each, step_h, substream(base_stream, stream_tag::kEnvPlus));
  const GridPath minus = sample_one_sided(spec.negated(), n_steps_each, step_h,
                                          substream(base_stream, stream_tag::kEnvMinus));
  return TwoSidedPath(plus, minus);
}

std::vector<CharFnPoint> charfn_check(std::span<const double> increments,
                                      const StableLawSpec& spec, double step_h,
                                      std::span<const double> lambdas) {
  spec.validate();
  if (increments.empty()) throw ParameterError("charfn_check needs increments");
  std::vector<CharFnPoint> out;
  out.reserve(lambdas.size());
  const double n = static_cast<double>(increments.size());
  for (const double l : lambdas) {
    double re = 0.0;
    double im = 0.0;
    for (const double d : increments) {
      re += std::cos(l * d);
      im += std::sin(l * d);
    }
    out.push_back({std::hypot(re, im) / n, std::exp(-step_h * spec.psi(l).real())});
  }
  return out;
}

double rho_estimate(const StableLawSpec& spec, std::size_t n_samples, std::uint64_t stream_id,
                    double t) {
  spec.validate();
  if (n_samples < 1000) throw ParameterError("rho_estimate needs at least 1000 samples");
  std::size_t nonnegative = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    if (stable_increment_at(spec, t, stream_id, i) >= 0.0) ++nonnegative;
  }
  return static_cast<double>(nonnegative) / static_cast<double>(n_samples);
}

}  // namespace levyenv
