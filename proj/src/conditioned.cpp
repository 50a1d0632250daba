#include "levyenv/conditioned.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "levyenv/errors.hpp"
#include "levyenv/path_core.hpp"
#include "levyenv/rng.hpp"
#include "levyenv/valley.hpp"

namespace levyenv {

std::string_view to_string(LawTag tag) noexcept { return tag == LawTag::Up ? "UP" : "UP_HAT"; }

std::string_view to_string(Construction c) noexcept {
  switch (c) {
    case Construction::Bessel3: return "BESSEL3";
    case Construction::Bertoin: return "BERTOIN";
    case Construction::TanakaR: return "TANAKA_R";
  }
  return "UNKNOWN";
}

TimeAboveZero time_above_zero(const GridPath& path) {
  const auto v = path.values();
  std::vector<double> a(v.size(), 0.0);
  std::vector<std::size_t> inverse;
  std::size_t count = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > 0.0) {
      if (inverse.empty()) inverse.push_back(0);
      inverse.push_back(i);
      ++count;
    }
    a[i] = path.step_h() * static_cast<double>(count);
  }
  return {GridPath(std::move(a), path.step_h()), std::move(inverse)};
}

ConditionedPath bertoin_transform(const GridPath& path) {
  const auto above = time_above_zero(path);
  if (above.inverse.empty()) throw WindowTooSmall("path never goes above 0");
  const auto v = path.values();
  std::vector<double> out(above.inverse.size(), 0.0);
  for (std::size_t k = 1; k < above.inverse.size(); ++k) {
    const std::size_t j = above.inverse[k];
    out[k] = out[k - 1] + (v[j] - v[j - 1]);
  }
  return {GridPath(std::move(out), path.step_h()), LawTag::Up, Construction::Bertoin};
}

ConditionedPath tanaka_transform(const GridPath& path, LawTag tag) {
  const auto v = path.values();
  const std::size_t n = v.size();
  std::vector<double> gap(n);
  std::vector<std::size_t> zeros;
  double running_max = v[0];
  for (std::size_t i = 0; i < n; ++i) {
    running_max = std::max(running_max, v[i]);
    gap[i] = running_max - v[i];
    if (gap[i] == 0.0) zeros.push_back(i);
  }
  const std::size_t last_zero = zeros.back();
  std::vector<double> out(last_zero + 1);
  for (std::size_t z = 0; z < zeros.size(); ++z) {
    const std::size_t g = zeros[z];
    out[g] = v[g];
    if (z + 1 == zeros.size()) break;
    const std::size_t d = zeros[z + 1];
    for (std::size_t t = g + 1; t < d; ++t) out[t] = gap[d + g - t] + v[d];
  }
  return {GridPath(std::move(out), path.step_h()), tag, Construction::TanakaR};
}

namespace {

double gaussian_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
  const auto bits = random_pair_at(seed, stream, index);
  const double radius = std::sqrt(-2.0 * std::log(to_open_unit(bits.first)));
  return radius * std::cos(2.0 * std::numbers::pi * to_unit(bits.second));
}

std::size_t steps_for(double horizon, double step_h) {
  if (!(horizon > 0.0) || !(step_h > 0.0)) {
    throw ParameterError("horizon and step must be positive");
  }
  return static_cast<std::size_t>(std::ceil(horizon / step_h - 1e-9));
}

}  // namespace

ConditionedPath sample_bessel3(double scale_k, double horizon, double step_h, std::uint64_t seed,
                               std::uint64_t base_stream) {
  const std::size_t n = steps_for(horizon, step_h);
  const double sd = std::sqrt(2.0 * scale_k * step_h);
  const std::uint64_t streams[3] = {substream(base_stream, stream_tag::kBesselX),
                                    substream(base_stream, stream_tag::kBesselY),
                                    substream(base_stream, stream_tag::kBesselZ)};
  double x[3] = {0.0, 0.0, 0.0};
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < 3; ++d) x[d] += sd * gaussian_at(seed, streams[d], i);
    out[i + 1] = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  }
  return {GridPath(std::move(out), step_h), LawTag::Up, Construction::Bessel3};
}

double bessel3_cdf(double r, double scale_k, double t) noexcept {
  if (r <= 0.0) return 0.0;
  const double s = std::sqrt(2.0 * scale_k * t);
  const double z = r / s;
  return std::erf(z / std::numbers::sqrt2) -
         std::sqrt(2.0 / std::numbers::pi) * z * std::exp(-0.5 * z * z);
}

namespace {

// Streaming Tanaka transform of the stable path on `stream`: increments are
// drawn one at a time until the first zero of M - V past `need`, keeping the
// first need + 1 gaps and a ring of the most recent ones. Values agree
// exactly with tanaka_transform on any window long enough to contain that
// zero, but memory stays O(need) however long the straddling excursion is.
ConditionedPath tanaka_streamed(const StableLawSpec& law, LawTag tag, std::size_t need,
                                double h, std::uint64_t stream, std::size_t max_points) {
  std::vector<double> v(need + 1, 0.0);
  std::vector<double> gap(need + 1, 0.0);
  std::vector<double> ring(need + 1, 0.0);
  std::vector<double> out(need + 1, 0.0);
  double value = 0.0;
  double running_max = 0.0;
  std::size_t g = 0;
  const auto fill_excursion = [&](std::size_t d, double v_d) {
    for (std::size_t t = g + 1; t < d && t <= need; ++t) {
      const std::size_t j = d + g - t;
      out[t] = (j <= need ? gap[j] : ring[j % ring.size()]) + v_d;
    }
  };
  for (std::size_t i = 1;; ++i) {
    if (i >= max_points) {
      throw ReplicationAborted("excursion straddling the horizon exceeds the window cap");
    }
    value += stable_increment_at(law, h, stream, i - 1);
    running_max = std::max(running_max, value);
    const double gi = running_max - value;
    if (i <= need) {
      v[i] = value;
      gap[i] = gi;
    } else {
      ring[i % ring.size()] = gi;
    }
    if (gi != 0.0) continue;
    fill_excursion(i, value);
    if (i >= need) {
      if (i == need) {
        out[need] = value;
        g = need;
      }
      return {GridPath(std::move(out), h), tag, Construction::TanakaR, g + 1};
    }
    out[i] = value;
    g = i;
  }
}

// Streaming Bertoin transform: keeps drawing until need points above 0 have
// been seen.
GridPath bertoin_streamed(const StableLawSpec& law, std::size_t need, double h,
                          std::uint64_t stream, std::size_t max_points) {
  std::vector<double> out(need + 1, 0.0);
  std::size_t k = 0;
  double value = 0.0;
  for (std::size_t i = 1; k < need; ++i) {
    if (i >= max_points) throw ReplicationAborted("time above 0 did not reach the horizon");
    const double prev = value;
    value += stable_increment_at(law, h, stream, i - 1);
    if (value > 0.0) {
      ++k;
      out[k] = out[k - 1] + (value - prev);
    }
  }
  return GridPath(std::move(out), h);
}

}  // namespace

ConditionedPath sample_conditioned(const StableLawSpec& spec, LawTag tag, double horizon,
                                   double step_h, std::uint64_t base_stream,
                                   const ConditionedOptions& options) {
  spec.validate();
  const std::size_t need = steps_for(horizon, step_h);
  if (spec.gaussian()) {
    ConditionedPath p = sample_bessel3(spec.scale_k, horizon, step_h, spec.seed, base_stream);
    p.law = tag;
    return p;
  }
  const StableLawSpec law = tag == LawTag::Up ? spec : spec.negated();
  const std::uint64_t stream = substream(base_stream, stream_tag::kConditioned);
  if (options.construction == Construction::Bertoin) {
    return {bertoin_streamed(law, need, step_h, stream, options.max_points), tag,
            Construction::Bertoin};
  }
  return tanaka_streamed(law, tag, need, step_h, stream, options.max_points);
}

ConditionedPath sample_tanaka_of(const StableLawSpec& spec, LawTag tag, double horizon,
                                 double step_h, std::uint64_t base_stream,
                                 std::size_t max_points) {
  spec.validate();
  const StableLawSpec law = tag == LawTag::Up ? spec : spec.negated();
  return tanaka_streamed(law, tag, steps_for(horizon, step_h), step_h,
                         substream(base_stream, stream_tag::kConditioned), max_points);
}

std::pair<GridPath, GridPath> pre_post_split(const GridPath& path, double c) {
  const auto stats = one_sided_stats(path, c);
  const auto v = path.values();
  const auto m = static_cast<std::size_t>(stats.m_c);
  const auto tau = static_cast<std::size_t>(stats.tau_c);
  std::vector<double> pre(m + 1);
  std::vector<double> post(tau - m + 1);
  for (std::size_t j = 0; j <= m; ++j) pre[j] = v[m - j] - v[m];
  for (std::size_t j = 0; j + m <= tau; ++j) post[j] = v[m + j] - v[m];
  return {GridPath(std::move(pre), path.step_h()), GridPath(std::move(post), path.step_h())};
}

GridPoint sigma_epsilon(const ConditionedPath& path, double eps) {
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  const auto v = path.path.values();
  const GridPath future = future_infimum(path.path);
  const auto fi = future.values();
  bool deep = false;
  // The final stored point always equals its own future infimum, so it is
  // not evidence of a completed excursion.
  const std::size_t end = path.settled ? std::min(*path.settled, v.size()) : v.size() - 1;
  for (std::size_t t = 1; t < end; ++t) {
    const double gap = v[t] - fi[t];
    if (deep && gap == 0.0) return static_cast<GridPoint>(t);
    if (gap > eps) deep = true;
  }
  throw WindowTooSmall("no excursion deeper than eps completed inside the window");
}

GridPoint last_zero_before_rise(const GridPath& path, double c) {
  const auto v = path.values();
  const GridPath future = future_infimum(path);
  const auto fi = future.values();
  std::size_t last_zero = 0;
  for (std::size_t t = 0; t < v.size(); ++t) {
    const double gap = v[t] - fi[t];
    if (gap == 0.0) last_zero = t;
    if (gap >= c) return static_cast<GridPoint>(last_zero);
  }
  throw WindowTooSmall("gap above the future infimum never reaches c");
}

GridPoint first_passage_above(const GridPath& path, double level) {
  const auto v = path.values();
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (v[t] >= level) return static_cast<GridPoint>(t);
  }
  throw WindowTooSmall("path never reaches the level");
}

F1Normalizer::F1Normalizer(double alpha, double rho, std::span<const GridPath> calibration)
    : alpha_rho_(alpha * rho), z_hat_(0.0) {
  if (!(alpha >= 1.0 && alpha <= 2.0)) throw ParameterError("alpha must lie in [1, 2]");
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must lie in (0, 1)");
  if (calibration.empty()) throw ParameterError("f1 calibration set is empty");
  double sum = 0.0;
  for (const auto& p : calibration) {
    sum += std::pow(p[static_cast<std::size_t>(first_passage_above(p, 1.0))], -alpha_rho_);
  }
  z_hat_ = sum / static_cast<double>(calibration.size());
}

double F1Normalizer::weight_of_value(double omega_tau) const {
  return std::pow(omega_tau, -alpha_rho_) / z_hat_;
}

double F1Normalizer::weight(const GridPath& post_path) const {
  return weight_of_value(post_path[static_cast<std::size_t>(first_passage_above(post_path, 1.0))]);
}

double f1_weight(const GridPath& post_path, const StableLawSpec& spec, double rho,
                 std::span<const GridPath> calibration) {
  spec.validate();
  return F1Normalizer(spec.alpha, rho, calibration).weight(post_path);
}

TildeEnvironment sample_tilde(const StableLawSpec& spec, double half_window, double step_h,
                              std::uint64_t base_stream, const TildeOptions& options) {
  const auto build = [&](double hw) {
    const auto plus = sample_conditioned(spec, LawTag::Up, hw, step_h,
                                         substream(base_stream, stream_tag::kTildePlus));
    const auto minus = sample_conditioned(spec, LawTag::UpHat, hw, step_h,
                                          substream(base_stream, stream_tag::kTildeMinus));
    TwoSidedPath env(plus.path, minus.path);
    const double lo = env.flat().x_of(env.min_point());
    const double hi = env.flat().x_of(env.max_point() + 1);
    return TildeEnvironment{env, exp_integral(env, lo, hi, -1), hw};
  };
  TildeEnvironment current = build(half_window);
  for (double hw = 2.0 * half_window; hw <= options.max_half_window; hw *= 2.0) {
    TildeEnvironment wider = build(hw);
    const double change = std::abs(wider.log_integral - current.log_integral);
    current = std::move(wider);
    if (change < options.tolerance) return current;
  }
  throw ReplicationAborted("integral of exp(-V~) did not stabilise within the window cap");
}

}  // namespace levyenv
