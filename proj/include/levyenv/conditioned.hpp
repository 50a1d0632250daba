#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "levyenv/grid_path.hpp"
#include "levyenv/stable_env.hpp"

namespace levyenv {

/// UP: the environment conditioned to stay positive; UP_HAT: the same for -V.
enum class LawTag { Up, UpHat };
enum class Construction { Bessel3, Bertoin, TanakaR };

std::string_view to_string(LawTag tag) noexcept;
std::string_view to_string(Construction c) noexcept;

struct ConditionedPath {
  ConditionedPath(GridPath p, LawTag l = LawTag::Up, Construction c = Construction::TanakaR,
                  std::optional<std::size_t> settled_prefix = std::nullopt)
      : path(std::move(p)), law(l), construction(c), settled(settled_prefix) {}

  GridPath path;
  LawTag law = LawTag::Up;
  Construction construction = Construction::TanakaR;
  /// Length of the prefix whose future infimum is already final. A streamed
  /// Tanaka sample cuts its last reversed excursion at the horizon, so points
  /// after the last ladder point can look like future-infimum points of the
  /// window without being ones. Empty means the window is taken as is.
  std::optional<std::size_t> settled;
};

struct TimeAboveZero {
  /// A+[i] = h * #{1 <= j <= i : V_j > 0}.
  GridPath a_plus;
  /// inverse[k] = grid index of the k-th positive point (inverse[0] = 0);
  /// empty when the path never goes above 0.
  std::vector<std::size_t> inverse;
};

TimeAboveZero time_above_zero(const GridPath& path);

/**
 * Concatenation of the positive excursions of V with the jump corrections:
 * step k of the output is the increment V_j - V_{j-1} at the k-th grid
 * point j with V_j > 0. Equivalent to
 *   V(a_t) + sum (0 v V(s-)) 1{V(s) <= 0} - (0 ^ V(s-)) 1{V(s) > 0}
 * evaluated at a_t, the right inverse of the time spent above 0.
 * WindowTooSmall if the path never goes above 0.
 */
ConditionedPath bertoin_transform(const GridPath& path);

/**
 * Excursion reversal of the reflected process M - V, M the running maximum.
 * Inside an excursion (g, d) of M - V away from 0,
 *   out(t) = (M - V)(d + g - t) + V(d),
 * and out = V at the zeros. The output is cut at the last zero, so an
 * unfinished final excursion is dropped. Feeding -V yields the dual law.
 */
ConditionedPath tanaka_transform(const GridPath& path, LawTag tag = LawTag::Up);

/// Bessel(3) path on [0, horizon]: Euclidean norm of three independent
/// Gaussian walks whose steps have variance 2 k h.
ConditionedPath sample_bessel3(double scale_k, double horizon, double step_h,
                               std::uint64_t seed, std::uint64_t base_stream);

/// Closed-form CDF of a Bessel(3) process started at 0, at time t, for
/// coordinates with variance 2 k t.
double bessel3_cdf(double r, double scale_k, double t) noexcept;

struct ConditionedOptions {
  Construction construction = Construction::TanakaR;  ///< ignored at alpha = 2
  std::size_t max_points = std::size_t{1} << 24;
};

/**
 * Conditioned path covering [0, horizon]. alpha = 2 samples Bessel(3)
 * directly; otherwise a fresh stable path on substream(base, kConditioned)
 * (law of -V for UP_HAT) is transformed. Increments are drawn until the
 * output covers the horizon; ReplicationAborted when that needs more than
 * max_points input points.
 */
ConditionedPath sample_conditioned(const StableLawSpec& spec, LawTag tag, double horizon,
                                   double step_h, std::uint64_t base_stream,
                                   const ConditionedOptions& options = {});

/// Tanaka transform of a fresh path at any alpha, including alpha = 2
/// (where sample_conditioned would bypass it). Same stream layout as
/// sample_conditioned.
ConditionedPath sample_tanaka_of(const StableLawSpec& spec, LawTag tag, double horizon,
                                 double step_h, std::uint64_t base_stream,
                                 std::size_t max_points = std::size_t{1} << 24);

/// pre[j] = V(m - j) - V(m) for j in [0, m], post[j] = V(m + j) - V(m) for
/// j in [0, tau - m], with (tau, m) from one_sided_stats.
std::pair<GridPath, GridPath> pre_post_split(const GridPath& path, double c);

/// First grid point t > 0 where path - future infimum returns to exactly 0
/// after exceeding eps at some earlier point, searched within the settled
/// prefix when the path has one. WindowTooSmall otherwise.
GridPoint sigma_epsilon(const ConditionedPath& path, double eps);

/// Last zero of path - future infimum before that gap first exceeds c;
/// used to stop dual samples at the height-c pre-infimum horizon.
GridPoint last_zero_before_rise(const GridPath& path, double c);

/// First grid point where the path reaches level 1 (from 0); WindowTooSmall
/// when it never does.
GridPoint first_passage_above(const GridPath& path, double level);

/**
 * Weight x^{-alpha rho} / Z relating the post-infimum law at height 1 to the
 * conditioned law stopped at its first passage above 1, x the overshoot
 * value omega(tau_1). Z is the empirical mean of x^{-alpha rho} over a
 * calibration set of UP paths, which absorbs the unknown excursion-measure
 * constant.
 */
class F1Normalizer {
 public:
  F1Normalizer(double alpha, double rho, std::span<const GridPath> calibration);
  double alpha_rho() const noexcept { return alpha_rho_; }
  double z_hat() const noexcept { return z_hat_; }
  double weight(const GridPath& post_path) const;
  double weight_of_value(double omega_tau) const;

 private:
  double alpha_rho_;
  double z_hat_;
};

double f1_weight(const GridPath& post_path, const StableLawSpec& spec, double rho,
                 std::span<const GridPath> calibration);

struct TildeEnvironment {
  TwoSidedPath two_sided;
  double log_integral;  ///< log of integral exp(-V~) over the stored window
  double half_window;
};

struct TildeOptions {
  double tolerance = 1e-6;
  double max_half_window = 1e6;
};

/**
 * Two-sided limit environment: UP on the right, UP_HAT on the left, drawn on
 * substream(base, kTildePlus / kTildeMinus). The half window starts at
 * half_window and doubles until the log integral of exp(-V~) moves by less
 * than the tolerance; ReplicationAborted past max_half_window.
 */
TildeEnvironment sample_tilde(const StableLawSpec& spec, double half_window, double step_h,
                              std::uint64_t base_stream, const TildeOptions& options = {});

}  // namespace levyenv
