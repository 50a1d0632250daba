#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "levyenv/grid_path.hpp"

namespace levyenv {

enum class Engine { Brox, Chain };
std::string_view to_string(Engine e) noexcept;

/// Occupation time per cell [x_i, x_i + bin_h), x_i = i * bin_h.
struct Occupation {
  double bin_h = 1.0;
  GridPoint first_point = 0;
  std::vector<double> time;

  double total() const noexcept;
  /// Adds `dt` to the cell of grid point i, growing the array as needed.
  void add(GridPoint i, double dt);
};

struct DiffusionRun {
  Engine engine = Engine::Chain;
  double horizon_t = 0.0;
  Occupation occupation;
  double final_position = 0.0;
  std::uint64_t stream = 0;
  std::uint64_t steps = 0;  ///< chain jumps or Brownian steps
  int window_extensions = 0;
};

/// Log of |S(x)| with its sign, S(x) = integral_0^x exp(V(y)) dy.
struct SignedLog {
  int sign;  ///< -1, 0 or +1
  double log_abs;
  double value() const noexcept;
};

/// Scale function at x by the left-endpoint rule on the step environment;
/// RangeError outside the window.
SignedLog scale_function(const TwoSidedPath& env, double x);

/// Mutation hook for negative controls: multiplies every conductance.
struct ChainOptions {
  double conductance_scale = 1.0;
};

/**
 * Nearest-neighbour chain on the environment grid, started at site 0.
 * Conductances c(i,i+1) = exp(-(V_i + V_{i+1})/2)/h and site weights
 * mu_i = h exp(-V_i) give jump rates
 *   r(i -> i+-1) = exp(-(V_{i+-1} - V_i)/2) / (2 h^2),
 * the finite-volume form of (1/2) e^V d/dx(e^{-V} d/dx). Holding times are
 * exponential and the last one is cut at the horizon, so occupation sums to
 * the horizon exactly. Jump k uses counter k of the stream, so a rerun on a
 * wider window reproduces the same trajectory. Throws WindowTooSmall when
 * the chain reaches an edge site.
 */
DiffusionRun chain_simulate(const TwoSidedPath& env, double horizon_t, std::uint64_t seed,
                            std::uint64_t stream, const ChainOptions& options = {});

/**
 * Brox construction X = S^{-1}(B(T^{-1}(t))): B on steps of length dt,
 * T accumulated by the left-endpoint rule until it reaches the horizon (the
 * last step is cut), S^{-1} by binary search over the grid values of S.
 * Occupation in X-time is binned with width bin_h. WindowTooSmall when
 * S^{-1}(B) leaves the window; ReplicationAborted when T stalls.
 */
DiffusionRun brox_simulate(const TwoSidedPath& env, double horizon_t, double dt, double bin_h,
                           std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t max_steps = 400'000'000);

/// Same as brox_simulate but the occupation is rebuilt from Brownian
/// occupation binned in S-space: L_X(t, x) = exp(-V(x)) L_B(T^{-1}(t), S(x)).
/// Returns the local-time values on the environment grid [min, max].
std::vector<double> brox_local_time_via_brownian(const TwoSidedPath& env, double horizon_t,
                                                 double dt, std::uint64_t seed,
                                                 std::uint64_t stream);

struct LocalTimeProfile {
  GridPath grid;  ///< values are L_X(t, x_i)
  double horizon_t;

  /// Grid max of the profile.
  double sup() const noexcept;
};

/// values[i] = occupation_i / bin width.
LocalTimeProfile local_time_profile(const DiffusionRun& run);

/// Leftmost grid point attaining the maximum; ParameterError if empty.
GridPoint favorite_point(const LocalTimeProfile& profile);

/// Chain run that doubles the environment window on WindowTooSmall; env_for
/// must return an environment with n steps on each side (same streams, so
/// windows are nested). Returns the run and the environment it used.
template <class EnvFactory>
std::pair<DiffusionRun, TwoSidedPath> chain_simulate_growing(EnvFactory&& env_for,
                                                             std::size_t n_each,
                                                             double horizon_t,
                                                             std::uint64_t seed,
                                                             std::uint64_t stream,
                                                             std::size_t max_points,
                                                             const ChainOptions& options = {});

/// Brox counterpart of chain_simulate_growing.
template <class EnvFactory>
std::pair<DiffusionRun, TwoSidedPath> brox_simulate_growing(EnvFactory&& env_for,
                                                            std::size_t n_each, double horizon_t,
                                                            double dt, double bin_h,
                                                            std::uint64_t seed,
                                                            std::uint64_t stream,
                                                            std::size_t max_points,
                                                            std::uint64_t max_steps = 400'000'000);

}  // namespace levyenv

#include "levyenv/detail/diffusion_growing.hpp"
