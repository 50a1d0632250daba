#pragma once

#include <utility>

#include "levyenv/errors.hpp"

namespace levyenv {

template <class EnvFactory>
std::pair<DiffusionRun, TwoSidedPath> chain_simulate_growing(EnvFactory&& env_for,
                                                             std::size_t n_each,
                                                             double horizon_t,
                                                             std::uint64_t seed,
                                                             std::uint64_t stream,
                                                             std::size_t max_points,
                                                             const ChainOptions& options) {
  int extensions = 0;
  for (std::size_t n = n_each; 2 * n + 1 <= max_points; n *= 2, ++extensions) {
    TwoSidedPath env = env_for(n);
    try {
      DiffusionRun run = chain_simulate(env, horizon_t, seed, stream, options);
      run.window_extensions = extensions;
      return {std::move(run), std::move(env)};
    } catch (const WindowTooSmall&) {
    }
  }
  throw ReplicationAborted("diffusion left the environment window cap");
}

template <class EnvFactory>
std::pair<DiffusionRun, TwoSidedPath> brox_simulate_growing(EnvFactory&& env_for,
                                                            std::size_t n_each, double horizon_t,
                                                            double dt, double bin_h,
                                                            std::uint64_t seed,
                                                            std::uint64_t stream,
                                                            std::size_t max_points,
                                                            std::uint64_t max_steps) {
  int extensions = 0;
  for (std::size_t n = n_each; 2 * n + 1 <= max_points; n *= 2, ++extensions) {
    TwoSidedPath env = env_for(n);
    try {
      DiffusionRun run = brox_simulate(env, horizon_t, dt, bin_h, seed, stream, max_steps);
      run.window_extensions = extensions;
      return {std::move(run), std::move(env)};
    } catch (const WindowTooSmall&) {
    }
  }
  throw ReplicationAborted("diffusion left the environment window cap");
}

}  // namespace levyenv
