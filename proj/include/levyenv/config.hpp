#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyenv/stable_env.hpp"

namespace levyenv {

struct GridConfig {
  double step_h = 0.1;
  std::size_t initial_window = 1000;  ///< grid steps per side before any doubling
  std::size_t max_points = std::size_t{1} << 24;
};

/// Experiment parameters. Fields an experiment does not use are ignored, so
/// one config shape serves every subcommand.
struct ExperimentConfig {
  std::string id;
  std::vector<double> c_values;
  std::vector<double> probes;
  double delta = 1.0;
  double r = 0.5;
  std::size_t n_replications = 100;
  double horizon = 1.0;       ///< time horizon of samples that need one
  double epsilon = 0.5;       ///< regeneration threshold
  double dt = 0.0;            ///< Brownian step of the Brox engine; 0 means h^2 / 4
  double scaling_c = 2.0;     ///< c of the scaling experiment
  double valley_c = 3.0;      ///< valley height of the Laplace experiment
  double significance = 0.01;
  std::string engine = "chain";
};

struct RunConfig {
  StableLawSpec law;
  GridConfig grid;
  ExperimentConfig experiment;
  std::string output_dir = ".";
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
  /// Negative-control hook; "conductance" doubles every chain conductance.
  std::string mutation;

  /// Throws ParameterError on an inconsistent configuration.
  void validate() const;
  /// Law with the master seed installed; every random draw of a run derives
  /// from it.
  StableLawSpec seeded_law() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);

/**
 * Applies flat overrides such as {"alpha": "1.5", "c_values": "4,8,12"}.
 * Keys are leaf names of the JSON form (`seed` is accepted for master_seed).
 * Values parse as JSON when possible, comma lists become arrays, and anything
 * else is taken as a string.
 */
RunConfig apply_overrides(const RunConfig& base, const std::map<std::string, std::string>& flat);

/// Canonical (sorted-key, compact) JSON of the config.
std::string canonical_json(const RunConfig& config);
/// 64-bit FNV-1a of canonical_json, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace levyenv
