#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "levyenv/config.hpp"
#include "levyenv/errors.hpp"
#include "levyenv/stats.hpp"

namespace levyenv::verify {

/// A named threshold; the statistic passes when `value op bound` holds.
struct Threshold {
  std::string statistic;
  std::string op;  ///< "<", "<=", ">", ">="
  double bound;
  bool holds(double value) const;
};

/// Per-replication observables, one row per replication, written as CSV.
struct Observables {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write_csv(std::ostream& os) const;
};

struct McReport {
  std::string experiment_id;
  std::size_t n_replications = 0;
  std::size_t n_failures = 0;
  /// Statistics in insertion order.
  std::vector<std::pair<std::string, double>> statistics;
  std::vector<Threshold> thresholds;
  /// Conditions that are not a threshold on one statistic (trends).
  std::vector<std::pair<std::string, bool>> checks;
  bool pass = false;
  double runtime_s = 0.0;
  std::string config_hash;
  nlohmann::json config;
  Observables observables;

  void set(const std::string& name, double value);
  /// ParameterError when the statistic was never set.
  double get(const std::string& name) const;
  void require(const std::string& statistic, const std::string& op, double bound);
  void check(const std::string& name, bool ok);
  /// Applies thresholds, checks and the abort-rate rule (more than 5% aborted
  /// replications fails the experiment) to set `pass`. Deterministic in the
  /// statistics.
  void finalize();

  nlohmann::json to_json() const;
};

/// Rows of a trend check: true when every element is <= its predecessor
/// (strict when `strict`).
bool non_increasing(const std::vector<double>& xs, bool strict = false);
bool non_decreasing(const std::vector<double>& xs, bool strict = false);

/// Runs body(i) for i in [0, n) on `threads` workers. Results land at their
/// index, so the outcome does not depend on scheduling. The first exception
/// other than ReplicationAborted is rethrown after all workers stop.
template <class T, class Body>
std::vector<std::optional<T>> run_replications(std::size_t n, unsigned threads, Body&& body) {
  std::vector<std::optional<T>> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        out[i].emplace(body(i));
      } catch (const ReplicationAborted&) {
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  const unsigned k = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (k == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

/// Number of empty slots.
template <class T>
std::size_t count_failures(const std::vector<std::optional<T>>& xs) {
  std::size_t f = 0;
  for (const auto& x : xs) f += x ? 0 : 1;
  return f;
}

// Experiments. Each reads the parameters it needs from the config and
// returns a finalized report with config echo and hash filled in.
McReport occupation_experiment(const RunConfig& config);
McReport brownian_experiment(const RunConfig& config);
McReport bessel_experiment(const RunConfig& config);
McReport transforms_experiment(const RunConfig& config);
McReport post_infimum_experiment(const RunConfig& config);
McReport independence_experiment(const RunConfig& config);
McReport regeneration_experiment(const RunConfig& config);
McReport scaling_experiment(const RunConfig& config);
McReport valley_law_experiment(const RunConfig& config);
McReport laplace_experiment(const RunConfig& config);
/// Favorite point coverage over c_values.
McReport theorem_cvptfav_experiment(const RunConfig& config);
/// L*(e^c)/e^c against 1/integral exp(-V~).
McReport corollary_limsup_experiment(const RunConfig& config);
/// Normalized local time at the valley bottom plus each probe offset.
McReport theorem_cvloi_experiment(const RunConfig& config);

/// The three localization experiments share one dataset (valley, chain run
/// and limit sample per environment and c); this computes it once and
/// returns the reports in the order cvptfav, limsup, cvloi. Each report
/// uses the first n_replications of its own config.
std::vector<McReport> localization_experiments(const RunConfig& cvptfav, const RunConfig& limsup,
                                               const RunConfig& cvloi);

/// Experiment ids accepted by run_experiment.
const std::vector<std::string>& experiment_ids();
/// Dispatches on config.experiment.id; ParameterError for an unknown id.
McReport run_experiment(const RunConfig& config);

/// Parameters used by the acceptance suite for an experiment id.
RunConfig acceptance_preset(const std::string& id);

}  // namespace levyenv::verify
