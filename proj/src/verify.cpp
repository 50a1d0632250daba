#include "levyenv/verify.hpp"

#include <cmath>
#include <ostream>

#include "levyenv/io.hpp"

namespace levyenv::verify {

bool Threshold::holds(double value) const {
  if (op == "<") return value < bound;
  if (op == "<=") return value <= bound;
  if (op == ">") return value > bound;
  if (op == ">=") return value >= bound;
  throw ParameterError("unknown threshold operator '" + op + "'");
}

void Observables::write_csv(std::ostream& os) const {
  for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << columns[k];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      os << (k ? "," : "") << (std::isnan(row[k]) ? std::string() : io::format_double(row[k]));
    }
    os << '\n';
  }
}

void McReport::set(const std::string& name, double value) {
  for (auto& [n, v] : statistics) {
    if (n == name) {
      v = value;
      return;
    }
  }
  statistics.emplace_back(name, value);
}

double McReport::get(const std::string& name) const {
  for (const auto& [n, v] : statistics) {
    if (n == name) return v;
  }
  throw ParameterError("statistic '" + name + "' was not recorded");
}

void McReport::require(const std::string& statistic, const std::string& op, double bound) {
  thresholds.push_back({statistic, op, bound});
}

void McReport::check(const std::string& name, bool ok) { checks.emplace_back(name, ok); }

void McReport::finalize() {
  bool ok = true;
  for (const auto& t : thresholds) ok = ok && t.holds(get(t.statistic));
  for (const auto& [name, passed] : checks) ok = ok && passed;
  const double abort_rate =
      n_replications ? static_cast<double>(n_failures) / static_cast<double>(n_replications) : 0.0;
  set("abort_rate", abort_rate);
  pass = ok && abort_rate <= 0.05;
}

nlohmann::json McReport::to_json() const {
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& [n, v] : statistics) {
    stats.push_back({{"name", n}, {"value", std::isfinite(v) ? nlohmann::json(v) : nlohmann::json()}});
  }
  nlohmann::json th = nlohmann::json::array();
  for (const auto& t : thresholds) {
    th.push_back({{"statistic", t.statistic}, {"op", t.op}, {"bound", t.bound}});
  }
  nlohmann::json ch = nlohmann::json::array();
  for (const auto& [n, ok] : checks) ch.push_back({{"name", n}, {"pass", ok}});
  return {{"experiment_id", experiment_id},
          {"n_replications", n_replications},
          {"n_failures", n_failures},
          {"statistics", stats},
          {"thresholds", th},
          {"checks", ch},
          {"verdict", pass ? "pass" : "fail"},
          {"runtime_s", runtime_s},
          {"config_hash", config_hash},
          {"config", config}};
}

bool non_increasing(const std::vector<double>& xs, bool strict) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (strict ? !(xs[i] < xs[i - 1]) : !(xs[i] <= xs[i - 1])) return false;
  }
  return true;
}

bool non_decreasing(const std::vector<double>& xs, bool strict) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (strict ? !(xs[i] > xs[i - 1]) : !(xs[i] >= xs[i - 1])) return false;
  }
  return true;
}

}  // namespace levyenv::verify
