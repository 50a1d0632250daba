#include "levyenv/config.hpp"

#include <cstdio>
#include <sstream>

#include "levyenv/errors.hpp"

namespace levyenv {

using nlohmann::json;

void RunConfig::validate() const {
  law.validate();
  if (!(grid.step_h > 0.0)) throw ParameterError("step_h must be positive");
  if (grid.initial_window < 1) throw ParameterError("initial_window must be at least 1");
  if (grid.max_points < 3) throw ParameterError("max_points must be at least 3");
  const auto& e = experiment;
  if (!(e.r > 0.0 && e.r < 1.0)) throw ParameterError("r must lie in (0, 1)");
  if (!(e.delta > 0.0)) throw ParameterError("delta must be positive");
  if (e.n_replications < 1) throw ParameterError("n_replications must be at least 1");
  for (std::size_t i = 0; i < e.c_values.size(); ++i) {
    if (!(e.c_values[i] > 0.0)) throw ParameterError("c_values must be positive");
    if (i > 0 && !(e.c_values[i] > e.c_values[i - 1])) {
      throw ParameterError("c_values must be increasing");
    }
  }
  if (!(e.horizon > 0.0)) throw ParameterError("horizon must be positive");
  if (!(e.epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (!(e.dt >= 0.0)) throw ParameterError("dt must be >= 0");
  if (!(e.scaling_c > 0.0)) throw ParameterError("scaling_c must be positive");
  if (!(e.valley_c > 0.0)) throw ParameterError("valley_c must be positive");
  if (!(e.significance > 0.0 && e.significance < 1.0)) {
    throw ParameterError("significance must lie in (0, 1)");
  }
  if (e.engine != "chain" && e.engine != "brox") throw ParameterError("engine is chain or brox");
  if (threads < 1) throw ParameterError("threads must be at least 1");
  if (!mutation.empty() && mutation != "conductance") {
    throw ParameterError("unknown mutation '" + mutation + "'");
  }
}

StableLawSpec RunConfig::seeded_law() const {
  StableLawSpec s = law;
  s.seed = master_seed;
  return s;
}

json to_json(const RunConfig& c) {
  const auto& e = c.experiment;
  return {{"law",
           {{"alpha", c.law.alpha},
            {"beta", c.law.beta},
            {"scale_k", c.law.scale_k},
            {"drift_d", c.law.drift_d}}},
          {"grid",
           {{"step_h", c.grid.step_h},
            {"initial_window", c.grid.initial_window},
            {"max_points", c.grid.max_points}}},
          {"experiment",
           {{"id", e.id},
            {"c_values", e.c_values},
            {"probes", e.probes},
            {"delta", e.delta},
            {"r", e.r},
            {"n_replications", e.n_replications},
            {"horizon", e.horizon},
            {"epsilon", e.epsilon},
            {"dt", e.dt},
            {"scaling_c", e.scaling_c},
            {"valley_c", e.valley_c},
            {"significance", e.significance},
            {"engine", e.engine}}},
          {"output_dir", c.output_dir},
          {"master_seed", c.master_seed},
          {"threads", c.threads},
          {"mutation", c.mutation}};
}

namespace {

template <class T>
void read_into(const json& obj, const char* key, T& field) {
  if (!obj.contains(key)) return;
  try {
    obj.at(key).get_to(field);
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("config key '") + key + "': " + ex.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const char* where) {
  if (!obj.is_object()) throw ParameterError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) throw ParameterError("unknown config key '" + key + "' in " + where);
  }
}

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  reject_unknown(j, {"law", "grid", "experiment", "output_dir", "master_seed", "threads", "mutation"},
                 "config");
  if (j.contains("law")) {
    const auto& l = j.at("law");
    reject_unknown(l, {"alpha", "beta", "scale_k", "drift_d"}, "law");
    // A law given without scale_k takes the alpha-dependent default.
    double alpha = c.law.alpha;
    read_into(l, "alpha", alpha);
    c.law = StableLawSpec::with_defaults(alpha);
    read_into(l, "beta", c.law.beta);
    read_into(l, "scale_k", c.law.scale_k);
    read_into(l, "drift_d", c.law.drift_d);
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown(g, {"step_h", "initial_window", "max_points"}, "grid");
    read_into(g, "step_h", c.grid.step_h);
    read_into(g, "initial_window", c.grid.initial_window);
    read_into(g, "max_points", c.grid.max_points);
  }
  if (j.contains("experiment")) {
    const auto& e = j.at("experiment");
    reject_unknown(e,
                   {"id", "c_values", "probes", "delta", "r", "n_replications", "horizon", "epsilon",
                    "dt", "scaling_c", "valley_c", "significance", "engine"},
                   "experiment");
    auto& x = c.experiment;
    read_into(e, "id", x.id);
    read_into(e, "c_values", x.c_values);
    read_into(e, "probes", x.probes);
    read_into(e, "delta", x.delta);
    read_into(e, "r", x.r);
    read_into(e, "n_replications", x.n_replications);
    read_into(e, "horizon", x.horizon);
    read_into(e, "epsilon", x.epsilon);
    read_into(e, "dt", x.dt);
    read_into(e, "scaling_c", x.scaling_c);
    read_into(e, "valley_c", x.valley_c);
    read_into(e, "significance", x.significance);
    read_into(e, "engine", x.engine);
  }
  read_into(j, "output_dir", c.output_dir);
  read_into(j, "master_seed", c.master_seed);
  read_into(j, "threads", c.threads);
  read_into(j, "mutation", c.mutation);
  return c;
}

namespace {

json parse_flat_value(const std::string& text) {
  json parsed = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_discarded()) return parsed;
  if (text.find(',') != std::string::npos) {
    json arr = json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) arr.push_back(parse_flat_value(item));
    return arr;
  }
  return text;
}

}  // namespace

RunConfig apply_overrides(const RunConfig& base, const std::map<std::string, std::string>& flat) {
  json j = to_json(base);
  for (const auto& [raw_key, text] : flat) {
    const std::string key = raw_key == "seed" ? "master_seed" : raw_key;
    json value = parse_flat_value(text);
    if ((key == "c_values" || key == "probes") && value.is_number()) value = json::array({value});
    if (key == "id" || key == "engine" || key == "output_dir" || key == "mutation") value = text;
    bool placed = false;
    for (const char* section : {"law", "grid", "experiment"}) {
      if (j[section].contains(key)) {
        j[section][key] = value;
        placed = true;
      }
    }
    if (!placed) {
      if (!j.contains(key) || j[key].is_object()) {
        throw ParameterError("unknown override --" + raw_key);
      }
      j[key] = value;
    }
  }
  RunConfig out = config_from_json(j);
  // A changed alpha without an explicit scale moves k to the new default.
  if (flat.contains("alpha") && !flat.contains("scale_k") &&
      base.law.scale_k == StableLawSpec::with_defaults(base.law.alpha).scale_k) {
    out.law.scale_k = StableLawSpec::with_defaults(out.law.alpha).scale_k;
  }
  return out;
}

std::string canonical_json(const RunConfig& config) {
  json j = to_json(config);
  // Where results go and how many workers compute them do not change them.
  j.erase("output_dir");
  j.erase("threads");
  return j.dump();  // nlohmann objects are key-sorted
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_json(config)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace levyenv
