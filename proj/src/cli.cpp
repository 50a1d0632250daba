#include "levyenv/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "levyenv/conditioned.hpp"
#include "levyenv/diffusion.hpp"
#include "levyenv/errors.hpp"
#include "levyenv/io.hpp"
#include "levyenv/path_core.hpp"
#include "levyenv/rng.hpp"
#include "levyenv/valley.hpp"
#include "levyenv/verify.hpp"

namespace levyenv::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& rest) {
  std::map<std::string, std::string> flat;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const std::string& arg = rest[i];
    if (arg.rfind("--", 0) != 0 || arg.size() == 2) {
      throw ParameterError("unexpected argument '" + arg + "'");
    }
    std::string key = arg.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.resize(eq);
    } else {
      if (i + 1 >= rest.size()) throw ParameterError("missing value for --" + key);
      value = rest[++i];
    }
    for (char& ch : key) ch = ch == '-' ? '_' : ch;
    flat[key] = value;
  }
  return flat;
}

RunConfig load_config(const std::string& path, const RunConfig& fallback) {
  if (path.empty()) return fallback;
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParameterError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

fs::path prepare_output(const RunConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

template <class Writer>
void write_with(const fs::path& path, Writer&& w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  w(out);
}

TwoSidedPath env_for(const RunConfig& cfg, std::size_t n) {
  return sample_two_sided(cfg.seeded_law(), n, cfg.grid.step_h, 0);
}

DiffusionRun simulate_with(const RunConfig& cfg) {
  const StableLawSpec law = cfg.seeded_law();
  const double h = cfg.grid.step_h;
  const auto factory = [&](std::size_t n) { return env_for(cfg, n); };
  const std::uint64_t stream = substream(0, stream_tag::kDiffusion);
  if (cfg.experiment.engine == "brox") {
    const double dt = cfg.experiment.dt > 0.0 ? cfg.experiment.dt : h * h / 4.0;
    return brox_simulate_growing(factory, cfg.grid.initial_window, cfg.experiment.horizon, dt, h,
                                 law.seed, stream, cfg.grid.max_points)
        .first;
  }
  ChainOptions opts;
  if (cfg.mutation == "conductance") opts.conductance_scale = 2.0;
  return chain_simulate_growing(factory, cfg.grid.initial_window, cfg.experiment.horizon,
                                law.seed, stream, cfg.grid.max_points, opts)
      .first;
}

json run_json(const DiffusionRun& run) {
  json j = io::to_json(run);
  j["final_position"] = run.final_position;
  return j;
}

int command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  if (name == "selftest") return selftest(cfg, err) ? kOk : kExperimentFailed;
  const fs::path dir = prepare_output(cfg);
  if (name == "sample-env") {
    const TwoSidedPath env = env_for(cfg, cfg.grid.initial_window);
    write_with(dir / "env.csv", [&](std::ostream& os) { io::write_path_csv(os, env.flat()); });
    log_line(err, "info", "wrote " + (dir / "env.csv").string());
  } else if (name == "find-valley") {
    if (cfg.experiment.c_values.empty()) throw ParameterError("find-valley needs c_values");
    const double c = cfg.experiment.c_values.front();
    const auto vs = sample_valley(cfg.seeded_law(), c, cfg.grid.step_h, cfg.grid.initial_window, 0,
                                  cfg.grid.max_points);
    write_file(dir / "valley.json", io::to_json(vs.valley).dump(2) + "\n");
    write_with(dir / "env.csv", [&](std::ostream& os) { io::write_path_csv(os, vs.env.flat()); });
    out << io::to_json(vs.valley).dump() << '\n';
  } else if (name == "simulate" || name == "local-time") {
    const DiffusionRun run = simulate_with(cfg);
    write_file(dir / "run.json", run_json(run).dump(2) + "\n");
    if (name == "local-time") {
      write_with(dir / "local_time.csv",
                 [&](std::ostream& os) { io::write_local_time_csv(os, local_time_profile(run)); });
    }
    out << run_json(run).dump() << '\n';
  } else if (name == "limit-sample") {
    const auto tilde = sample_tilde(cfg.seeded_law(), cfg.experiment.horizon, cfg.grid.step_h, 0);
    write_with(dir / "tilde.csv", [&](std::ostream& os) { io::write_path_csv(os, tilde.two_sided.flat()); });
    const auto& f = tilde.two_sided.flat();
    const auto profile = normalize_profile(tilde.two_sided, f.x_of(f.min_point()), f.x_of(f.max_point() + 1));
    write_with(dir / "profile.csv", [&](std::ostream& os) { io::write_profile_csv(os, profile); });
    const json summary{{"log_integral", tilde.log_integral},
                       {"inverse_integral", std::exp(-tilde.log_integral)},
                       {"half_window", tilde.half_window}};
    write_file(dir / "limit.json", summary.dump(2) + "\n");
    out << summary.dump() << '\n';
  } else if (name == "verify") {
    const verify::McReport report = verify::run_experiment(cfg);
    write_file(dir / "report.json", report.to_json().dump(2) + "\n");
    write_with(dir / "observables.csv", [&](std::ostream& os) { report.observables.write_csv(os); });
    log_line(err, report.pass ? "info" : "warn",
             "experiment " + report.experiment_id + " verdict=" + (report.pass ? "pass" : "fail"));
    if (report.get("abort_rate") > 0.05) return kReplicationAborted;
    return report.pass ? kOk : kExperimentFailed;
  }
  return kOk;
}

}  // namespace

void log_line(std::ostream& err, const std::string& level, const std::string& msg) {
  std::string escaped;
  for (const char ch : msg) {
    if (ch == '"' || ch == '\\') escaped += '\\';
    escaped += ch == '\n' ? ' ' : ch;
  }
  err << "level=" << level << " msg=\"" << escaped << "\"\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diffusions in stable Levy environments: sampling, simulation and checks",
               "levyenv"};
  app.require_subcommand(1);
  std::string config_path;
  std::string experiment_id;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"sample-env", "Sample a two-sided environment and write env.csv"},
      {"find-valley", "Locate the standard valley of height c_values[0]"},
      {"simulate", "Run the diffusion up to the horizon and write run.json"},
      {"local-time", "Run the diffusion and write its local time profile"},
      {"limit-sample", "Sample the two-sided limit environment"},
      {"verify", "Run a Monte Carlo experiment and write report.json"},
      {"selftest", "Run the built-in example suite"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->allow_extras();
    if (std::string(name) == "verify") {
      sub->add_option("experiment_id", experiment_id, "Experiment to run")->required();
    }
  }
  std::vector<std::string> argv_store{"levyenv"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    log_line(err, "error", e.what());
    return kParameterError;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    RunConfig fallback;
    if (name == "verify") {
      // Without a config file an experiment runs with its acceptance preset.
      try {
        fallback = verify::acceptance_preset(experiment_id);
      } catch (const ParameterError&) {
        fallback.experiment.id = experiment_id;
      }
    }
    RunConfig cfg = apply_overrides(load_config(config_path, fallback), parse_overrides(sub->remaining()));
    if (name == "verify") cfg.experiment.id = experiment_id;
    return command(name, cfg, out, err);
  } catch (const ParameterError& e) {
    log_line(err, "error", e.what());
    return kParameterError;
  } catch (const RangeError& e) {
    log_line(err, "error", e.what());
    return kParameterError;
  } catch (const ReplicationAborted& e) {
    log_line(err, "error", e.what());
    return kReplicationAborted;
  } catch (const WindowTooSmall& e) {
    log_line(err, "error", e.what());
    return kReplicationAborted;
  } catch (const std::exception& e) {
    log_line(err, "error", e.what());
    return kInternalError;
  }
}

}  // namespace levyenv::cli
