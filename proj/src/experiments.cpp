// Monte Carlo experiments behind `verify <id>` and the acceptance suite.

#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "levyenv/conditioned.hpp"
#include "levyenv/diffusion.hpp"
#include "levyenv/io.hpp"
#include "levyenv/path_core.hpp"
#include "levyenv/rng.hpp"
#include "levyenv/valley.hpp"
#include "levyenv/verify.hpp"

namespace levyenv::verify {
namespace {

using Clock = std::chrono::steady_clock;
namespace tag = stream_tag;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Base stream of replication i. Bases are hashed so that the substreams
// derived from different replications and lanes never meet.
std::uint64_t rep_base(std::uint64_t lane, std::size_t i) noexcept {
  return splitmix64((lane << 40) ^ static_cast<std::uint64_t>(i));
}

McReport begin(const RunConfig& cfg, const std::string& id) {
  cfg.validate();
  McReport r;
  r.experiment_id = id;
  r.n_replications = cfg.experiment.n_replications;
  r.config = to_json(cfg);
  r.config_hash = config_hash(cfg);
  return r;
}

void finish(McReport& r, Clock::time_point started) {
  r.finalize();
  r.runtime_s = std::chrono::duration<double>(Clock::now() - started).count();
}

ChainOptions chain_options(const RunConfig& cfg) {
  ChainOptions o;
  if (cfg.mutation == "conductance") o.conductance_scale = 2.0;
  return o;
}

double brox_dt(const RunConfig& cfg) {
  return cfg.experiment.dt > 0.0 ? cfg.experiment.dt : cfg.grid.step_h * cfg.grid.step_h / 4.0;
}

template <class T>
std::vector<T> present(const std::vector<std::optional<T>>& xs) {
  std::vector<T> out;
  for (const auto& x : xs) {
    if (x) out.push_back(*x);
  }
  return out;
}

template <class T, class F>
std::vector<double> column(const std::vector<T>& rows, F&& f) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(f(r));
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::size_t index_of_time(double t, double h) {
  return static_cast<std::size_t>(std::llround(t / h));
}

// Value at time t of a path started at 0, frozen at its last stored point.
double stopped_at(const GridPath& p, double t) {
  return p[std::min(index_of_time(t, p.step_h()), p.size() - 1)];
}

void record_ks(McReport& r, const std::string& suffix, const stats::KsResult& ks) {
  r.set("ks_distance" + suffix, ks.distance);
  r.set("p_value" + suffix, ks.p_value);
}

std::string c_label(double c) { return "_c" + io::format_double(c); }

// Runs f, turning a window overflow into an aborted replication.
template <class F>
auto abort_on_window(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const WindowTooSmall& e) {
    throw ReplicationAborted(e.what());
  }
}

}  // namespace

McReport occupation_experiment(const RunConfig& cfg) {
  const auto started = Clock::now();
  McReport r = begin(cfg, "occupation");
  const double h = cfg.grid.step_h;
  const double alphas[] = {1.0, 1.5, 2.0};
  struct Row {
    double alpha, chain, t, rel_error, steps;
  };
  const auto rows = run_replications<Row>(r.n_replications, cfg.threads, [&](std::size_t i) {
    StableLawSpec law = StableLawSpec::with_defaults(alphas[i % 3]);
    law.seed = cfg.master_seed;
    const bool chain = (i / 3) % 2 == 0;
    const std::uint64_t base = rep_base(1, i);
    // Horizons up to e^8 for the chain; the Brox engine pays per Brownian
    // step, so its horizons stop at e^4.
    const double u = to_unit(random_pair_at(law.seed, substream(base, tag::kAuxiliary), 0).first);
    const double t = std::exp(u * (chain ? 8.0 : 4.0));
    const std::uint64_t stream = substream(base, tag::kDiffusion);
    DiffusionRun run =
        chain ? chain_simulate_growing(
                    [&](std::size_t n) { return sample_two_sided(law, n, h, base); },
                    cfg.grid.initial_window, t, law.seed, stream, cfg.grid.max_points,
                    chain_options(cfg))
                    .first
              : brox_simulate_growing(
                    [&](std::size_t n) { return sample_two_sided(law, n, h, base); },
                    cfg.grid.initial_window, t, brox_dt(cfg), h, law.seed, stream,
                    cfg.grid.max_points, 50'000'000)
                    .first;
    const LocalTimeProfile prof = local_time_profile(run);
    const auto v = prof.grid.values();
    const double mass = prof.grid.step_h() * std::accumulate(v.begin(), v.end(), 0.0);
    return Row{law.alpha, chain ? 1.0 : 0.0, t, std::abs(mass - t) / t,
               static_cast<double>(run.steps)};
  });
  const auto ok = present(rows);
  r.n_failures = count_failures(rows);
  double worst = 0.0;
  for (const auto& row : ok) worst = std::max(worst, row.rel_error);
  r.set("max_relative_error", worst);
  r.set("runs_completed", static_cast<double>(ok.size()));
  r.require("max_relative_error", "<", 1e-2);
  r.observables.columns = {"alpha", "chain", "t", "relative_error", "steps"};
  for (const auto& row : ok) {
    r.observables.rows.push_back({row.alpha, row.chain, row.t, row.rel_error, row.steps});
  }
  finish(r, started);
  return r;
}

McReport brownian_experiment(const RunConfig& cfg) {
  const auto started = Clock::now();
  McReport r = begin(cfg, "brownian");
  const double h = cfg.grid.step_h;
  const double t = cfg.experiment.horizon;
  const auto n_each = static_cast<std::size_t>(std::ceil((8.0 * std::sqrt(t) + 1.0) / h));
  const TwoSidedPath flat(GridPath(std::vector<double>(n_each + 1, 0.0), h),
                          GridPath(std::vector<double>(n_each + 1, 0.0), h));
  const ChainOptions opts = chain_options(cfg);
  const std::uint64_t seed = cfg.master_seed;
  const auto chain = run_replications<double>(r.n_replications, cfg.threads, [&](std::size_t i) {
    return abort_on_window([&] {
      return chain_simulate(flat, t, seed, substream(rep_base(1, i), tag::kDiffusion), opts)
          .final_position;
    });
  });
  const auto brox = run_replications<double>(r.n_replications, cfg.threads, [&](std::size_t i) {
    return abort_on_window([&] {
      return brox_simulate(flat, t, brox_dt(cfg), h, seed,
                           substream(rep_base(2, i), tag::kDiffusion))
          .final_position;
    });
  });
  r.n_replications *= 2;
  r.n_failures = count_failures(chain) + count_failures(brox);
  const auto cdf = [&](double x) { return normal_cdf(x / std::sqrt(t)); };
  const auto xc = present(chain);
  const auto xb = present(brox);
  record_ks(r, "_chain", stats::ks_one_sample(xc, cdf));
  record_ks(r, "_brox", stats::ks_one_sample(xb, cdf));
  r.set("variance_chain", stats::variance(xc));
  r.set("variance_brox", stats::variance(xb));
  r.require("p_value_chain", ">", cfg.experiment.significance);
  r.require("p_value_brox", ">", cfg.experiment.significance);
  r.observables.columns = {"replication", "chain_x", "brox_x"};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    r.observables.rows.push_back(
        {static_cast<double>(i), chain[i].value_or(NAN), brox[i].value_or(NAN)});
  }
  finish(r, started);
  return r;
}

McReport bessel_experiment(const RunConfig& cfg) {
  const auto started = Clock::now();
  McReport r = begin(cfg, "bessel");
  const StableLawSpec law = cfg.seeded_law();
  if (!law.gaussian()) throw ParameterError("the Bessel(3) anchor needs alpha = 2");
  const double h = cfg.grid.step_h;
  const double t = cfg.experiment.horizon;
  const auto direct = run_replications<double>(r.n_replications, cfg.threads, [&](std::size_t i) {
    return sample_conditioned(law, LawTag::Up, t, h, rep_base(1, i)).path.eval(t);
  });
  const auto tanaka = run_replications<double>(r.n_replications, cfg.threads, [&](std::size_t i) {
    return sample_tanaka_of(law, LawTag::Up, t, h, rep_base(2, i), cfg.grid.max_points)
        .path.eval(t);
  });
  r.n_failures = count_failures(direct) + count_failures(tanaka);
  r.set("failures_tanaka", static_cast<double>(count_failures(tanaka)));
  r.n_replications *= 2;
  const auto cdf = [&](double x) { return bessel3_cdf(x, law.scale_k, t); };
  record_ks(r, "_direct", stats::ks_one_sample(present(direct), cdf));
  record_ks(r, "_tanaka", stats::ks_one_sample(present(tanaka), cdf));
  r.require("p_value_direct", ">", cfg.experiment.significance);
  r.require("p_value_tanaka", ">", cfg.experiment.significance);
  r.observables.columns = {"replication", "direct", "tanaka"};
  for (std::size_t i = 0; i < direct.size(); ++i) {
    r.observables.rows.push_back(
        {static_cast<double>(i), direct[i].value_or(NAN), tanaka[i].value_or(NAN)});
  }
  finish(r, started);
  return r;
}

McReport transforms_experiment(const RunConfig& cfg) {
  const auto started = Clock::now();
  McReport r = begin(cfg, "transforms");
  const StableLawSpec law = cfg.seeded_law();
  if (law.gaussian()) throw ParameterError("transform comparison needs alpha < 2");
  const auto& times = cfg.experiment.probes;
  if (times.empty()) throw ParameterError("probes must list the comparison times");
  const double horizon = *std::max_element(times.begin(), times.end());
  const double h = cfg.grid.step_h;
  const auto sample = [&](Construction how, std::uint64_t lane) {
    return run_replications<std::vector<double>>(
        r.n_replications, cfg.threads, [&](std::size_t i) {
          const auto p = sample_conditioned(law, LawTag::Up, horizon, h, rep_base(lane, i),
                                            {how, cfg.grid.max_points});
          std::vector<double> at;
          for (const double t : times) at.push_back(p.path.eval(t));
          return at;
        });
  };
  const auto bertoin = sample(Construction::Bertoin, 1);
  const auto tanaka = sample(Construction::TanakaR, 2);
  r.n_replications *= 2;
  r.n_failures = count_failures(bertoin) + count_failures(tanaka);
  r.set("failures_bertoin", static_cast<double>(count_failures(bertoin)));
  r.set("failures_tanaka", static_cast<double>(count_failures(tanaka)));
  const auto b = present(bertoin);
  const auto k = present(tanaka);
  const double level = cfg.experiment.significance / static_cast<double>(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    const std::string suffix = "_t" + io::format_double(times[j]);
    record_ks(r, suffix, stats::ks_two_sample(column(b, [&](const auto& v) { return v[j]; }),
                                              column(k, [&](const auto& v) { return v[j]; })));
    r.require("p_value" + suffix, ">", level);
  }
  r.observables.columns = {"construction", "replication"};
  for (const double t : times) r.observables.columns.push_back("t" + io::format_double(t));
  for (int which = 0; which < 2; ++which) {
    const auto& src = which == 0 ? bertoin : tanaka;
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (!src[i]) continue;
      std::vector<double> row{static_cast<double>(which), static_cast<double>(i)};
      row.insert(row.end(), src[i]->begin(), src[i]->end());
      r.observables.rows.push_back(std::move(row));
    }
  }
  finish(r, started);
  return r;
}

namespace {

struct Slopes {
  double pre;
  double post;
  double stopped;  ///< 1 when post reached height c before the probe time
};

// Pre- and post-infimum slopes of the one-sided environment at height c,
// read at time t (frozen at the end of each slope).
Slopes valley_slopes(const StableLawSpec& law, double c, double t, double h, std::size_t n0,
                     std::uint64_t base, std::size_t max_points) {
  for (std::size_t n = n0; n + 1 <= max_points; n *= 2) {
    const GridPath v = sample_one_sided(law, n, h, substream(base, tag::kEnvPlus));
    try {
      const auto [pre, post] = pre_post_split(v, c);
      const bool stopped = index_of_time(t, h) >= post.size() - 1;
      return {stopped_at(pre, t), stopped_at(post, t), stopped ? 1.0 : 0.0};
    } catch (const WindowTooSmall&) {
    }
  }
  throw ReplicationAborted("height-c statistics not found within the window cap");
}

struct UpStopped {
  double value;         ///< at min(t, first passage above c)
  double passage_value; ///< the path at its first passage above c
};

// Conditioned path stopped at its first passage above c, read at time t.
UpStopped up_stopped(const StableLawSpec& law, double c, double t, double h, std::uint64_t base,
                     std::size_t max_points) {
  for (double horizon = t; horizon / h <= static_cast<double>(max_points); horizon *= 2.0) {
    const auto p = sample_conditioned(law, LawTag::Up, horizon, h, base,
                                      {Construction::TanakaR, max_points});
    try {
      const auto tau = static_cast<std::size_t>(first_passage_above(p.path, c));
      return {p.path[std::min(tau, index_of_time(t, h))], p.path[tau]};
    } catch (const WindowTooSmall&) {
    }
  }
  throw ReplicationAborted("conditioned path did not pass c within the window cap");
}

bool needs_f1_weights(const StableLawSpec& law) {
  return !law.gaussian() && law.beta > -1.0;
}

// Weights x^{-alpha rho} of the first-passage values scaled to height 1,
// normalized to empirical mean 1.
std::vector<double> f1_weights(const StableLawSpec& law, double rho, double c,
                               const std::vector<UpStopped>& ups) {
  if (!needs_f1_weights(law)) return std::vector<double>(ups.size(), 1.0);
  std::vector<GridPath> calibration;
  calibration.reserve(ups.size());
  for (const auto& u : ups) calibration.emplace_back(std::vector<double>{0.0, u.passage_value / c}, 1.0);
  const F1Normalizer norm(law.alpha, rho, calibration);
  return column(ups, [&](const UpStopped& u) { return norm.weight_of_value(u.passage_value / c); });
}

double rho_for(const StableLawSpec& law) {
  if (law.gaussian() || law.beta == 0.0) return 0.5;
  return rho_estimate(law, 200'000, substream(rep_base(9, 0), tag::kCalibration));
}

}  // namespace

McReport post_infimum_experiment(const RunConfig& cfg) {
  const auto started = Clock::now();
  McReport r = begin(cfg, "post_infimum");
  const StableLawSpec law = cfg.seeded_law();
  if (cfg.experiment.c_values.empty()) throw ParameterError("c_values must hold the valley height");
  const double c = cfg.experiment.c_values.front();
  const double t = cfg.experiment.horizon;
  const double h = cfg.grid.step_h;
  const auto slopes = run_replications<Slopes>(r.n_replications, cfg.threads, [&](std::size_t i) {
    return valley_slopes(law, c, t, h, cfg.grid.initial_window, rep_base(1, i), cfg.grid.max_points);
  });
  const auto ups = run_replications<UpStopped>(r.n_replications, cfg.threads, [&](std::size_t i) {
    return up_stopped(law, c, t, h, rep_base(2, i), cfg.grid.max_points);
  });
  r.n_replications *= 2;
  r.n_failures = count_failures(slopes) + count_failures(ups);
  const auto s = present(slopes);
  const auto u = present(ups);
  const double rho = rho_for(law);
  const auto w = f1_weights(law, rho, c, u);
  const auto post = column(s, [](const Slopes& x) { return x.post; });
  const auto up = column(u, [](const UpStopped& x) { return x.value; });
  const auto ks = needs_f1_weights(law) ? stats::ks_weighted(post, up, w)
                                        : stats::ks_two_sample(post, up);
  record_ks(r, "", ks);
  r.set("n_eff", ks.n_eff);
  r.set("rho", rho);
  r.set("weighted", needs_f1_weights(law) ? 1.0 : 0.0);
  r.set("weight_mean", stats::mean(w));
  r.set("fraction_stopped", stats::mean(column(s, [](const Slopes& x) { return x.stopped; })));
  r.require("p_value", ">", cfg.experiment.significance);
  r.observables.columns = {"sample", "post", "up", "weight"};
  for (std::size_t i = 0; i < std::max(s.size(), u.size()); ++i) {
    r.observables.rows.push_back({static_cast<double>(i), i < s.size() ? s[i].post : NAN,
                                  i < u.size() ? u[i].value : NAN, i < w.size() ? w[i] : NAN});
  }
  finish(r, started);
  return r;
}

McReport independence_experiment(const RunConfig& cfg) {
  const auto started = Clock::now();
  McReport r = begin(cfg, "independence");
  const StableLawSpec law = cfg.seeded_law();
  if (cfg.experiment.c_values.empty()) throw ParameterError("c_values must hold the valley height");
  const double c = cfg.experiment.c_values.front();
  const double t = cfg.experiment.horizon;
  const auto slopes = run_replications<Slopes>(r.n_replications, cfg.threads, [&](std::size_t i) {
    return valley_slopes(law, c, t, cfg.grid.step_h, cfg.grid.initial_window, rep_base(1, i),
                         cfg.grid.max_points);
  });
  r.n_failures = count_failures(slopes);
  const auto s = present(slopes);
  const double corr = stats::pearson(column(s, [](const Slopes& x) { return x.pre; }),
                                     column(s, [](const Slopes& x) { return x.post; }));
  r.set("correlation", corr);
  r.set("abs_correlation", std::abs(corr));
  r.set("bound", 3.0 / std::sqrt(static_cast<double>(s.size())));
  r.require("abs_correlation", "<", r.get("bound"));
  r.observables.columns = {"sample", "pre", "post"};
  for (std::size_t i = 0; i < s.size(); ++i) {
    r.observables.rows.push_back({static_cast<double>(i), s[i].pre, s[i].post});
  }
  finish(r, started);
  return r;
}

McReport regeneration_experiment(const RunConfig& cfg) {
  const auto started = Clock::now();
  McReport r = begin(cfg, "regeneration");
  const StableLawSpec law = cfg.seeded_law();
  const double h = cfg.grid.step_h;
  const double t = cfg.experiment.horizon;
  const double eps = cfg.experiment.epsilon;
  const std::size_t nt = index_of_time(t, h);
  struct Row {
    double after_sigma, sigma;
  };
  const auto regen = run_replications<Row>(r.n_replications, cfg.threads, [&](std::size_t i) {
    for (double horizon = 4.0 * t; horizon / h <= static_cast<double>(cfg.grid.max_points);
         horizon *= 2.0) {
      const auto p = sample_conditioned(law, LawTag::Up, horizon, h, rep_base(1, i),
                                        {Construction::TanakaR, cfg.grid.max_points});
      try {
        const auto sigma = static_cast<std::size_t>(sigma_epsilon(p, eps));
        if (sigma + nt < p.path.size()) {
          return Row{p.path[sigma + nt] - p.path[sigma], static_cast<double>(sigma) * h};
        }
      } catch (const WindowTooSmall&) {
      }
    }
    throw ReplicationAborted("sigma_eps + t not reached within the window cap");
  });
  const auto fresh = run_replications<double>(r.n_replications, cfg.threads, [&](std::size_t i) {
    return sample_conditioned(law, LawTag::Up, t, h, rep_base(2, i),
                              {Construction::TanakaR, cfg.grid.max_points})
        .path.eval(t);
  });
  r.n_replications *= 2;
  r.n_failures = count_failures(regen) + count_failures(fresh);
  const auto g = present(regen);
  record_ks(r, "", stats::ks_two_sample(column(g, [](const Row& x) { return x.after_sigma; }),
                                        present(fresh)));
  r.set("mean_sigma", stats::mean(column(g, [](const Row& x) { return x.sigma; })));
  r.require("p_value", ">", cfg.experiment.significance);
  r.observables.columns = {"replication", "after_sigma", "sigma", "fresh"};
  for (std::size_t i = 0; i < regen.size(); ++i) {
    r.observables.rows.push_back({static_cast<double>(i),
                                  regen[i] ? regen[i]->after_sigma : NAN,
                                  regen[i] ? regen[i]->sigma : NAN, fresh[i].value_or(NAN)});
  }
  finish(r, started);
  return r;
}

McReport scaling_experiment(const RunConfig& cfg) {
  const auto started = Clock::now();
  McReport r = begin(cfg, "scaling");
  const StableLawSpec law = cfg.seeded_law();
  const double h = cfg.grid.step_h;
  const double c = cfg.experiment.scaling_c;
  const double t = cfg.experiment.horizon;
  const double ca = std::pow(c, law.alpha);
  const ChainOptions opts = chain_options(cfg);
  struct Row {
    double x_direct, lstar_direct, x_scaled, lstar_scaled, x_wrong;
  };
  const auto rows = run_replications<Row>(r.n_replications, cfg.threads, [&](std::size_t i) {
    const std::uint64_t base = rep_base(1, i);
    const auto env_v = [&](std::size_t n) { return sample_two_sided(law, n, h, base); };
    // c V^c (x) = V(c^alpha x): the same values on a grid finer by c^alpha.
    const auto env_cvc = [&](std::size_t n) {
      const TwoSidedPath v = env_v(n);
      const auto vals = v.flat().values();
      return TwoSidedPath(GridPath(std::vector<double>(vals.begin(), vals.end()), h / ca,
                                   v.flat().origin_index()));
    };
    // Left side: c^-alpha X(V, c^{2 alpha} t). Right side: X(c V^c, t).
    const auto lhs = chain_simulate_growing(env_v, cfg.grid.initial_window, ca * ca * t, law.seed,
                                            substream(base, tag::kDiffusion), cfg.grid.max_points,
                                            opts)
                         .first;
    const auto rhs = chain_simulate_growing(env_cvc, cfg.grid.initial_window, t, law.seed,
                                            substream(base, tag::kAuxiliary), cfg.grid.max_points,
                                            opts)
                         .first;
    return Row{lhs.final_position / ca, local_time_profile(lhs).sup() / ca, rhs.final_position,
               local_time_profile(rhs).sup(),
               lhs.final_position / std::pow(c, law.alpha - 0.5)};
  });
  r.n_failures = count_failures(rows);
  const auto ok = present(rows);
  const auto col = [&](double Row::*m) { return column(ok, [m](const Row& x) { return x.*m; }); };
  record_ks(r, "_position", stats::ks_two_sample(col(&Row::x_direct), col(&Row::x_scaled)));
  record_ks(r, "_lstar", stats::ks_two_sample(col(&Row::lstar_direct), col(&Row::lstar_scaled)));
  record_ks(r, "_wrong_exponent", stats::ks_two_sample(col(&Row::x_wrong), col(&Row::x_scaled)));
  const double level = cfg.experiment.significance / 2.0;
  r.require("p_value_position", ">", level);
  r.require("p_value_lstar", ">", level);
  r.require("p_value_wrong_exponent", "<", cfg.experiment.significance);
  r.observables.columns = {"x_direct", "lstar_direct", "x_scaled", "lstar_scaled", "x_wrong"};
  for (const auto& row : ok) {
    r.observables.rows.push_back(
        {row.x_direct, row.lstar_direct, row.x_scaled, row.lstar_scaled, row.x_wrong});
  }
  finish(r, started);
  return r;
}

McReport valley_law_experiment(const RunConfig& cfg) {
  const auto started = Clock::now();
  McReport r = begin(cfg, "valley_law");
  const StableLawSpec law = cfg.seeded_law();
  const auto& cs = cfg.experiment.c_values;
  if (cs.empty()) throw ParameterError("c_values must not be empty");
  const double t = cfg.experiment.horizon;
  const double h = cfg.grid.step_h;
  const std::size_t n = r.n_replications;
  const double rho = rho_for(law);
  const auto hat = run_replications<double>(n, cfg.threads, [&](std::size_t i) {
    return sample_conditioned(law, LawTag::UpHat, t, h, rep_base(3, i),
                              {Construction::TanakaR, cfg.grid.max_points})
        .path.eval(t);
  });
  std::size_t failures = count_failures(hat);
  const auto hat_ok = present(hat);
  std::vector<double> pre_distance;
  for (const double c : cs) {
    const auto slopes = run_replications<Slopes>(n, cfg.threads, [&](std::size_t i) {
      return valley_slopes(law, c, t, h, cfg.grid.initial_window, rep_base(1, i),
                           cfg.grid.max_points);
    });
    const auto ups = run_replications<UpStopped>(n, cfg.threads, [&](std::size_t i) {
      return up_stopped(law, c, t, h, rep_base(2, i), cfg.grid.max_points);
    });
    failures += count_failures(slopes) + count_failures(ups);
    const auto s = present(slopes);
    const auto u = present(ups);
    const auto pre = column(s, [](const Slopes& x) { return x.pre; });
    const auto post = column(s, [](const Slopes& x) { return x.post; });
    const auto up = column(u, [](const UpStopped& x) { return x.value; });
    const auto pre_ks = stats::ks_two_sample(pre, hat_ok);
    const auto post_ks = needs_f1_weights(law) ? stats::ks_weighted(post, up, f1_weights(law, rho, c, u))
                                               : stats::ks_two_sample(post, up);
    record_ks(r, "_pre" + c_label(c), pre_ks);
    record_ks(r, "_post" + c_label(c), post_ks);
    r.require("p_value_post" + c_label(c), ">",
              cfg.experiment.significance / static_cast<double>(cs.size()));
    r.set("abs_correlation" + c_label(c), std::abs(stats::pearson(pre, post)));
    pre_distance.push_back(pre_ks.distance);
  }
  r.n_replications = n * (1 + 2 * cs.size());
  r.n_failures = failures;
  r.check("pre_distance_non_increasing", non_increasing(pre_distance));
  r.set("correlation_bound", 3.0 / std::sqrt(static_cast<double>(n)));
  r.require("abs_correlation" + c_label(cs.back()), "<", r.get("correlation_bound"));
  finish(r, started);
  return r;
}

McReport laplace_experiment(const RunConfig& cfg) {
  const auto started = Clock::now();
  McReport r = begin(cfg, "laplace");
  const StableLawSpec law = cfg.seeded_law();
  const auto& cs = cfg.experiment.c_values;
  if (cs.empty()) throw ParameterError("c_values must not be empty");
  const double h = cfg.grid.step_h;
  const double valley_c = cfg.experiment.valley_c;
  const double eta = cfg.experiment.epsilon;
  const auto ratios =
      run_replications<std::vector<double>>(r.n_replications, cfg.threads, [&](std::size_t i) {
        const auto vs = sample_valley(law, valley_c, h, cfg.grid.initial_window, rep_base(1, i),
                                      cfg.grid.max_points);
        const TwoSidedPath env = recenter(vs.env, vs.valley.m);
        const auto [a, b] = abort_on_window([&] { return ab_window(env, valley_c, cfg.experiment.r); });
        // Inner window: the smallest interval around 0 outside of which the
        // path stays at or above eta on [a, b).
        GridPoint hi = b;
        while (hi - 1 > 0 && env.at(hi - 1) >= eta) --hi;
        GridPoint lo = a;
        while (lo < 0 && env.at(lo) >= eta) ++lo;
        std::vector<double> out;
        for (const double c : cs) {
          out.push_back(laplace_ratio(env, c, static_cast<double>(a) * h, static_cast<double>(b) * h,
                                      static_cast<double>(lo) * h, static_cast<double>(hi) * h));
        }
        return out;
      });
  r.n_failures = count_failures(ratios);
  const auto ok = present(ratios);
  bool monotone = true;
  double worst = 0.0;
  for (const auto& row : ok) {
    monotone = monotone && non_increasing(row);
    worst = std::max(worst, std::abs(row.back() - 1.0));
  }
  r.check("ratio_non_increasing_in_c", monotone);
  r.set("max_final_excess", worst);
  r.require("max_final_excess", "<", 1e-6);
  r.observables.columns = {"replication"};
  for (const double c : cs) r.observables.columns.push_back("ratio" + c_label(c));
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!ratios[i]) continue;
    std::vector<double> row{static_cast<double>(i)};
    row.insert(row.end(), ratios[i]->begin(), ratios[i]->end());
    r.observables.rows.push_back(std::move(row));
  }
  finish(r, started);
  return r;
}

namespace {

struct LocalizationSample {
  double distance_to_bottom;
  double lstar;  ///< L*(t) / t
  std::vector<double> probe;  ///< L(t, m + x) / t per probe offset
};

struct LimitSample {
  double lstar;  ///< 1 / integral exp(-V~)
  std::vector<double> probe;  ///< exp(-V~(x)) / integral exp(-V~)
};

struct LocalizationData {
  std::vector<std::vector<std::optional<LocalizationSample>>> by_c;
  std::vector<std::optional<LimitSample>> limit;
};

LocalizationData localization_data(const RunConfig& cfg, std::size_t n,
                                   const std::vector<double>& probes) {
  const StableLawSpec law = cfg.seeded_law();
  const double h = cfg.grid.step_h;
  const ChainOptions opts = chain_options(cfg);
  const auto& cs = cfg.experiment.c_values;
  const auto probe_point = [&](double x) { return static_cast<GridPoint>(std::llround(x / h)); };
  LocalizationData data;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    const double c = cs[j];
    const double t = std::exp(c);
    // Valleys of height c span about c^alpha; start there to save doublings.
    const std::size_t n0 = std::max(cfg.grid.initial_window,
                                    static_cast<std::size_t>(std::ceil(2.0 * std::pow(c, law.alpha) / h)));
    data.by_c.push_back(run_replications<LocalizationSample>(n, cfg.threads, [&](std::size_t i) {
      const std::uint64_t base = rep_base(1, i);
      const auto vs = sample_valley(law, c, h, n0, base, cfg.grid.max_points);
      const auto [run, env] = chain_simulate_growing(
          [&](std::size_t m) { return sample_two_sided(law, m, h, base); }, vs.n_steps_each, t,
          law.seed, substream(substream(base, tag::kDiffusion), static_cast<std::uint32_t>(j)),
          cfg.grid.max_points, opts);
      const LocalTimeProfile prof = local_time_profile(run);
      const GridPoint m = vs.valley.m;
      LocalizationSample s{static_cast<double>(std::abs(favorite_point(prof) - m)) * h,
                           prof.sup() / t, {}};
      for (const double x : probes) {
        const GridPoint k = m + probe_point(x);
        s.probe.push_back(prof.grid.contains(k) ? prof.grid.at(k) / t : 0.0);
      }
      return s;
    }));
  }
  data.limit = run_replications<LimitSample>(n, cfg.threads, [&](std::size_t i) {
    const TildeEnvironment tilde = sample_tilde(law, 16.0, h, rep_base(2, i));
    LimitSample s{std::exp(-tilde.log_integral), {}};
    for (const double x : probes) {
      const GridPoint k = probe_point(x);
      s.probe.push_back(tilde.two_sided.contains(k)
                            ? std::exp(-tilde.two_sided.at(k) - tilde.log_integral)
                            : 0.0);
    }
    return s;
  });
  return data;
}

template <class T>
std::vector<T> first_present(const std::vector<std::optional<T>>& xs, std::size_t n,
                             std::size_t& failures) {
  std::vector<T> out;
  for (std::size_t i = 0; i < n && i < xs.size(); ++i) {
    if (xs[i]) {
      out.push_back(*xs[i]);
    } else {
      ++failures;
    }
  }
  return out;
}

void localization_observables(McReport& r, const LocalizationData& d, std::size_t n,
                              const std::vector<double>& cs, const std::vector<double>& probes) {
  r.observables.columns = {"env", "c", "is_limit", "distance_to_bottom", "lstar"};
  for (const double x : probes) r.observables.columns.push_back("probe_" + io::format_double(x));
  const auto push = [&](double env, double c, double is_limit, double dist, double lstar,
                        const std::vector<double>& pr) {
    std::vector<double> row{env, c, is_limit, dist, lstar};
    row.insert(row.end(), pr.begin(), pr.end());
    r.observables.rows.push_back(std::move(row));
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (const auto& s = d.by_c[j][i]) push(static_cast<double>(i), cs[j], 0, s->distance_to_bottom, s->lstar, s->probe);
    }
    if (const auto& s = d.limit[i]) push(static_cast<double>(i), NAN, 1, NAN, s->lstar, s->probe);
  }
}

}  // namespace

std::vector<McReport> localization_experiments(const RunConfig& fav_cfg, const RunConfig& sup_cfg,
                                               const RunConfig& loi_cfg) {
  const auto started = Clock::now();
  McReport fav = begin(fav_cfg, "cvptfav");
  McReport sup = begin(sup_cfg, "limsup");
  McReport loi = begin(loi_cfg, "cvloi");
  for (const RunConfig* other : {&sup_cfg, &loi_cfg}) {
    const auto x = to_json(*other);
    const auto y = to_json(fav_cfg);
    const bool same = x["law"] == y["law"] && x["grid"] == y["grid"] &&
                      x["experiment"]["c_values"] == y["experiment"]["c_values"] &&
                      other->master_seed == fav_cfg.master_seed && other->mutation == fav_cfg.mutation;
    if (!same) throw ParameterError("localization experiments must share law, grid, c values and seed");
  }
  const auto& cs = fav_cfg.experiment.c_values;
  if (cs.empty()) throw ParameterError("c_values must not be empty");
  const auto& probes = loi_cfg.experiment.probes;
  const std::size_t n = std::max({fav.n_replications, sup.n_replications, loi.n_replications});
  const LocalizationData d = localization_data(fav_cfg, n, probes);

  // Favorite point coverage.
  {
    std::vector<double> coverage;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      const auto s = first_present(d.by_c[j], fav.n_replications, fav.n_failures);
      double hits = 0.0;
      for (const auto& x : s) hits += x.distance_to_bottom <= fav_cfg.experiment.delta + 1e-9 ? 1.0 : 0.0;
      coverage.push_back(s.empty() ? 0.0 : hits / static_cast<double>(s.size()));
      fav.set("coverage" + c_label(cs[j]), coverage.back());
    }
    fav.check("coverage_non_decreasing", non_decreasing(coverage));
    fav.require("coverage" + c_label(cs.back()), ">=", 0.8);
    fav.n_replications *= cs.size();
    localization_observables(fav, d, fav_cfg.experiment.n_replications, cs, probes);
  }
  // Sup of the local time against its limit.
  {
    std::size_t f = 0;
    const auto lim = first_present(d.limit, sup.n_replications, f);
    const auto lim_l = column(lim, [](const LimitSample& x) { return x.lstar; });
    std::vector<double> dist;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      const auto s = first_present(d.by_c[j], sup.n_replications, f);
      const auto ks = stats::ks_two_sample(column(s, [](const LocalizationSample& x) { return x.lstar; }), lim_l);
      record_ks(sup, c_label(cs[j]), ks);
      dist.push_back(ks.distance);
    }
    sup.check("distance_strictly_decreasing", non_increasing(dist, /*strict=*/true));
    sup.require("p_value" + c_label(cs.back()), ">", sup_cfg.experiment.significance);
    sup.n_failures = f;
    sup.n_replications *= cs.size() + 1;
    localization_observables(sup, d, sup_cfg.experiment.n_replications, cs, probes);
  }
  // Normalized local time at probe offsets.
  {
    std::size_t f = 0;
    const auto lim = first_present(d.limit, loi.n_replications, f);
    std::vector<std::vector<LocalizationSample>> per_c;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      per_c.push_back(first_present(d.by_c[j], loi.n_replications, f));
    }
    const double level = loi_cfg.experiment.significance / static_cast<double>(std::max<std::size_t>(probes.size(), 1));
    bool trend = true;
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const auto lim_k = column(lim, [k](const LimitSample& x) { return x.probe[k]; });
      std::vector<double> dist;
      const std::string px = "_x" + io::format_double(probes[k]);
      for (std::size_t j = 0; j < cs.size(); ++j) {
        const auto ks = stats::ks_two_sample(
            column(per_c[j], [k](const LocalizationSample& x) { return x.probe[k]; }), lim_k);
        record_ks(loi, px + c_label(cs[j]), ks);
        dist.push_back(ks.distance);
      }
      trend = trend && non_increasing(dist);
      loi.require("p_value" + px + c_label(cs.back()), ">", level);
    }
    loi.check("distances_non_increasing", trend);
    loi.n_failures = f;
    loi.n_replications *= cs.size() + 1;
    localization_observables(loi, d, loi_cfg.experiment.n_replications, cs, probes);
  }
  std::vector<McReport> out{std::move(fav), std::move(sup), std::move(loi)};
  for (auto& r : out) finish(r, started);
  return out;
}

McReport theorem_cvptfav_experiment(const RunConfig& cfg) {
  return localization_experiments(cfg, cfg, cfg)[0];
}

McReport corollary_limsup_experiment(const RunConfig& cfg) {
  return localization_experiments(cfg, cfg, cfg)[1];
}

McReport theorem_cvloi_experiment(const RunConfig& cfg) {
  return localization_experiments(cfg, cfg, cfg)[2];
}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{
      "occupation", "brownian",  "bessel",  "transforms", "post_infimum", "independence",
      "regeneration", "scaling", "cvptfav", "limsup",     "cvloi",        "laplace",
      "valley_law"};
  return ids;
}

McReport run_experiment(const RunConfig& cfg) {
  const std::string& id = cfg.experiment.id;
  if (id == "occupation") return occupation_experiment(cfg);
  if (id == "brownian") return brownian_experiment(cfg);
  if (id == "bessel") return bessel_experiment(cfg);
  if (id == "transforms") return transforms_experiment(cfg);
  if (id == "post_infimum") return post_infimum_experiment(cfg);
  if (id == "independence") return independence_experiment(cfg);
  if (id == "regeneration") return regeneration_experiment(cfg);
  if (id == "scaling") return scaling_experiment(cfg);
  if (id == "cvptfav") return theorem_cvptfav_experiment(cfg);
  if (id == "limsup") return corollary_limsup_experiment(cfg);
  if (id == "cvloi") return theorem_cvloi_experiment(cfg);
  if (id == "laplace") return laplace_experiment(cfg);
  if (id == "valley_law") return valley_law_experiment(cfg);
  throw ParameterError("unknown experiment id '" + id + "'");
}

RunConfig acceptance_preset(const std::string& id) {
  RunConfig c;
  c.experiment.id = id;
  c.master_seed = 20240601;
  auto& e = c.experiment;
  const auto law = [&](double alpha, double beta = 0.0) {
    c.law = StableLawSpec::with_defaults(alpha, beta);
  };
  if (id == "occupation") {
    c.grid.step_h = 0.1;
    e.n_replications = 100;
  } else if (id == "brownian") {
    c.grid.step_h = 0.01;
    e.n_replications = 10'000;
  } else if (id == "bessel") {
    law(2.0);
    c.grid.step_h = 0.001;
    c.grid.max_points = std::size_t{1} << 22;
    e.n_replications = 10'000;
  } else if (id == "transforms") {
    law(1.5);
    c.grid.step_h = 0.01;
    c.grid.max_points = std::size_t{1} << 22;
    e.probes = {0.5, 1.0, 2.0};
    e.n_replications = 10'000;
  } else if (id == "post_infimum" || id == "independence") {
    law(1.5, -1.0);
    c.grid.step_h = 0.01;
    c.grid.max_points = std::size_t{1} << 22;
    e.c_values = {3.0};
    e.n_replications = 5'000;
  } else if (id == "post_infimum_weighted") {
    law(1.5, -0.5);
    e.id = "post_infimum";
    c.grid.step_h = 0.01;
    c.grid.max_points = std::size_t{1} << 22;
    e.c_values = {1.0};
    e.horizon = 0.25;
    e.n_replications = 5'000;
  } else if (id == "regeneration") {
    law(1.5);
    c.grid.step_h = 0.01;
    c.grid.max_points = std::size_t{1} << 22;
    e.epsilon = 0.5;
    e.n_replications = 5'000;
  } else if (id == "scaling") {
    law(2.0);
    c.grid.step_h = 0.1;
    e.scaling_c = 2.0;
    e.n_replications = 1'000;
  } else if (id == "cvptfav" || id == "limsup" || id == "cvloi") {
    law(2.0);
    c.grid.step_h = 0.1;
    e.c_values = {4.0, 8.0, 12.0};
    e.delta = 1.0;
    e.probes = {-1.0, 0.0, 1.0};
    e.n_replications = id == "cvptfav" ? 200 : 300;
  } else if (id == "laplace") {
    law(2.0);
    c.grid.step_h = 0.01;
    e.valley_c = 3.0;
    e.epsilon = 0.5;
    e.c_values = {10, 20, 40, 60, 80, 100};
    e.n_replications = 20;
  } else if (id == "valley_law") {
    law(2.0);
    c.grid.step_h = 0.01;
    e.c_values = {2.0, 4.0, 8.0};
    e.n_replications = 2'000;
  } else {
    throw ParameterError("no acceptance preset for '" + id + "'");
  }
  return c;
}

}  // namespace levyenv::verify
