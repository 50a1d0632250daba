// Built-in example suite behind `levyenv selftest`: closed-form examples of
// every module plus the fast statistical oracles (at most 10^4 draws each).

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "levyenv/cli.hpp"
#include "levyenv/conditioned.hpp"
#include "levyenv/diffusion.hpp"
#include "levyenv/errors.hpp"
#include "levyenv/path_core.hpp"
#include "levyenv/rng.hpp"
#include "levyenv/stats.hpp"
#include "levyenv/valley.hpp"
#include "levyenv/verify.hpp"

namespace levyenv::cli {
namespace {

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw CheckFailed(what);
}

void near(double got, double want, double tol, const std::string& what) {
  if (!(std::abs(got - want) <= tol)) {
    std::ostringstream os;
    os << what << ": got " << got << ", want " << want << " +- " << tol;
    throw CheckFailed(os.str());
  }
}

template <class E, class F>
void throws(F&& f, const std::string& what) {
  try {
    f();
  } catch (const E&) {
    return;
  }
  throw CheckFailed(what + ": expected an exception");
}

void same(std::span<const double> got, std::vector<double> want, const std::string& what) {
  expect(std::vector<double>(got.begin(), got.end()) == want, what);
}

GridPath g(std::vector<double> v, double h = 1.0, std::size_t origin = 0) {
  return GridPath(std::move(v), h, origin);
}

// |x| (times slope) on [-half, half] with step h.
TwoSidedPath abs_path(double half, double h, double slope = 1.0) {
  const auto n = static_cast<std::size_t>(std::llround(half / h));
  std::vector<double> side(n + 1);
  for (std::size_t i = 0; i <= n; ++i) side[i] = slope * static_cast<double>(i) * h;
  return TwoSidedPath(g(side, h), g(side, h));
}

struct Check {
  const char* module;
  const char* op;
  std::function<void()> body;
};

std::vector<Check> checks(const RunConfig& cfg) {
  const std::uint64_t seed = cfg.master_seed;
  ChainOptions chain_opts;
  if (cfg.mutation == "conductance") chain_opts.conductance_scale = 2.0;
  return {
      {"stable_env", "validate",
       [] {
         StableLawSpec s;
         s.alpha = 2.5;
         throws<ParameterError>([&] { s.validate(); }, "alpha 2.5");
         s = StableLawSpec{};
         s.scale_k = 0.0;
         throws<ParameterError>([&] { s.validate(); }, "k = 0");
       }},
      {"stable_env", "sample_one_sided",
       [seed] {
         auto s = StableLawSpec::with_defaults(1.5);
         s.seed = seed;
         const auto a = sample_one_sided(s, 100, 0.1, 7);
         const auto b = sample_one_sided(s, 100, 0.1, 7);
         expect(a == b, "same stream twice gives identical paths");
         expect(a[0] == 0.0 && a.size() == 101, "path starts at 0 with n + 1 values");
       }},
      {"stable_env", "sample_one_sided gaussian",
       [seed] {
         auto s = StableLawSpec::with_defaults(2.0);
         s.seed = seed;
         const auto p = sample_one_sided(s, 10'000, 1.0, 3);
         std::vector<double> inc;
         for (std::size_t i = 1; i < p.size(); ++i) inc.push_back(p[i] - p[i - 1]);
         const auto ks = stats::ks_one_sample(inc, [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); });
         expect(ks.p_value > 0.001, "alpha 2, k 0.5 increments are standard normal");
       }},
      {"stable_env", "sample_two_sided",
       [seed] {
         auto s = StableLawSpec::with_defaults(2.0);
         s.seed = seed;
         const auto env = sample_two_sided(s, 10, 0.5, 1);
         expect(env.eval(0.0) == 0.0, "V(0) = 0");
       }},
      {"stable_env", "charfn_check",
       [seed] {
         auto s = StableLawSpec::with_defaults(2.0);
         s.seed = seed;
         const auto p = sample_one_sided(s, 2000, 1.0, 5);
         std::vector<double> inc;
         for (std::size_t i = 1; i < p.size(); ++i) inc.push_back(p[i] - p[i - 1]);
         const std::vector<double> lambdas{0.0, 1.0};
         const auto pts = charfn_check(inc, s, 1.0, lambdas);
         near(pts[0].empirical, 1.0, 1e-12, "lambda 0 empirical");
         near(pts[0].theoretical, 1.0, 1e-12, "lambda 0 theoretical");
         near(pts[1].theoretical, std::exp(-0.5), 1e-12, "Gaussian modulus at lambda 1");
       }},
      {"stable_env", "rho_estimate",
       [seed] {
         for (const double alpha : {2.0, 1.5}) {
           auto s = StableLawSpec::with_defaults(alpha);
           s.seed = seed;
           near(rho_estimate(s, 10'000, 11), 0.5, 3.0 / 100.0, "symmetric rho");
         }
       }},
      {"path_core", "running extrema",
       [] {
         const auto p = g({0, 1, -1, 2});
         same(running_infimum(p).values(), {0, 0, -1, -1}, "running_infimum");
         same(running_supremum(p).values(), {0, 1, 1, 2}, "running_supremum");
         same(future_infimum(p).values(), {-1, -1, -1, 2}, "future_infimum");
         same(running_infimum(g({0, 1, 2})).values(), {0, 0, 0}, "monotone running_infimum");
         same(running_supremum(g({0, -1, -2})).values(), {0, 0, 0}, "monotone running_supremum");
         same(future_infimum(g({0, 1, 2})).values(), {0, 1, 2}, "monotone future_infimum");
       }},
      {"path_core", "recenter and rescale",
       [] {
         const auto env = abs_path(2.0, 0.5);
         expect(recenter(env, 0).flat() == env.flat(), "x0 = 0 is the identity");
         expect(recenter(env, 3).eval(0.0) == 0.0, "recentred path is 0 at 0");
         expect(rescale(env, 1.0, 1.5).flat() == env.flat(), "c = 1 is the identity");
         const TwoSidedPath zero(g({0, 0, 0}, 0.5), g({0, 0, 0}, 0.5));
         const auto z = rescale(zero, 3.0, 2.0);
         for (const double v : z.flat().values()) expect(v == 0.0, "rescaled zero path");
       }},
      {"path_core", "exp_integral",
       [] {
         const TwoSidedPath zero(g(std::vector<double>(9, 0.0), 0.25), g(std::vector<double>(9, 0.0), 0.25));
         near(exp_integral(zero, 0.0, 1.0, -1), 0.0, 1e-12, "integral of 1 over [0,1)");
         const TwoSidedPath five(g(std::vector<double>(9, 5.0), 0.25), g(std::vector<double>(9, 5.0), 0.25));
         // The origin stores 0 by construction, so integrate away from it.
         near(exp_integral(five, 0.25, 2.25, 1), 5.0 + std::log(2.0), 1e-12, "constant integrand");
       }},
      {"path_core", "normalize_profile",
       [] {
         const TwoSidedPath zero(g(std::vector<double>(5, 0.0), 0.25), g(std::vector<double>(5, 0.0), 0.25));
         const auto w = normalize_profile(zero, 0.0, 1.0);
         for (std::size_t k = 0; k < w.log_weights.size(); ++k) near(w.density(k), 1.0, 1e-12, "uniform density");
         const TwoSidedPath well(g({0, 1e6, 1e6}, 0.5), g({0, 1e6, 1e6}, 0.5));
         const auto d = normalize_profile(well, -1.0, 1.0);
         for (std::size_t k = 0; k < d.log_weights.size(); ++k) {
           near(d.density(k) * 0.5, d.x_of(k) == 0.0 ? 1.0 : 0.0, 1e-12, "mass at the origin");
         }
       }},
      {"path_core", "laplace_ratio",
       [] {
         const auto env = abs_path(2.0, 0.1);
         const double r = laplace_ratio(env, 100.0, -2.0, 2.0, -1.0, 1.0);
         expect(r >= 1.0 && r <= 1.0 + 1e-40, "ratio at c = 100 within [1, 1 + 1e-40]");
         near(laplace_ratio(env, 0.0, -2.0, 2.0, -1.0, 1.0), 2.0, 1e-12, "c = 0 gives the length ratio");
       }},
      {"valley", "find_c_extrema",
       [] {
         const TwoSidedPath inc(g({0, 1, 2, 3, 4, 5}), g({0, -1, -2, -3, -4, -5}));
         expect(find_c_extrema(inc, 0.5).empty(), "increasing path has no c-extrema");
         const auto ex = find_c_extrema(abs_path(5.0, 1.0), 1.0);
         expect(ex.size() == 1 && ex[0].point == 0 && ex[0].kind == ExtremumKind::Min,
                "|x| has a single c-minimum at 0");
       }},
      {"valley", "standard_valley",
       [] {
         const auto v = standard_valley(abs_path(5.0, 1.0), 1.0);
         expect(v.m == 0 && v.side == ValleySide::Plus, "|x| valley bottom at 0, tie to PLUS");
       }},
      {"valley", "one_sided_stats",
       [] {
         throws<WindowTooSmall>([] { one_sided_stats(g({0, -1, -2, -3}), 1.0); }, "falling ramp never rises");
         expect(one_sided_stats(g({0, 1, 2, 3}), 1.0).tau_c == 1, "rising ramp reaches c at once");
         const auto s = one_sided_stats(g({0, -1, 1, -2, 3}), 2.0);
         expect(s.tau_c == 2 && s.m_c == 1 && s.J_c == 1.0, "hand example [0,-1,1,-2,3]");
         const auto t = one_sided_stats(g({0, -2, -4, -2, 0}), 2.0);
         expect(t.tau_c == 3 && t.m_c == 2 && t.J_c == 0.0, "hand example [0,-2,-4,-2,0]");
       }},
      {"valley", "ab_window",
       [] {
         const double h = 0.1;
         const auto [a, b] = ab_window(abs_path(3.0, h), 2.0, 0.5);
         expect(a == -11 && b == 11, "|x|, c = 2, r = 0.5 gives -(1 + h), 1 + h");
         const auto [a2, b2] = ab_window(abs_path(3.0, h, 2.0), 2.0, 0.5);
         expect(a2 == -6 && b2 == 6, "2|x| gives -(0.5 + h), 0.5 + h");
       }},
      {"conditioned", "time_above_zero",
       [] {
         const auto pos = time_above_zero(g({0, 1, 2, 3}));
         same(pos.a_plus.values(), {0, 1, 2, 3}, "all-positive path: ramp");
         const auto neg = time_above_zero(g({0, -1, -2}));
         same(neg.a_plus.values(), {0, 0, 0}, "all-negative path: zero");
         expect(neg.inverse.empty(), "all-negative path: empty map");
       }},
      {"conditioned", "transforms",
       [] {
         const auto p = g({0, 1, 0.5, 2, 3});
         expect(bertoin_transform(p).path == p, "positive path is left unchanged");
         const auto inc = g({0, 1, 2, 3});
         expect(tanaka_transform(inc).path == inc, "increasing path is left unchanged");
         same(tanaka_transform(g({0, 1, 0, 2, 1, 3})).path.values(), {0, 1, 3, 2, 4, 3},
              "excursion reversal example");
       }},
      {"conditioned", "sample_conditioned",
       [seed] {
         for (const double alpha : {2.0, 1.5}) {
           auto s = StableLawSpec::with_defaults(alpha);
           s.seed = seed;
           const auto p = sample_conditioned(s, LawTag::Up, 1.0, 0.01, 3);
           for (std::size_t i = 1; i < p.path.size(); ++i) expect(p.path[i] > 0.0, "positivity");
         }
       }},
      {"conditioned", "pre_post_split",
       [] {
         const auto [pre, post] = pre_post_split(g({0, -1, -2, -1, 0, 1}), 2.0);
         same(pre.values(), {0, 1, 2}, "left arm");
         same(post.values(), {0, 1, 2}, "right arm");
       }},
      {"conditioned", "sigma_epsilon",
       [] {
         throws<WindowTooSmall>([] { sigma_epsilon({g({0, 1, 2, 3, 4})}, 0.5); }, "monotone path");
         expect(sigma_epsilon({g({0, 1, 3, 2, 1, 2, 4})}, 1.0) == 4, "one excursion of height 2");
       }},
      {"conditioned", "f1 weights",
       [] {
         const std::vector<GridPath> calib{g({0, 0.5, 1.0}), g({0, 1.0, 2.0})};
         const F1Normalizer exact(1.5, 2.0 / 3.0, std::vector<GridPath>{g({0, 1.0})});
         near(exact.weight_of_value(1.0), 1.0, 1e-12, "no overshoot gives weight 1");
         const F1Normalizer n(1.5, 0.6, calib);
         near(0.5 * (n.weight(calib[0]) + n.weight(calib[1])), 1.0, 1e-12, "weights have mean 1");
       }},
      {"conditioned", "sample_tilde",
       [seed] {
         auto s = StableLawSpec::with_defaults(2.0);
         s.seed = seed;
         for (std::uint64_t i = 0; i < 5; ++i) {
           const double inv = std::exp(-sample_tilde(s, 8.0, 0.05, i).log_integral);
           expect(std::isfinite(inv) && inv > 0.0, "1 / integral is positive and finite");
         }
       }},
      {"diffusion", "scale_function",
       [] {
         const TwoSidedPath zero(g(std::vector<double>(11, 0.0), 0.1), g(std::vector<double>(11, 0.0), 0.1));
         near(scale_function(zero, 0.5).value(), 0.5, 1e-12, "S(x) = x on a flat environment");
         const TwoSidedPath two(g({0, 2, 2, 2, 2}, 0.25), g({0, 2, 2, 2, 2}, 0.25));
         near(scale_function(two, 1.0).value(), 0.25 + 0.75 * std::exp(2.0), 1e-12, "piecewise constant");
       }},
      {"diffusion", "chain_simulate brownian",
       [seed, chain_opts] {
         const double h = 0.05;
         const std::size_t n = 200;
         const TwoSidedPath zero(g(std::vector<double>(n + 1, 0.0), h), g(std::vector<double>(n + 1, 0.0), h));
         std::vector<double> x;
         for (std::uint64_t i = 0; i < 2000; ++i) {
           x.push_back(chain_simulate(zero, 1.0, seed, substream(i, stream_tag::kDiffusion), chain_opts).final_position);
         }
         const auto ks = stats::ks_one_sample(x, [](double v) { return 0.5 * std::erfc(-v / std::numbers::sqrt2); });
         expect(ks.p_value > 0.001, "chain X(1) on a flat environment is standard normal");
       }},
      {"diffusion", "occupation identity",
       [seed] {
         auto s = StableLawSpec::with_defaults(1.5);
         s.seed = seed;
         const auto env = sample_two_sided(s, 400, 0.1, 2);
         for (const Engine e : {Engine::Chain, Engine::Brox}) {
           const auto run = e == Engine::Chain ? chain_simulate(env, 3.0, seed, 9)
                                               : brox_simulate(env, 3.0, 0.0025, 0.1, seed, 9);
           const auto prof = local_time_profile(run);
           double mass = 0.0;
           for (const double v : prof.grid.values()) mass += v * prof.grid.step_h();
           near(mass, 3.0, 3e-2, "h sum L = t");
         }
       }},
      {"diffusion", "favorite_point",
       [] {
         const LocalTimeProfile single{g({0, 1, 3, 1, 0}, 0.5, 2), 1.0};
         expect(favorite_point(single) == 0, "single peak");
         const LocalTimeProfile twin{g({0, 2, 0, 2, 0}, 0.5, 2), 1.0};
         expect(favorite_point(twin) == -1, "leftmost of two equal peaks");
       }},
      {"diffusion", "single well localization",
       [seed] {
         const auto env = abs_path(6.0, 0.1, 2.0);
         const auto run = chain_simulate(env, 200.0, seed, 4);
         expect(std::abs(static_cast<double>(favorite_point(local_time_profile(run))) * 0.1) <= 1.0,
                "favorite point near the well bottom");
       }},
      {"verify", "ks_two_sample",
       [] {
         std::vector<double> a(50);
         for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<double>(i);
         const auto same_ks = stats::ks_two_sample(a, a);
         expect(same_ks.distance == 0.0 && same_ks.p_value == 1.0, "identical samples");
         std::vector<double> b = a;
         for (double& v : b) v += 1000.0;
         expect(stats::ks_two_sample(a, b).distance == 1.0, "disjoint supports");
       }},
      {"verify", "parameter contracts",
       [] {
         RunConfig c;
         c.experiment.n_replications = 0;
         throws<ParameterError>([&] { c.validate(); }, "n_env = 0");
         c = RunConfig{};
         c.experiment.delta = 0.0;
         throws<ParameterError>([&] { c.validate(); }, "delta = 0");
         c = RunConfig{};
         c.experiment.r = 1.0;
         throws<ParameterError>([&] { c.validate(); }, "r = 1");
       }},
      {"cli", "config round trip",
       [] {
         RunConfig c = verify::acceptance_preset("cvloi");
         c.law.beta = 0.25;
         c.grid.step_h = 0.1 + 1e-17;
         expect(canonical_json(config_from_json(to_json(c))) == canonical_json(c), "lossless JSON");
       }},
  };
}

}  // namespace

bool selftest(const RunConfig& config, std::ostream& err) {
  std::size_t passed = 0;
  for (const auto& c : checks(config)) {
    try {
      c.body();
    } catch (const std::exception& e) {
      log_line(err, "error",
               std::string("selftest failed in ") + c.module + "/" + c.op + ": " + e.what());
      return false;
    }
    ++passed;
  }
  log_line(err, "info", "selftest passed " + std::to_string(passed) + " checks");
  return true;
}

}  // namespace levyenv::cli
