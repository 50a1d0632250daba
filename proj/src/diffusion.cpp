#include "levyenv/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "levyenv/errors.hpp"
#include "levyenv/kernels.hpp"
#include "levyenv/path_core.hpp"
#include "levyenv/rng.hpp"

namespace levyenv {

std::string_view to_string(Engine e) noexcept { return e == Engine::Brox ? "BROX" : "CHAIN"; }

double Occupation::total() const noexcept {
  double s = 0.0;
  for (const double t : time) s += t;
  return s;
}

void Occupation::add(GridPoint i, double dt) {
  if (time.empty()) {
    first_point = i;
    time.assign(1, 0.0);
  }
  if (i < first_point) {
    const std::size_t extra =
        std::max(static_cast<std::size_t>(first_point - i), time.size());
    time.insert(time.begin(), extra, 0.0);
    first_point -= static_cast<GridPoint>(extra);
  }
  const auto k = static_cast<std::size_t>(i - first_point);
  if (k >= time.size()) time.resize(std::max(k + 1, 2 * time.size()), 0.0);
  time[k] += dt;
}

double SignedLog::value() const noexcept { return sign * std::exp(log_abs); }

SignedLog scale_function(const TwoSidedPath& env, double x) {
  if (x == 0.0) return {0, -std::numeric_limits<double>::infinity()};
  if (x > 0.0) return {1, exp_integral(env, 0.0, x, +1)};
  return {-1, exp_integral(env, x, 0.0, +1)};
}

namespace {

// Per-site jump probabilities and mean holding times. With
// a = -(V_{i+1} - V_i)/2 and b = -(V_{i-1} - V_i)/2 the total rate is
// (e^a + e^b) / (2 h^2); both quantities are written through e^{-max(a,b)}
// and e^{-|a-b|} so that no intermediate overflows.
struct ChainTables {
  std::vector<double> p_up;
  std::vector<double> mean_hold;
};

ChainTables chain_tables(std::span<const double> v, double h, double conductance_scale) {
  const std::size_t n = v.size();
  std::vector<double> neg_max(n, 0.0);
  std::vector<double> neg_gap(n, 0.0);
  std::vector<bool> up_dominant(n, true);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = -(v[i + 1] - v[i]) / 2.0;
    const double b = -(v[i - 1] - v[i]) / 2.0;
    neg_max[i] = -std::max(a, b);
    neg_gap[i] = -std::abs(a - b);
    up_dominant[i] = a >= b;
  }
  ChainTables t{std::vector<double>(n), std::vector<double>(n)};
  std::vector<double> e_gap(n);
  kernels::exp_map(neg_gap, 1.0, 0.0, e_gap);
  kernels::exp_map(neg_max, 1.0, -std::log(2.0 * h * h / conductance_scale), t.mean_hold);
  for (std::size_t i = 0; i < n; ++i) {
    const double denom = 1.0 + e_gap[i];
    t.mean_hold[i] /= denom;
    t.p_up[i] = up_dominant[i] ? 1.0 / denom : e_gap[i] / denom;
  }
  return t;
}

}  // namespace

DiffusionRun chain_simulate(const TwoSidedPath& env, double horizon_t, std::uint64_t seed,
                            std::uint64_t stream, const ChainOptions& options) {
  if (!(horizon_t > 0.0)) throw ParameterError("horizon must be positive");
  if (!(options.conductance_scale > 0.0)) throw ParameterError("conductance scale must be > 0");
  const auto v = env.flat().values();
  const double h = env.step_h();
  if (v.size() < 3) throw WindowTooSmall("chain needs at least three sites");
  const ChainTables tables = chain_tables(v, h, options.conductance_scale);

  std::vector<double> occ(v.size(), 0.0);
  std::size_t site = env.flat().origin_index();
  const std::size_t last = v.size() - 1;
  double clock = 0.0;
  std::uint64_t k = 0;
  while (true) {
    if (site == 0 || site == last) throw WindowTooSmall("chain reached the window edge");
    const auto bits = random_pair_at(seed, stream, k++);
    const double hold = -tables.mean_hold[site] * std::log(to_open_unit(bits.first));
    if (clock + hold >= horizon_t) {
      occ[site] += horizon_t - clock;
      break;
    }
    occ[site] += hold;
    clock += hold;
    site = to_unit(bits.second) < tables.p_up[site] ? site + 1 : site - 1;
  }
  DiffusionRun run;
  run.engine = Engine::Chain;
  run.horizon_t = horizon_t;
  run.occupation = Occupation{h, env.min_point(), std::move(occ)};
  run.final_position = env.flat().x_of(static_cast<GridPoint>(site) + env.min_point());
  run.stream = stream;
  run.steps = k - 1;
  return run;
}

namespace {

// Grid values of S on [min, max + 1]: S_i = h sum_{0 <= j < i} e^{V_j} for
// i > 0 and -h sum_{i <= j < 0} e^{V_j} for i < 0.
struct ScaleGrid {
  std::vector<double> s;  // s[k] = S at grid point min + k, k = 0..n
  std::vector<double> slope;
  // Cells first..last-1 have finite S at both ends. Past a barrier above
  // ~709 S overflows; Brownian motion never reaches such values, so the
  // usable window simply ends there.
  std::size_t first = 0;
  std::size_t last = 0;
};

ScaleGrid scale_grid(const TwoSidedPath& env) {
  const auto v = env.flat().values();
  const std::size_t n = v.size();
  const std::size_t origin = env.flat().origin_index();
  const double h = env.step_h();
  ScaleGrid g{std::vector<double>(n + 1, 0.0), std::vector<double>(n)};
  kernels::exp_map(v, 1.0, 0.0, g.slope);
  for (std::size_t k = origin; k < n; ++k) g.s[k + 1] = g.s[k] + h * g.slope[k];
  for (std::size_t k = origin; k-- > 0;) g.s[k] = g.s[k + 1] - h * g.slope[k];
  g.last = origin;
  while (g.last < n && std::isfinite(g.s[g.last + 1])) ++g.last;
  g.first = origin;
  while (g.first > 0 && std::isfinite(g.s[g.first - 1])) --g.first;
  return g;
}

struct BroxState {
  double b = 0.0;
  std::size_t cell = 0;  // k with s[k] <= b < s[k+1]
};

// Moves the cell index to the one containing b; false when b leaves the grid.
bool locate(const ScaleGrid& g, BroxState& st) {
  while (st.b < g.s[st.cell]) {
    if (st.cell == g.first) return false;
    --st.cell;
  }
  while (st.b >= g.s[st.cell + 1]) {
    if (++st.cell >= g.last) return false;
  }
  return true;
}

template <class Visit>
void brox_loop(const TwoSidedPath& env, const ScaleGrid& g, double horizon_t, double dt,
               std::uint64_t seed, std::uint64_t stream, std::uint64_t max_steps,
               Visit&& visit, std::uint64_t& steps_out, BroxState& st) {
  const auto v = env.flat().values();
  const double sd = std::sqrt(dt);
  st.cell = env.flat().origin_index();
  double clock = 0.0;
  std::uint64_t k = 0;
  while (true) {
    if (k >= max_steps) throw ReplicationAborted("Brox time change stalled");
    const double rate = std::exp(-2.0 * v[st.cell]);
    const double dT = rate * dt;
    if (clock + dT >= horizon_t) {
      visit(st, horizon_t - clock, (horizon_t - clock) / rate);
      break;
    }
    visit(st, dT, dt);
    clock += dT;
    const auto bits = random_pair_at(seed, stream, k++);
    const double z = std::sqrt(-2.0 * std::log(to_open_unit(bits.first))) *
                     std::cos(2.0 * std::numbers::pi * to_unit(bits.second));
    st.b += sd * z;
    if (!locate(g, st)) throw WindowTooSmall("Brownian motion left the scale-function window");
  }
  steps_out = k;
}

}  // namespace

DiffusionRun brox_simulate(const TwoSidedPath& env, double horizon_t, double dt, double bin_h,
                           std::uint64_t seed, std::uint64_t stream, std::uint64_t max_steps) {
  if (!(horizon_t > 0.0) || !(dt > 0.0) || !(bin_h > 0.0)) {
    throw ParameterError("horizon, dt and bin width must be positive");
  }
  const ScaleGrid g = scale_grid(env);
  const double h = env.step_h();
  const GridPoint lo = env.min_point();
  Occupation occ{bin_h,
                 static_cast<GridPoint>(std::floor(env.flat().x_of(lo) / bin_h)),
                 std::vector<double>(static_cast<std::size_t>(
                     std::ceil(static_cast<double>(env.flat().size()) * h / bin_h) + 2), 0.0)};
  double x = 0.0;
  const auto position = [&](const BroxState& st) {
    return env.flat().x_of(static_cast<GridPoint>(st.cell) + lo) +
           (st.b - g.s[st.cell]) / g.slope[st.cell];
  };
  BroxState st;
  std::uint64_t steps = 0;
  brox_loop(env, g, horizon_t, dt, seed, stream, max_steps,
            [&](const BroxState& s, double x_time, double) {
              x = position(s);
              occ.add(static_cast<GridPoint>(std::floor(x / bin_h + 1e-12)), x_time);
            },
            steps, st);
  DiffusionRun run;
  run.engine = Engine::Brox;
  run.horizon_t = horizon_t;
  run.occupation = std::move(occ);
  run.final_position = x;
  run.stream = stream;
  run.steps = steps;
  return run;
}

std::vector<double> brox_local_time_via_brownian(const TwoSidedPath& env, double horizon_t,
                                                 double dt, std::uint64_t seed,
                                                 std::uint64_t stream) {
  const ScaleGrid g = scale_grid(env);
  const auto v = env.flat().values();
  const double h = env.step_h();
  std::vector<double> brownian_time(v.size(), 0.0);
  BroxState st;
  std::uint64_t steps = 0;
  brox_loop(env, g, horizon_t, dt, seed, stream, 400'000'000,
            [&](const BroxState& s, double, double b_time) { brownian_time[s.cell] += b_time; },
            steps, st);
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double width = h * g.slope[k];  // S-space width of cell k
    const double brownian_local_time = brownian_time[k] / width;
    out[k] = std::exp(-v[k]) * brownian_local_time;
  }
  return out;
}

double LocalTimeProfile::sup() const noexcept { return kernels::reduce_max(grid.values()); }

LocalTimeProfile local_time_profile(const DiffusionRun& run) {
  const Occupation& occ = run.occupation;
  std::vector<double> values(occ.time.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = occ.time[i] / occ.bin_h;
  GridPoint first = occ.first_point;
  if (first > 0) {
    values.insert(values.begin(), static_cast<std::size_t>(first), 0.0);
    first = 0;
  }
  if (first + static_cast<GridPoint>(values.size()) <= 0) {
    values.resize(static_cast<std::size_t>(-first) + 1, 0.0);
  }
  return {GridPath(std::move(values), occ.bin_h, static_cast<std::size_t>(-first)),
          run.horizon_t};
}

GridPoint favorite_point(const LocalTimeProfile& profile) {
  const auto v = profile.grid.values();
  if (v.empty()) throw ParameterError("empty profile");
  const auto it = std::max_element(v.begin(), v.end());  // first maximum
  return static_cast<GridPoint>(it - v.begin()) + profile.grid.min_point();
}

}  // namespace levyenv
