#include "levyenv/valley.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "levyenv/errors.hpp"
#include "levyenv/path_core.hpp"

namespace levyenv {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Indices (into v) of c-minima under the leftmost tie rule. For each point
// a monotonic stack yields the maximum of v between the point and its
// nearest blocking neighbour (left: v <= v_i, right: v < v_i); the point
// qualifies when both maxima clear v_i + c.
std::vector<std::size_t> c_minima_indices(std::span<const double> v, double c) {
  const std::size_t n = v.size();
  std::vector<double> left_max(n, kNegInf);
  std::vector<double> right_max(n, kNegInf);
  struct Entry {
    std::size_t index;
    double segment_max;  // max of v over (previous entry, index]
  };
  std::vector<Entry> stack;
  stack.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = kNegInf;
    while (!stack.empty() && v[stack.back().index] > v[i]) {
      m = std::max(m, stack.back().segment_max);
      stack.pop_back();
    }
    left_max[i] = m;
    stack.push_back({i, std::max(m, v[i])});
  }
  stack.clear();
  for (std::size_t i = n; i-- > 0;) {
    double m = kNegInf;
    while (!stack.empty() && v[stack.back().index] >= v[i]) {
      m = std::max(m, stack.back().segment_max);
      stack.pop_back();
    }
    right_max[i] = m;
    stack.push_back({i, std::max(m, v[i])});
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (left_max[i] >= v[i] + c && right_max[i] >= v[i] + c) out.push_back(i);
  }
  return out;
}

bool is_c_min_by_definition(std::span<const double> v, std::size_t x0, double c) {
  const double level = v[x0];
  for (std::size_t xi = 0; xi < x0; ++xi) {
    if (v[xi] < level + c) continue;
    bool left_ok = true;
    for (std::size_t j = xi; j < x0 && left_ok; ++j) left_ok = v[j] > level;
    if (!left_ok) continue;
    for (std::size_t zeta = x0 + 1; zeta < v.size(); ++zeta) {
      if (v[zeta] < level + c) continue;
      bool right_ok = true;
      for (std::size_t j = x0 + 1; j <= zeta && right_ok; ++j) right_ok = v[j] >= level;
      if (right_ok) return true;
    }
  }
  return false;
}

std::vector<Extremum> merge_kinds(const TwoSidedPath& path, const std::vector<std::size_t>& mins,
                                  const std::vector<std::size_t>& maxs) {
  std::vector<Extremum> out;
  out.reserve(mins.size() + maxs.size());
  const GridPoint offset = path.min_point();
  for (const auto i : mins) out.push_back({static_cast<GridPoint>(i) + offset, ExtremumKind::Min});
  for (const auto i : maxs) out.push_back({static_cast<GridPoint>(i) + offset, ExtremumKind::Max});
  std::sort(out.begin(), out.end(),
            [](const Extremum& a, const Extremum& b) { return a.point < b.point; });
  return out;
}

}  // namespace

std::vector<Extremum> find_c_extrema(const TwoSidedPath& path, double c) {
  if (!(c > 0.0)) throw ParameterError("c must be positive");
  const auto v = path.flat().values();
  std::vector<double> neg(v.begin(), v.end());
  for (double& x : neg) x = -x;
  return merge_kinds(path, c_minima_indices(v, c), c_minima_indices(neg, c));
}

std::vector<Extremum> find_c_extrema_exhaustive(const TwoSidedPath& path, double c) {
  if (!(c > 0.0)) throw ParameterError("c must be positive");
  const auto v = path.flat().values();
  std::vector<double> neg(v.begin(), v.end());
  for (double& x : neg) x = -x;
  std::vector<std::size_t> mins;
  std::vector<std::size_t> maxs;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (is_c_min_by_definition(v, i, c)) mins.push_back(i);
    if (is_c_min_by_definition(neg, i, c)) maxs.push_back(i);
  }
  return merge_kinds(path, mins, maxs);
}

OneSidedStats one_sided_stats(const GridPath& path, double c) {
  if (path.origin_index() != 0) throw ParameterError("one-sided path must start at its origin");
  if (!(c > 0.0)) throw ParameterError("c must be positive");
  const auto v = path.values();
  double running_min = v[0];
  double running_max = v[0];
  double max_at_last_zero = v[0];
  std::size_t last_zero = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    running_min = std::min(running_min, v[i]);
    running_max = std::max(running_max, v[i]);
    if (v[i] == running_min) {
      last_zero = i;
      max_at_last_zero = running_max;
    }
    if (v[i] - running_min >= c) {
      return {static_cast<GridPoint>(i), static_cast<GridPoint>(last_zero),
              std::max(v[last_zero] + c, max_at_last_zero)};
    }
  }
  throw WindowTooSmall("path never rises by " + std::to_string(c) +
                       " above its running infimum in " + std::to_string(v.size()) + " points");
}

Valley standard_valley(const TwoSidedPath& env, double c) {
  const OneSidedStats plus = one_sided_stats(env.plus(), c);
  const OneSidedStats minus = one_sided_stats(env.minus(), c);
  Valley out;
  out.height_c = c;
  out.step_h = env.step_h();
  out.J_plus = plus.J_c;
  out.J_minus = minus.J_c;
  out.side = plus.J_c <= minus.J_c ? ValleySide::Plus : ValleySide::Minus;
  out.m = out.side == ValleySide::Plus ? plus.m_c : -minus.m_c;

  const auto extrema = find_c_extrema(env, c);
  const auto neighbours = [&](std::size_t k) {
    std::pair<std::optional<GridPoint>, std::optional<GridPoint>> pq;
    if (k > 0 && extrema[k - 1].kind == ExtremumKind::Max) pq.first = extrema[k - 1].point;
    if (k + 1 < extrema.size() && extrema[k + 1].kind == ExtremumKind::Max) {
      pq.second = extrema[k + 1].point;
    }
    return pq;
  };
  for (std::size_t k = 0; k < extrema.size(); ++k) {
    if (extrema[k].kind != ExtremumKind::Min) continue;
    const auto [p, q] = neighbours(k);
    if (extrema[k].point == out.m) {
      if (p && q && !(*p <= 0 && 0 <= *q)) {
        throw std::logic_error("valley bottom found by J comparison is not bracketing 0");
      }
      out.p = p;
      out.q = q;
    } else if (p && q && *p < 0 && 0 < *q) {
      // When 0 is itself a c-maximum the minima on both sides touch it; the
      // J comparison then decides and only a strict bracket is a conflict.
      throw std::logic_error("c-extrema scan brackets 0 with a different c-minimum");
    }
  }
  return out;
}

ValleySample sample_valley(const StableLawSpec& spec, double c, double step_h,
                           std::size_t initial_steps_each, std::uint64_t base_stream,
                           std::size_t max_points) {
  std::size_t n = std::max<std::size_t>(initial_steps_each, 1);
  while (2 * n + 1 <= max_points) {
    TwoSidedPath env = sample_two_sided(spec, n, step_h, base_stream);
    try {
      Valley v = standard_valley(env, c);
      v.boundary_extended = n != std::max<std::size_t>(initial_steps_each, 1);
      return {std::move(env), v, n};
    } catch (const WindowTooSmall&) {
      n *= 2;
    }
  }
  throw ReplicationAborted("valley of height " + std::to_string(c) +
                           " not found within the window cap");
}

std::pair<GridPoint, GridPoint> ab_window(const TwoSidedPath& env_recentered, double c,
                                          double r) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("r must lie in (0, 1)");
  const double level = c * r;
  std::optional<GridPoint> a;
  std::optional<GridPoint> b;
  for (GridPoint i = 0; i >= env_recentered.min_point(); --i) {
    if (env_recentered.at(i) > level) {
      a = i;
      break;
    }
  }
  for (GridPoint i = 0; i <= env_recentered.max_point(); ++i) {
    if (env_recentered.at(i) > level) {
      b = i;
      break;
    }
  }
  if (!a || !b) throw WindowTooSmall("environment never exceeds c r on one side");
  return {*a, *b};
}

}  // namespace levyenv
