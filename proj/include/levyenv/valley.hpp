#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "levyenv/grid_path.hpp"
#include "levyenv/stable_env.hpp"

namespace levyenv {

enum class ExtremumKind { Min, Max };

struct Extremum {
  GridPoint point;
  ExtremumKind kind;
  friend bool operator==(const Extremum&, const Extremum&) = default;
};

/**
 * All interior c-minima and c-maxima of the stored window, sorted.
 *
 * x0 is a c-minimum when some xi < x0 < zeta satisfy V(xi) >= V(x0) + c,
 * V(zeta) >= V(x0) + c and V(x0) = min V on [xi, zeta]. Among equal values
 * the leftmost point wins: points in [xi, x0) must lie strictly above V(x0).
 * c-maxima are the c-minima of -V with the same tie rule. Runs in O(n).
 */
std::vector<Extremum> find_c_extrema(const TwoSidedPath& path, double c);

/// Same set by direct search over all (xi, x0, zeta) triples; O(n^3) oracle.
std::vector<Extremum> find_c_extrema_exhaustive(const TwoSidedPath& path, double c);

struct OneSidedStats {
  GridPoint tau_c;  ///< first point with V - inf V >= c
  GridPoint m_c;    ///< last point <= tau_c where V equals its running infimum
  double J_c;       ///< (V(m_c) + c) max sup_{[0, m_c]} V
};

/// Statistics of a one-sided path starting at its origin; WindowTooSmall when
/// V - inf V never reaches c in the window.
OneSidedStats one_sided_stats(const GridPath& path, double c);

enum class ValleySide { Plus, Minus };

struct Valley {
  double height_c = 0.0;
  /// Enclosing c-maxima; empty when they lie beyond the stored window.
  std::optional<GridPoint> p;
  GridPoint m = 0;
  std::optional<GridPoint> q;
  ValleySide side = ValleySide::Plus;
  double J_plus = 0.0;
  double J_minus = 0.0;
  bool boundary_extended = false;
  double step_h = 1.0;
};

/**
 * Standard valley of height c around the origin.
 *
 * The bottom is m_c^+ when J_c^+ <= J_c^- and -m_c^- otherwise (a tie goes
 * to the positive side). The enclosing c-maxima come from the c-extrema
 * scan; when that scan strictly brackets the origin (p < 0 < q) with a
 * different c-minimum the two routes disagree and std::logic_error is
 * thrown. An origin that is itself a c-maximum counts as interior to both
 * neighbouring valleys, and the J comparison picks one.
 */
Valley standard_valley(const TwoSidedPath& env, double c);

struct ValleySample {
  TwoSidedPath env;
  Valley valley;
  std::size_t n_steps_each = 0;
};

/// Sample an environment and its valley, doubling the window on
/// WindowTooSmall. Throws ReplicationAborted once 2n+1 exceeds max_points.
ValleySample sample_valley(const StableLawSpec& spec, double c, double step_h,
                           std::size_t initial_steps_each, std::uint64_t base_stream,
                           std::size_t max_points = std::size_t{1} << 24);

/// a = largest grid point <= 0 with V > c r, b = smallest grid point >= 0
/// with V > c r; the path is expected to be recentred at the valley bottom.
std::pair<GridPoint, GridPoint> ab_window(const TwoSidedPath& env_recentered, double c,
                                          double r);

}  // namespace levyenv
