#pragma once

#include <vector>

#include "levyenv/grid_path.hpp"

namespace levyenv {

GridPath running_infimum(const GridPath& path);
GridPath running_supremum(const GridPath& path);
/// out[i] = min(values[i..]) over the stored window.
GridPath future_infimum(const GridPath& path);
/// Values in reverse order; the origin index is mirrored.
GridPath reverse(const GridPath& path);
GridPath negate(const GridPath& path);

/// y -> V(x0 + y) - V(x0), keeping every stored point.
TwoSidedPath recenter(const TwoSidedPath& path, GridPoint x0);

/// V^c(x) = V(c^alpha x) / c. Grid point j of the result sits at j h / c^alpha
/// and maps onto grid point j of the input, so values are divided by c and the
/// step shrinks by c^alpha.
TwoSidedPath rescale(const TwoSidedPath& path, double c, double alpha);

/// Grid points i with x_i in [a, b) as [first, last_exclusive).
struct PointRange {
  GridPoint first;
  GridPoint end;
};
PointRange points_in(const TwoSidedPath& path, double a, double b);

/// log( h * sum_{x_i in [a,b)} exp(sign * V(x_i)) ); RangeError when [a,b)
/// leaves the window, ParameterError for sign not +-1 or a > b.
double exp_integral(const TwoSidedPath& path, double a, double b, int sign);

struct ProfileWeights {
  double step_h;
  GridPoint first_point;
  std::vector<double> log_weights;
  double log_normalizer;

  double density(std::size_t k) const;
  double x_of(std::size_t k) const noexcept {
    return static_cast<double>(first_point + static_cast<GridPoint>(k)) * step_h;
  }
};

/// Density exp(-V) / integral of exp(-V) over [a, b).
ProfileWeights normalize_profile(const TwoSidedPath& path, double a, double b);

/// integral_a^b exp(-c V) / integral_{alpha_in}^{beta_in} exp(-c V), both by
/// the left-endpoint rule, returned as 1 + tail / inner so the excess over 1
/// keeps full relative precision.
double laplace_ratio(const TwoSidedPath& path, double c, double a, double b, double alpha_in,
                     double beta_in);

}  // namespace levyenv
