#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace levyenv {

/// Signed grid coordinate: point `i` sits at x = i * step_h.
using GridPoint = std::ptrdiff_t;

/**
 * Path stored by its values at the points of a uniform grid.
 *
 * Between grid points the path is piecewise constant and right-continuous,
 * so evaluation at a real x uses the grid point floor(x / h). Functionals
 * that need a left limit at a grid point read the stored value there: the
 * path is treated as the sequence of its grid values, which keeps running
 * extrema, excursion endpoints and ties well defined without half-step
 * bookkeeping.
 */
class GridPath {
 public:
  GridPath() = default;
  /// Throws ParameterError for step_h <= 0, an empty value array, an origin
  /// outside it, or non-finite values.
  GridPath(std::vector<double> values, double step_h, std::size_t origin_index = 0);

  std::size_t size() const noexcept { return values_.size(); }
  double step_h() const noexcept { return step_h_; }
  std::size_t origin_index() const noexcept { return origin_; }

  GridPoint min_point() const noexcept { return -static_cast<GridPoint>(origin_); }
  GridPoint max_point() const noexcept {
    return static_cast<GridPoint>(values_.size()) - 1 - static_cast<GridPoint>(origin_);
  }
  bool contains(GridPoint i) const noexcept { return i >= min_point() && i <= max_point(); }

  /// Value at grid point i; RangeError outside the stored window.
  double at(GridPoint i) const;
  double operator[](std::size_t raw) const noexcept { return values_[raw]; }

  double x_of(GridPoint i) const noexcept { return static_cast<double>(i) * step_h_; }
  /// Grid point whose cell [x_i, x_{i+1}) contains x (with a 1e-9 relative
  /// snap so that x = i*h lands on i).
  GridPoint point_at(double x) const noexcept;
  /// Right-continuous evaluation; RangeError outside the window.
  double eval(double x) const;

  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }

  /// Copy of the sub-window [first, last] re-expressed with the same origin.
  GridPath window(GridPoint first, GridPoint last) const;

  friend bool operator==(const GridPath&, const GridPath&) = default;

 private:
  std::vector<double> values_;
  double step_h_ = 1.0;
  std::size_t origin_ = 0;
};

/**
 * Two-sided path V on a grid around 0, assembled from a positive-side path
 * V+ and an independent negative-side path V- (both indexed from 0):
 * V(i h) = V+(i h) for i >= 0 and V(-i h) = V-(i h) for i > 0.
 *
 * Stored flat so that kernels can run over contiguous memory.
 */
class TwoSidedPath {
 public:
  TwoSidedPath() = default;
  /// plus and minus must share step_h and have origin_index 0.
  TwoSidedPath(const GridPath& plus, const GridPath& minus);
  /// Adopt a flat grid path (its origin becomes x = 0).
  explicit TwoSidedPath(GridPath flat) : flat_(std::move(flat)) {}

  const GridPath& flat() const noexcept { return flat_; }
  double step_h() const noexcept { return flat_.step_h(); }
  GridPoint min_point() const noexcept { return flat_.min_point(); }
  GridPoint max_point() const noexcept { return flat_.max_point(); }
  bool contains(GridPoint i) const noexcept { return flat_.contains(i); }
  double at(GridPoint i) const { return flat_.at(i); }
  double eval(double x) const { return flat_.eval(x); }

  GridPath plus() const;
  GridPath minus() const;

  friend bool operator==(const TwoSidedPath&, const TwoSidedPath&) = default;

 private:
  GridPath flat_;
};

}  // namespace levyenv
