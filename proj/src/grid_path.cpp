#include "levyenv/grid_path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levyenv/errors.hpp"

namespace levyenv {

GridPath::GridPath(std::vector<double> values, double step_h, std::size_t origin_index)
    : values_(std::move(values)), step_h_(step_h), origin_(origin_index) {
  if (!(step_h_ > 0.0) || !std::isfinite(step_h_)) {
    throw ParameterError("grid step must be positive and finite");
  }
  if (values_.empty()) throw ParameterError("grid path needs at least one value");
  if (origin_ >= values_.size()) throw ParameterError("origin index outside the value array");
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw ParameterError("grid path values must be finite");
  }
}

double GridPath::at(GridPoint i) const {
  if (!contains(i)) {
    throw RangeError("grid point " + std::to_string(i) + " outside window [" +
                     std::to_string(min_point()) + ", " + std::to_string(max_point()) + "]");
  }
  return values_[static_cast<std::size_t>(i + static_cast<GridPoint>(origin_))];
}

GridPoint GridPath::point_at(double x) const noexcept {
  const double scaled = x / step_h_;
  return static_cast<GridPoint>(std::floor(scaled + 1e-9 * std::max(1.0, std::abs(scaled))));
}

double GridPath::eval(double x) const { return at(point_at(x)); }

GridPath GridPath::window(GridPoint first, GridPoint last) const {
  if (first > last || !contains(first) || !contains(last)) {
    throw RangeError("requested window is not inside the stored path");
  }
  if (first > 0 || last < 0) throw RangeError("window must contain the origin");
  const auto begin = values_.begin() + (first + static_cast<GridPoint>(origin_));
  const auto end = values_.begin() + (last + static_cast<GridPoint>(origin_)) + 1;
  return GridPath(std::vector<double>(begin, end), step_h_, static_cast<std::size_t>(-first));
}

TwoSidedPath::TwoSidedPath(const GridPath& plus, const GridPath& minus) {
  if (plus.origin_index() != 0 || minus.origin_index() != 0) {
    throw ParameterError("one-sided paths must start at their origin");
  }
  if (plus.step_h() != minus.step_h()) throw ParameterError("sides use different grid steps");
  std::vector<double> flat;
  flat.reserve(plus.size() + minus.size() - 1);
  for (std::size_t i = minus.size(); i-- > 1;) flat.push_back(minus[i]);
  flat.insert(flat.end(), plus.values().begin(), plus.values().end());
  flat_ = GridPath(std::move(flat), plus.step_h(), minus.size() - 1);
}

GridPath TwoSidedPath::plus() const {
  const auto v = flat_.values().subspan(flat_.origin_index());
  return GridPath(std::vector<double>(v.begin(), v.end()), flat_.step_h());
}

GridPath TwoSidedPath::minus() const {
  std::vector<double> out(flat_.origin_index() + 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = flat_[flat_.origin_index() - i];
  return GridPath(std::move(out), flat_.step_h());
}

}  // namespace levyenv
