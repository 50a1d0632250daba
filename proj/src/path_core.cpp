#include "levyenv/path_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "levyenv/errors.hpp"
#include "levyenv/kernels.hpp"

namespace levyenv {
namespace {

GridPath with_values(const GridPath& like, std::vector<double> values) {
  return GridPath(std::move(values), like.step_h(), like.origin_index());
}

std::span<const double> slice(const TwoSidedPath& path, PointRange r) {
  const auto offset = static_cast<std::size_t>(r.first - path.min_point());
  return path.flat().values().subspan(offset, static_cast<std::size_t>(r.end - r.first));
}

}  // namespace

GridPath running_infimum(const GridPath& path) {
  std::vector<double> out(path.values().begin(), path.values().end());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::min(out[i], out[i - 1]);
  return with_values(path, std::move(out));
}

GridPath running_supremum(const GridPath& path) {
  std::vector<double> out(path.values().begin(), path.values().end());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::max(out[i], out[i - 1]);
  return with_values(path, std::move(out));
}

GridPath future_infimum(const GridPath& path) {
  std::vector<double> out(path.values().begin(), path.values().end());
  for (std::size_t i = out.size() - 1; i-- > 0;) out[i] = std::min(out[i], out[i + 1]);
  return with_values(path, std::move(out));
}

GridPath reverse(const GridPath& path) {
  std::vector<double> out(path.values().rbegin(), path.values().rend());
  return GridPath(std::move(out), path.step_h(), path.size() - 1 - path.origin_index());
}

GridPath negate(const GridPath& path) {
  std::vector<double> out(path.values().begin(), path.values().end());
  for (double& v : out) v = -v;
  return with_values(path, std::move(out));
}

TwoSidedPath recenter(const TwoSidedPath& path, GridPoint x0) {
  const double base = path.at(x0);
  std::vector<double> out(path.flat().values().begin(), path.flat().values().end());
  for (double& v : out) v -= base;
  return TwoSidedPath(GridPath(std::move(out), path.step_h(),
                               static_cast<std::size_t>(x0 - path.min_point())));
}

TwoSidedPath rescale(const TwoSidedPath& path, double c, double alpha) {
  if (!(c > 0.0)) throw ParameterError("rescale needs c > 0");
  std::vector<double> out(path.flat().values().begin(), path.flat().values().end());
  for (double& v : out) v /= c;
  return TwoSidedPath(GridPath(std::move(out), path.step_h() / std::pow(c, alpha),
                               path.flat().origin_index()));
}

PointRange points_in(const TwoSidedPath& path, double a, double b) {
  if (a > b) throw ParameterError("interval bounds out of order");
  const double h = path.step_h();
  const auto snap_up = [h](double x) {
    const double s = x / h;
    return static_cast<GridPoint>(std::ceil(s - 1e-9 * std::max(1.0, std::abs(s))));
  };
  const PointRange r{snap_up(a), snap_up(b)};
  if (r.end > r.first && (!path.contains(r.first) || !path.contains(r.end - 1))) {
    throw RangeError("integration interval leaves the stored window");
  }
  return r;
}

double exp_integral(const TwoSidedPath& path, double a, double b, int sign) {
  if (sign != 1 && sign != -1) throw ParameterError("sign must be +1 or -1");
  const PointRange r = points_in(path, a, b);
  if (r.end <= r.first) return -std::numeric_limits<double>::infinity();
  return kernels::log_sum_exp(slice(path, r), static_cast<double>(sign)) +
         std::log(path.step_h());
}

double ProfileWeights::density(std::size_t k) const {
  return std::exp(log_weights.at(k) - log_normalizer);
}

ProfileWeights normalize_profile(const TwoSidedPath& path, double a, double b) {
  if (!(a < b)) throw ParameterError("normalize_profile needs a < b");
  const PointRange r = points_in(path, a, b);
  ProfileWeights w{path.step_h(), r.first, {}, exp_integral(path, a, b, -1)};
  for (const double v : slice(path, r)) w.log_weights.push_back(-v);
  return w;
}

double laplace_ratio(const TwoSidedPath& path, double c, double a, double b, double alpha_in,
                     double beta_in) {
  if (!(a <= alpha_in && alpha_in < 0.0 && 0.0 < beta_in && beta_in <= b)) {
    throw ParameterError("laplace_ratio needs a <= alpha_in < 0 < beta_in <= b");
  }
  if (!(c >= 0.0)) throw ParameterError("laplace_ratio needs c >= 0");
  const PointRange all = points_in(path, a, b);
  if (path.at(0) != 0.0) throw ParameterError("path must vanish at 0");
  for (GridPoint i = all.first; i < all.end; ++i) {
    if (i != 0 && !(path.at(i) > 0.0)) {
      throw ParameterError("path must be positive away from its minimum at 0");
    }
  }
  const PointRange inner = points_in(path, alpha_in, beta_in);
  const auto log_mass = [&](PointRange r) {
    if (r.end <= r.first) return -std::numeric_limits<double>::infinity();
    return kernels::log_sum_exp(slice(path, r), -c);
  };
  const double log_inner = log_mass(inner);
  const std::array<double, 2> log_tails{log_mass({all.first, inner.first}),
                                        log_mass({inner.end, all.end})};
  const double log_tail = kernels::log_sum_exp(log_tails);
  return 1.0 + std::exp(log_tail - log_inner);
}

}  // namespace levyenv
