#include <cmath>
#include <limits>

#include "kernels_impl.hpp"

namespace levyenv::kernels::scalar {

double reduce_max(std::span<const double> x) {
  double best = -std::numeric_limits<double>::infinity();
  for (const double v : x) best = v > best ? v : best;
  return best;
}

double reduce_min(std::span<const double> x) {
  double best = std::numeric_limits<double>::infinity();
  for (const double v : x) best = v < best ? v : best;
  return best;
}

double sum_exp(std::span<const double> x, double scale, double shift) {
  double acc = 0.0;
  for (const double v : x) acc += std::exp(scale * v - shift);
  return acc;
}

void exp_map(std::span<const double> x, double scale, double shift,
             std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::exp(scale * x[i] - shift);
}

}  // namespace levyenv::kernels::scalar
