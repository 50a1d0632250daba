#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "levyenv/grid_path.hpp"
#include "levyenv/rng.hpp"

namespace levyenv::test {

inline GridPath g(std::vector<double> v, double h = 1.0, std::size_t origin = 0) {
  return GridPath(std::move(v), h, origin);
}

/// slope * |x| on [-half, half] with step h, as a two-sided path.
inline TwoSidedPath abs_path(double half, double h, double slope = 1.0) {
  const auto n = static_cast<std::size_t>(std::llround(half / h));
  std::vector<double> side(n + 1);
  for (std::size_t i = 0; i <= n; ++i) side[i] = slope * static_cast<double>(i) * h;
  return TwoSidedPath(GridPath(side, h), GridPath(side, h));
}

inline TwoSidedPath constant_path(double value, std::size_t n_each, double h) {
  std::vector<double> v(2 * n_each + 1, value);
  v[n_each] = value;
  return TwoSidedPath(GridPath(std::move(v), h, n_each));
}

/// Simple random walk style path with integer-valued steps in {-2..2}, so
/// ties between values are frequent.
inline std::vector<double> lattice_walk(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 77);
  std::vector<double> v{0.0};
  for (std::size_t i = 1; i < n; ++i) v.push_back(v.back() + static_cast<double>(rng() % 5) - 2.0);
  return v;
}

inline std::vector<double> gaussian_walk(std::size_t n, std::uint64_t seed, double sd = 1.0) {
  CounterRng rng(seed, 78);
  std::vector<double> v{0.0};
  for (std::size_t i = 1; i < n; ++i) v.push_back(v.back() + sd * rng.normal());
  return v;
}

}  // namespace levyenv::test
