#pragma once

#include <span>

namespace levyenv::kernels {

namespace scalar {
double reduce_max(std::span<const double> x);
double reduce_min(std::span<const double> x);
double sum_exp(std::span<const double> x, double scale, double shift);
void exp_map(std::span<const double> x, double scale, double shift,
             std::span<double> out);
}  // namespace scalar

#if defined(LEVYENV_HAVE_AVX2_KERNELS)
namespace avx2 {
double reduce_max(std::span<const double> x);
double reduce_min(std::span<const double> x);
double sum_exp(std::span<const double> x, double scale, double shift);
void exp_map(std::span<const double> x, double scale, double shift,
             std::span<double> out);
}  // namespace avx2
#endif

}  // namespace levyenv::kernels
