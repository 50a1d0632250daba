#pragma once

#include <span>
#include <string_view>

// Data-parallel inner loops used by the log-domain integrals and the chain
// rate tables. Each kernel has a scalar reference version and, on x86-64, an
// AVX2/FMA version; the active table is picked once at runtime from CPUID.
// Set LEVYENV_SIMD=scalar to force the reference path.

namespace levyenv::kernels {

struct KernelTable {
  std::string_view name;
  /// max over x; -inf for an empty span.
  double (*reduce_max)(std::span<const double> x);
  /// min over x; +inf for an empty span.
  double (*reduce_min)(std::span<const double> x);
  /// sum_i exp(scale * x_i - shift)
  double (*sum_exp)(std::span<const double> x, double scale, double shift);
  /// out_i = exp(scale * x_i - shift); out.size() == x.size()
  void (*exp_map)(std::span<const double> x, double scale, double shift,
                  std::span<double> out);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table() noexcept;

/// Table selected at first use.
const KernelTable& active() noexcept;

inline double reduce_max(std::span<const double> x) { return active().reduce_max(x); }

inline double reduce_min(std::span<const double> x) { return active().reduce_min(x); }

inline double sum_exp(std::span<const double> x, double scale, double shift) {
  return active().sum_exp(x, scale, shift);
}

inline void exp_map(std::span<const double> x, double scale, double shift,
                    std::span<double> out) {
  active().exp_map(x, scale, shift, out);
}

/// log sum_i exp(scale * x_i), overflow-free; -inf for an empty span.
double log_sum_exp(std::span<const double> x, double scale = 1.0);

}  // namespace levyenv::kernels
