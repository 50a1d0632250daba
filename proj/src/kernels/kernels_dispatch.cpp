#include <cmath>
#include <cstdlib>
#include <limits>
#include <string_view>

#include "kernels_impl.hpp"
#include "levyenv/kernels.hpp"

namespace levyenv::kernels {
namespace {

const KernelTable kScalar{"scalar", &scalar::reduce_max, &scalar::reduce_min,
                          &scalar::sum_exp, &scalar::exp_map};

#if defined(LEVYENV_HAVE_AVX2_KERNELS)
const KernelTable kAvx2{"avx2", &avx2::reduce_max, &avx2::reduce_min, &avx2::sum_exp,
                        &avx2::exp_map};

bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable& select() noexcept {
  if (const char* forced = std::getenv("LEVYENV_SIMD");
      forced != nullptr && std::string_view{forced} == "scalar") {
    return kScalar;
  }
  if (const KernelTable* simd = avx2_table()) return *simd;
  return kScalar;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(LEVYENV_HAVE_AVX2_KERNELS)
  static const bool available = cpu_has_avx2();
  return available ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

double log_sum_exp(std::span<const double> x, double scale) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const KernelTable& k = active();
  const double peak = scale >= 0.0 ? scale * k.reduce_max(x) : scale * k.reduce_min(x);
  if (!std::isfinite(peak)) return peak;
  return peak + std::log(k.sum_exp(x, scale, peak));
}

}  // namespace levyenv::kernels
