#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace levyenv {

//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * Every draw is a pure function of (key, counter), so a path increment with
 * index i on stream s can be regenerated at any time without replaying the
 * stream. Window extensions and parallel replications rely on this.
 */
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = Counter{static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                    static_cast<std::uint32_t>(p1),
                    static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                    static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }
};

/// Two 64-bit words drawn at (seed, stream, index).
struct RandomPair {
  std::uint64_t first;
  std::uint64_t second;
};

inline RandomPair random_pair_at(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index) noexcept {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index),
                                static_cast<std::uint32_t>(index >> 32),
                                static_cast<std::uint32_t>(stream),
                                static_cast<std::uint32_t>(stream >> 32)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                            static_cast<std::uint32_t>(seed >> 32)};
  const auto out = Philox4x32::block(ctr, key);
  return {(std::uint64_t{out[0]} << 32) | out[1],
          (std::uint64_t{out[2]} << 32) | out[3]};
}

/// Uniform on [0, 1) with 53 random bits.
inline double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform on the open interval (0, 1). Uses 52 bits so that the largest
/// value, 1 - 2^-53, is representable and never rounds up to 1.
inline double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Sub-stream identifiers: `base` names a replication or object, `tag` the
/// purpose (environment side, diffusion, limit sample, ...).
constexpr std::uint64_t substream(std::uint64_t base, std::uint32_t tag) noexcept {
  return base * 64u + tag;
}

namespace stream_tag {
inline constexpr std::uint32_t kEnvPlus = 1;
inline constexpr std::uint32_t kEnvMinus = 2;
inline constexpr std::uint32_t kDiffusion = 3;
inline constexpr std::uint32_t kTildePlus = 4;
inline constexpr std::uint32_t kTildeMinus = 5;
inline constexpr std::uint32_t kConditioned = 6;
inline constexpr std::uint32_t kBesselX = 7;
inline constexpr std::uint32_t kBesselY = 8;
inline constexpr std::uint32_t kBesselZ = 9;
inline constexpr std::uint32_t kAuxiliary = 10;
inline constexpr std::uint32_t kCalibration = 11;
}  // namespace stream_tag

//---------------------------------------------------------------------------//
/*!
 * Sequential engine over one (seed, stream) pair.
 *
 * Satisfies UniformRandomBitGenerator, but the helpers below are preferred:
 * they do not depend on the standard library's distribution implementations
 * and therefore reproduce bit-for-bit across toolchains.
 */
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : seed_(seed), stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    if (!has_second_) {
      const auto pair = random_pair_at(seed_, stream_, counter_++);
      second_ = pair.second;
      has_second_ = true;
      return pair.first;
    }
    has_second_ = false;
    return second_;
  }

  double uniform() noexcept { return to_unit((*this)()); }
  double uniform_open() noexcept { return to_open_unit((*this)()); }
  double exponential() noexcept { return -std::log(uniform_open()); }

  double normal() noexcept {
    if (has_normal_) {
      has_normal_ = false;
      return cached_normal_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    cached_normal_ = radius * std::sin(angle);
    has_normal_ = true;
    return radius * std::cos(angle);
  }

  std::uint64_t blocks_used() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t second_ = 0;
  bool has_second_ = false;
  double cached_normal_ = 0.0;
  bool has_normal_ = false;
};

}  // namespace levyenv
