#include <doctest.h>

#include <set>

#include "levyenv/rng.hpp"

using levyenv::Philox4x32;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("the block function is usable at compile time") {
  constexpr auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  static_assert(out[0] == 0x6627e8d5u);
}

TEST_CASE("random_pair_at is a pure function of its arguments") {
  const auto a = levyenv::random_pair_at(5, 9, 123);
  const auto b = levyenv::random_pair_at(5, 9, 123);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(levyenv::random_pair_at(5, 9, 124).first != a.first);
  CHECK(levyenv::random_pair_at(5, 10, 123).first != a.first);
  CHECK(levyenv::random_pair_at(6, 9, 123).first != a.first);
}

TEST_CASE("CounterRng reproduces the indexed draws in order") {
  levyenv::CounterRng rng(3, 4);
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto p = levyenv::random_pair_at(3, 4, k);
    CHECK(rng() == p.first);
    CHECK(rng() == p.second);
  }
  CHECK(rng.blocks_used() == 10);
}

TEST_CASE("uniform conversions stay in range") {
  CHECK(levyenv::to_unit(0) == 0.0);
  CHECK(levyenv::to_unit(~std::uint64_t{0}) < 1.0);
  CHECK(levyenv::to_open_unit(0) > 0.0);
  CHECK(levyenv::to_open_unit(~std::uint64_t{0}) < 1.0);
}

TEST_CASE("uniform and normal moments") {
  levyenv::CounterRng rng(11, 0);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    su += rng.uniform();
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.005));
  CHECK(std::abs(sn / n) < 4.0 / std::sqrt(n));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.015));
}

TEST_CASE("substream tags do not collide within one base") {
  std::set<std::uint64_t> seen;
  for (std::uint32_t tag = 0; tag < 64; ++tag) seen.insert(levyenv::substream(17, tag));
  CHECK(seen.size() == 64);
  CHECK(levyenv::substream(17, 63) < levyenv::substream(18, 0));
}
