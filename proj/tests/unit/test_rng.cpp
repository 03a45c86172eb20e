#include <doctest.h>

#include <cmath>

#include "hybridyn/rng.hpp"

using hybridyn::Philox;

// Known-answer vectors of the reference Philox4x32-10.
TEST_CASE("philox known answers") {
  using B = std::array<std::uint32_t, 4>;
  using K = std::array<std::uint32_t, 2>;
  CHECK(Philox::block(B{0, 0, 0, 0}, K{0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox::block(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox::block(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  Philox a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  for (int i = 0; i < 100; ++i) {
    const auto v = a.next_u64();
    CHECK(v == b.next_u64());
    CHECK(v != c.next_u64());
    CHECK(v != d.next_u64());
  }
}

TEST_CASE("uniform and normal moments") {
  Philox r(7);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK((u > 0.0 && u < 1.0));
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(std::fabs(su / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::fabs(sn / n) < 5.0 / std::sqrt(n));
  CHECK(std::fabs(sn2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
}
