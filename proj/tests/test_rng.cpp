#include <doctest.h>

#include "nneuler/rng.hpp"

#include <cmath>
#include <set>

using namespace nneuler;

TEST_SUITE("rng") {

// Known-answer vectors published with the Random123 reference implementation.
TEST_CASE("philox4x32-10 known answers") {
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

TEST_CASE("streams are reproducible and distinct") {
  SeededStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    if (i == 0) {
      firsts.insert(x);
      firsts.insert(c.next_u64());
      firsts.insert(d.next_u64());
    }
  }
  CHECK(firsts.size() == 3);
}

TEST_CASE("uniforms lie strictly inside (0, 1)") {
  SeededStream s(1, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12/n) ~ 6.5e-4
  CHECK(std::abs(sum / n - 0.5) < 4e-3);
}

TEST_CASE("normals have unit variance") {
  SeededStream s(5, 3);
  const int n = 400000;
  double m = 0.0, m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.next_normal();
    m += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  m /= n;
  m2 /= n;
  m4 /= n;
  CHECK(std::abs(m) < 0.01);
  CHECK(std::abs(m2 - 1.0) < 0.01);
  CHECK(std::abs(m4 - 3.0) < 0.06);
}

}  // TEST_SUITE
