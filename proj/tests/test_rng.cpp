#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "archetypal/rng.hpp"

using namespace archetypal;

TEST_CASE("philox known answers") {
  // Reference vectors from the Random123 distribution (philox4x32x10).
  SUBCASE("all-zero counter and key") {
    const auto out = RngStream::block({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
  }
  SUBCASE("pi-digit counter and key") {
    const auto out = RngStream::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                      {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
  }
  SUBCASE("all-ones counter and key") {
    const auto out = RngStream::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                      {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);
  }
}

TEST_CASE("streams reproduce and do not collide") {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a.next_u64());
    vb.push_back(b.next_u64());
    vc.push_back(c.next_u64());
    vd.push_back(d.next_u64());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);

  std::set<std::uint64_t> merged(va.begin(), va.end());
  merged.insert(vc.begin(), vc.end());
  merged.insert(vd.begin(), vd.end());
  CHECK(merged.size() == 3 * 64);
}

TEST_CASE("derive_seed separates salts") {
  CHECK(derive_seed(0, 1) != derive_seed(0, 2));
  CHECK(derive_seed(1, 1) != derive_seed(2, 1));
  CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}

TEST_CASE("uniform01 range and frequency") {
  RngStream rng(123, 0);
  const std::size_t n = 200000;
  std::size_t below_half = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    if (u < 0.5) ++below_half;
  }
  const double band = 4.0 * std::sqrt(std::log(static_cast<double>(n)) / n);
  CHECK(std::abs(static_cast<double>(below_half) / n - 0.5) < band);
  CHECK(std::abs(sum / n - 0.5) < band);
}

TEST_CASE("exponential and uniform moments") {
  RngStream rng(99, 3);
  const std::size_t n = 200000;
  double se = 0.0, su = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = rng.exponential(2.0);
    CHECK(e >= 0.0);
    se += e;
    const double u = rng.uniform(-1.0, 3.0);
    CHECK(u >= -1.0);
    CHECK(u < 3.0);
    su += u;
  }
  CHECK(se / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(su / n == doctest::Approx(1.0).epsilon(0.02));
}
