#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "bb/rng.hpp"

using bb::RngStream;

TEST_CASE("philox4x32-10 matches the reference known-answer vectors") {
  // Counter/key/output triples from the Random123 distribution's kat_vectors.
  const std::array<std::uint32_t, 4> zero =
      bb::detail::philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(zero == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

  const std::array<std::uint32_t, 4> ones = bb::detail::philox4x32(
      {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(ones == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

  const std::array<std::uint32_t, 4> pi = bb::detail::philox4x32(
      {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(pi == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("mix64 matches the splitmix64 reference sequence") {
  // First three outputs of splitmix64 seeded with 0; mix64(k * gamma) is the
  // (k+1)-th output.
  constexpr std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;
  CHECK(bb::mix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(bb::mix64(gamma) == 0x6E789E6AA1B965F4ULL);
  CHECK(bb::mix64(2 * gamma) == 0x06C45D188009454FULL);
}

TEST_CASE("stream words follow the philox block directly") {
  RngStream s(0);  // key words (0, 0); substream 0; block 0
  CHECK(s.next_u32() == 0x6627e8d5u);
  CHECK(s.next_u32() == 0xe169c58du);
  CHECK(s.next_u32() == 0xbc57ac4cu);
  CHECK(s.next_u32() == 0x9b00dbd8u);

  RngStream s2(0);
  const std::uint64_t expect = 0x6627e8d5ULL | (0xe169c58dULL << 32);
  CHECK(s2.next_u64() == expect);
  CHECK(s2.uniform() == static_cast<double>((0xbc57ac4cULL | (0x9b00dbd8ULL << 32)) >> 11) *
                            0x1.0p-53);
}

TEST_CASE("identical keys reproduce, different keys and substreams do not") {
  RngStream a(1234), b(1234), c(1235);
  for (int i = 0; i < 100; ++i) {
    const double va = a.uniform();
    CHECK(va == b.uniform());
  }
  bool any_diff = false;
  RngStream a2(1234);
  for (int i = 0; i < 100; ++i) any_diff = any_diff || (a2.uniform() != c.uniform());
  CHECK(any_diff);

  RngStream d(77);
  d.set_substream(5);
  std::array<double, 8> first{};
  for (double& v : first) v = d.uniform();
  d.set_substream(6);
  bool sub_diff = false;
  for (double v : first) sub_diff = sub_diff || (d.uniform() != v);
  CHECK(sub_diff);
  d.set_substream(5);  // jumping back replays the substream from its start
  for (double v : first) CHECK(d.uniform() == v);
}

TEST_CASE("uniform values live in [0, 1) and have the right first moments") {
  RngStream s(99);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));       // 4 sigma ~ 0.0037
  CHECK(var == doctest::Approx(1.0 / 12).epsilon(0.05));
}

TEST_CASE("derive_stream_key separates seeds and ids") {
  std::set<std::uint64_t> keys;
  for (std::uint64_t seed : {0ULL, 1ULL, 2ULL})
    for (std::uint64_t a : {0ULL, 1ULL, 99ULL})
      for (std::uint64_t b : {0ULL, 1ULL, 7ULL}) keys.insert(bb::derive_stream_key(seed, a, b));
  CHECK(keys.size() == 27);  // no collisions across the grid
  CHECK(bb::derive_stream_key(5, 6, 7) == bb::derive_stream_key(5, 6, 7));
  // argument position matters: swapped and repeated inputs give new streams
  CHECK(bb::derive_stream_key(0, 1, 7) != bb::derive_stream_key(1, 0, 7));
  CHECK(bb::derive_stream_key(3, 3, 7) != bb::derive_stream_key(4, 4, 7));
  CHECK(bb::derive_stream_key(5, 6, 7) != bb::derive_stream_key(5, 7, 6));
}
