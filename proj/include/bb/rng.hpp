#pragma once

#include <array>
#include <cstdint>

// Counter-based random number generation (Philox 4x32-10).
//
// Every random draw is a pure function of (stream key, substream, block
// counter), so replications and rounds can be generated independently, in
// any order, and on any number of worker threads, while still producing
// identical results for a given base seed.

namespace bb {

// SplitMix64 finalizer; used to mix seeds and ids into stream keys.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives the key for one random stream from a base seed plus two ids
// (e.g. algorithm id and replication index). Each slot carries its own
// round constant, so the result depends on the position of every input —
// swapping or repeating inputs yields unrelated keys.
inline std::uint64_t derive_stream_key(std::uint64_t base_seed, std::uint64_t id_a,
                                       std::uint64_t id_b) {
  std::uint64_t k = mix64(0x243F6A8885A308D3ULL ^ base_seed);
  k = mix64(k ^ mix64(0x13198A2E03707344ULL ^ id_a));
  k = mix64(k ^ mix64(0xA4093822299F31D0ULL ^ id_b));
  return k;
}

namespace detail {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kPhiloxM4x32A} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kPhiloxM4x32B} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += kPhiloxW32A;
    key[1] += kPhiloxW32B;
  }
  return ctr;
}

}  // namespace detail

// One independent random stream. `set_substream(i)` jumps to substream i
// (e.g. one per simulated round); draws inside a substream are sequential.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

  void set_substream(std::uint64_t substream) {
    substream_ = substream;
    block_ = 0;
    avail_ = 0;
  }

  std::uint32_t next_u32() {
    if (avail_ == 0) refill();
    return buf_[4 - avail_--];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  void refill() {
    buf_ = detail::philox4x32({static_cast<std::uint32_t>(block_),
                               static_cast<std::uint32_t>(block_ >> 32),
                               static_cast<std::uint32_t>(substream_),
                               static_cast<std::uint32_t>(substream_ >> 32)},
                              key_);
    ++block_;
    avail_ = 4;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t substream_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int avail_ = 0;
};

}  // namespace bb
