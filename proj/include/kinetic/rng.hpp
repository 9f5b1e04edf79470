#pragma once

#include <cstdint>

namespace kinetic {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Tags for the `run` component of a stream key. Keeping them distinct means
// the permutation, pair and migration draws of one iteration never collide.
enum class StreamTag : std::uint32_t {
  Initial = 1,
  Permute = 2,
  Pair = 3,
  Migrate = 4,
  Generic = 5,
};

struct StreamKey {
  std::uint64_t run = 0;
  std::uint64_t iteration = 0;
  std::uint64_t index = 0;
};

// run id combining a tag with a sub-identifier (vertex, trial, ...).
inline constexpr std::uint64_t run_id(StreamTag tag, std::uint64_t sub = 0) noexcept {
  return (static_cast<std::uint64_t>(tag) << 48) ^ sub;
}

// Counter-based generator: output n is a bijective mix of (key + n*gamma),
// so any (seed, key) substream is available without touching the others.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamKey key) noexcept;

  std::uint64_t next_u64() noexcept {
    counter_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64(key_ ^ counter_);
  }

  // 53-bit uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1); safe for logarithms.
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Unbiased integer in [0, n) (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) noexcept;

  double normal() noexcept;

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace kinetic
