#pragma once
// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every stream
// is addressed by (key, stream id); the n-th draw of a stream is a pure
// function of (key, stream, n), so results do not depend on call order,
// thread placement or the platform's <random> implementation.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace iiclab {

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// SplitMix64 finalizer; used to fold several integers into one seed.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + 0x632BE59BD9B4E019ull));
}

class CounterRng {
 public:
  static constexpr const char* kName = "philox4x32-10";

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint64_t next_u64() {
    if (cached_ == 0) {
      block_ = philox4x32({static_cast<std::uint32_t>(counter_),
                           static_cast<std::uint32_t>(counter_ >> 32),
                           static_cast<std::uint32_t>(stream_),
                           static_cast<std::uint32_t>(stream_ >> 32)},
                          key_);
      ++counter_;
      cached_ = 2;
    }
    --cached_;
    const std::size_t base = cached_ == 1 ? 0 : 2;
    return (static_cast<std::uint64_t>(block_[base]) << 32) | block_[base + 1];
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound ? (~std::uint64_t{0} - (~std::uint64_t{0} % bound)) : 0;
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return r % bound;
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int cached_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace iiclab
