#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace infoest {

/// Identifies one reproducible random stream: (master_seed, stream_index)
/// always yields the same draws bit-for-bit, independent of scheduling.
/// Parallel runs hand each path its own stream_index.
struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

/// Counter-based generator: Philox4x32-10 (Salmon et al., SC 2011).
/// Key is the master seed, the high 64 counter bits are the stream index and
/// the low 64 bits count blocks, so distinct streams are distinct key/counter
/// lanes of the same bijection.
///
/// Gaussians use the Box-Muller transform on the 53-bit uniforms (two uniforms
/// per pair of normals, fixed consumption); this choice is frozen for
/// reproducibility.
class CounterRng {
 public:
  explicit CounterRng(RngSeed seed)
      : key_{static_cast<std::uint32_t>(seed.master_seed),
             static_cast<std::uint32_t>(seed.master_seed >> 32)},
        stream_{static_cast<std::uint32_t>(seed.stream_index),
                static_cast<std::uint32_t>(seed.stream_index >> 32)} {}

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      block_ = philox_block();
      ++counter_;
      pos_ = 0;
    }
    return block_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform on (0, 1]: 53-bit mantissa, never exactly 0 so log() is safe.
  double uniform01() {
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal draw.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  static void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                        std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
  }

  std::array<std::uint32_t, 4> philox_block() const {
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;

    std::array<std::uint32_t, 4> c = {static_cast<std::uint32_t>(counter_),
                                      static_cast<std::uint32_t>(counter_ >> 32),
                                      stream_[0], stream_[1]};
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mul_hi_lo(kMul0, c[0], hi0, lo0);
      mul_hi_lo(kMul1, c[2], hi1, lo1);
      c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return c;
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace infoest
