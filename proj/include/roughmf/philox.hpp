#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace roughmf {

// Philox4x32-10 counter-based generator.
//
// A stream is identified by (key, stream id); the 128-bit counter is
// (block index lo, block index hi, stream lo, stream hi). Streams never
// overlap and any block can be reached in O(1).
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using block_type = std::array<std::uint32_t, 4>;

  Philox4x32(std::uint64_t key, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 4) {
      buffer_ = block(block_index_++);
      lane_ = 0;
    }
    return buffer_[lane_++];
  }

  void seek(std::uint64_t block_index) {
    block_index_ = block_index;
    lane_ = 4;
  }

  block_type block(std::uint64_t index) const {
    block_type ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                   static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    auto key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeylA;
        key[1] += kWeylB;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kWeylA = 0x9E3779B9;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85;
  static constexpr std::uint32_t kMulA = 0xD2511F53;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57;

  static block_type single_round(const block_type& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * c[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  block_type buffer_{};
  int lane_ = 4;
};

// Standard normals by Box-Muller on 53-bit uniforms in (0, 1). Written out
// rather than std::normal_distribution so streams are identical across
// standard libraries.
template <class Engine>
class NormalSampler {
 public:
  explicit NormalSampler(Engine& engine) : engine_(engine) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  double uniform() {
    const std::uint64_t hi = engine_() >> 5;  // 27 bits
    const std::uint64_t lo = engine_() >> 6;  // 26 bits
    return (static_cast<double>((hi << 26) | lo) + 0.5) * 0x1.0p-53;
  }

  Engine& engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace roughmf
