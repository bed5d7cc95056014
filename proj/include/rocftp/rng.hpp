#pragma once

#include <array>
#include <cstdint>

#include "rocftp/special_functions.hpp"

namespace rocftp {

// Counter-based stream built on Philox4x64-10 (Salmon et al., SC 2011).
// The 128-bit key is (master_seed, stream_id), so any (seed, id) pair names
// an independent stream that can be recreated from scratch in O(1). Output
// matches numpy.random.Philox for the same key, which the tests use as a
// cross-implementation reference.
class RngStream {
public:
  RngStream() : RngStream(0, 0) {}

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : key_{master_seed, stream_id} {}

  std::uint64_t master_seed() const { return key_[0]; }
  std::uint64_t stream_id() const { return key_[1]; }

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      if (++counter_[0] == 0 && ++counter_[1] == 0) ++counter_[2];
      buffer_ = philox_block(key_, counter_);
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

  /// Uniform on [0,1), 53-bit resolution, one u64 consumed.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the open interval (0,1); never returns 0 or 1.
  double next_open_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via inverse-CDF on one uniform. Always consumes
  /// exactly one u64, so stream positions stay deterministic.
  double next_standard_normal() {
    return special::inverse_normal_cdf(next_open_uniform());
  }

  // One Philox round function application, 10 rounds.
  static std::array<std::uint64_t, 4> philox_block(
      std::array<std::uint64_t, 2> key, std::array<std::uint64_t, 4> ctr) {
    constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ull;
    constexpr std::uint64_t kM1 = 0xCA5A826395121157ull;
    constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ull;
    constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73Bull;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const unsigned __int128 p0 =
          static_cast<unsigned __int128>(kM0) * ctr[0];
      const unsigned __int128 p1 =
          static_cast<unsigned __int128>(kM1) * ctr[2];
      ctr = {static_cast<std::uint64_t>(p1 >> 64) ^ ctr[1] ^ key[0],
             static_cast<std::uint64_t>(p1),
             static_cast<std::uint64_t>(p0 >> 64) ^ ctr[3] ^ key[1],
             static_cast<std::uint64_t>(p0)};
    }
    return ctr;
  }

private:
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_{0, 0, 0, 0};
  std::array<std::uint64_t, 4> buffer_{};
  int pos_ = 4;
};

// Derives a fresh 64-bit seed from (master_seed, index). Uses the counter
// block (0,0,0,1), which sequential generation never touches, so the
// derived value shares no outputs with RngStream(master_seed, index).
inline std::uint64_t derive_seed(std::uint64_t master_seed,
                                 std::uint64_t index) {
  return RngStream::philox_block({master_seed, index}, {0, 0, 0, 1})[0];
}

}  // namespace rocftp
