#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rocftp/metro_ms.hpp"
#include "rocftp/rng.hpp"
#include "rocftp/targets.hpp"

namespace rocftp {

struct SamplerConfig {
  Target target;
  double hat0;  // 0-hat, start of the bounded range
  double hat1;  // 1-hat, end of the bounded range
  double sigma = 1.0;
  int block_length = 1;  // T
  std::uint64_t seed = 1;
  std::uint64_t max_blocks = 1'000'000;
  std::optional<double> x0;  // primary chain start; defaults to the midpoint

  double initial_state() const { return x0 ? *x0 : 0.5 * (hat0 + hat1); }
  void validate() const;
};

struct BlockReport {
  std::uint64_t block_index;
  double start_state;  // primary chain value entering the block
  bool coalesced;
  std::optional<int> coalescence_step;  // in [0, T]
  double end_state;  // primary chain value leaving the block
};

/// Runs one block of T steps: auxiliary chains restart from (hat0, hat1),
/// the primary continues from x_in, all three share each step's
/// randomness. Coalesced means all three were exactly equal at some step
/// <= T (equality persists to the block end).
BlockReport run_block(const SamplerConfig& config, double x_in,
                      RngStream& stream, std::uint64_t block_index);

struct RunStats {
  std::uint64_t blocks = 0;
  std::uint64_t coalescent_blocks = 0;
  std::uint64_t total_steps = 0;
  double p_hat = 0.0;
  std::vector<std::uint64_t> blocks_per_sample;  // gaps between coalescent blocks
};

struct SampleResult {
  std::vector<double> samples;
  RunStats stats;
  bool complete = true;  // false when max_blocks ran out first
};

/// Draws n i.i.d. samples. The first coalescent block only establishes
/// exactness; every later coalescent block emits its own START state (the
/// primary chain's value entering that block). Block b draws its
/// randomness from stream_id = b, so any block replays independently.
SampleResult sample(const SamplerConfig& config, std::size_t n);

/// Median coalescence time of the three chains started from
/// (hat0, midpoint, hat1), over `reps` independent trials, rounded up and
/// clamped to at least 1. Throws CoalescenceTimeout if any trial passes
/// max_steps.
int calibrate_block_length(const Target& target, double hat0, double hat1,
                           double sigma, std::size_t reps, std::uint64_t seed,
                           unsigned threads = 0,
                           std::size_t max_steps = 1'000'000);

}  // namespace rocftp
