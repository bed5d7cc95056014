#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rocftp/diagnostics.hpp"
#include "rocftp/rocftp.hpp"
#include "rocftp/targets.hpp"

namespace rocftp {

// Replication harness. Every experiment is a pure function of its
// parameters and the master seed: replication r derives its own stream
// (or sub-seed) from r, so results are identical for any thread count
// and any execution order.

struct SweepRow {
  int block_length;  // T
  double p_hat;      // fraction of runs coalescing in block 1
  double n_bar;      // mean index of the first coalescent block
  double tau_bar;    // n_bar * T
  std::size_t reps;
};

std::vector<SweepRow> block_sweep(const Target& target, double hat0,
                                  double hat1, double sigma,
                                  std::span<const int> block_lengths,
                                  std::size_t reps, std::uint64_t seed,
                                  unsigned threads = 0);

/// Joint coalescence times of nested path sets: for each count k the
/// paths sit at k equally spaced points of [hat0, hat1] including both
/// extremes, and all sets evolve under one shared randomness sequence.
/// Returns times[count_index][rep]. Throws CoalescenceTimeout when a
/// replication exceeds max_steps.
std::vector<std::vector<double>> nested_coalescence_times(
    const Target& target, double hat0, double hat1, double sigma,
    std::span<const std::size_t> path_counts, std::size_t reps,
    std::uint64_t seed, unsigned threads = 0,
    std::size_t max_steps = 1'000'000);

struct CoalescenceRow {
  std::size_t paths;
  double mean_time;
  double pct_equal_max;  // % of reps matching the largest count's time
  SixNumberSummary time_summary;
};

std::vector<CoalescenceRow> coalescence_study(
    const Target& target, double hat0, double hat1, double sigma,
    std::span<const std::size_t> path_counts, std::size_t reps,
    std::uint64_t seed, unsigned threads = 0,
    std::size_t max_steps = 1'000'000);

struct DecayRow {
  int t;
  double survive_hat;  // P-hat(T* > t)
  double tv_bound;     // 4 * survive_hat
};

/// Survival curve of the coupling time T* of paths started from
/// start_points, estimated over `reps` replications for t = 1..t_max.
std::vector<DecayRow> decay_study(const Target& target,
                                  std::span<const double> start_points,
                                  double sigma, int t_max, std::size_t reps,
                                  std::uint64_t seed, unsigned threads = 0);

struct GofModeRow {
  double lo;  // region bounds (may be +-infinity)
  double hi;
  double observed_fraction;
  double expected_weight;
};

struct GofReport {
  std::vector<double> samples;
  double ks_d = 0.0;
  double ks_p_value = 0.0;
  std::size_t outlier_count = 0;
  double outlier_fraction = 0.0;
  std::vector<GofModeRow> modes;  // filled for all-Normal mixtures
};

/// Draws n ROCFTP samples and scores their fit: KS against the target
/// CDF, QQ outliers at deviation threshold delta, and per-mode observed
/// mass for multimodal all-Normal targets (regions split at midpoints
/// between adjacent component means).
GofReport gof_study(const Target& target, double hat0, double hat1,
                    double sigma, int block_length, std::size_t n,
                    double delta, std::uint64_t seed,
                    std::uint64_t max_blocks = 4'000'000);

}  // namespace rocftp
