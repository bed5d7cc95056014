#include "rocftp/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "rocftp/parallel.hpp"

namespace rocftp {

std::vector<SweepRow> block_sweep(const Target& target, double hat0,
                                  double hat1, double sigma,
                                  std::span<const int> block_lengths,
                                  std::size_t reps, std::uint64_t seed,
                                  unsigned threads) {
  if (reps < 100)
    throw std::invalid_argument("block_sweep: reps must be >= 100");
  std::vector<SweepRow> rows;
  for (std::size_t row = 0; row < block_lengths.size(); ++row) {
    const int T = block_lengths[row];
    SamplerConfig cfg{target, hat0, hat1, sigma, T, 0};
    cfg.validate();
    // Enough blocks that a run failing to coalesce signals a real
    // trapping configuration rather than bad luck.
    const std::uint64_t block_cap = std::max<std::uint64_t>(
        1000, 2'000'000 / static_cast<std::uint64_t>(T));
    std::vector<std::uint64_t> first_block(reps, 0);
    detail::parallel_for(reps, threads, [&](std::size_t rep) {
      SamplerConfig c = cfg;
      c.seed = derive_seed(seed, (static_cast<std::uint64_t>(row) << 32) |
                                     static_cast<std::uint64_t>(rep));
      double x = c.initial_state();
      for (std::uint64_t b = 0; b < block_cap; ++b) {
        RngStream stream(c.seed, b);
        const BlockReport rpt = run_block(c, x, stream, b);
        if (rpt.coalesced) {
          first_block[rep] = b + 1;
          return;
        }
        x = rpt.end_state;
      }
      throw CoalescenceTimeout("block_sweep: no coalescent block within cap",
                               block_cap * static_cast<std::uint64_t>(T));
    });
    std::size_t in_first = 0;
    double sum = 0.0;
    for (std::uint64_t n : first_block) {
      if (n == 1) ++in_first;
      sum += static_cast<double>(n);
    }
    const double n_bar = sum / static_cast<double>(reps);
    rows.push_back(SweepRow{T,
                            static_cast<double>(in_first) /
                                static_cast<double>(reps),
                            n_bar, n_bar * static_cast<double>(T), reps});
  }
  return rows;
}

namespace {

// Joint evolution of many shared-randomness paths, tracked as equality
// classes: paths with equal values evolve identically forever, so each
// distinct value is stepped once and classes merge when their images
// collide. A union-find over the initial positions keeps membership
// queries cheap.
class NestedCoalescenceRun {
public:
  NestedCoalescenceRun(const Target& target, double hat0, double hat1,
                       double sigma, std::span<const std::size_t> counts)
      : target_(target), sigma_(sigma) {
    const double span = hat1 - hat0;
    for (std::size_t k : counts) {
      std::vector<double> pos(k);
      for (std::size_t i = 0; i < k; ++i)
        pos[i] = hat0 + span * (static_cast<double>(i) /
                                static_cast<double>(k - 1));
      grids_.push_back(std::move(pos));
    }
    std::vector<double> unions;
    for (const auto& g : grids_) unions.insert(unions.end(), g.begin(), g.end());
    std::sort(unions.begin(), unions.end());
    unions.erase(std::unique(unions.begin(), unions.end()), unions.end());
    values_ = unions;
    parent_.resize(values_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i) parent_[i] = i;
    densities_.resize(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i)
      densities_[i] = target_.density(values_[i]);
    live_.resize(values_.size());
    for (std::size_t i = 0; i < live_.size(); ++i) live_[i] = i;
    for (const auto& g : grids_) {
      std::vector<std::size_t> idx(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        const auto it =
            std::lower_bound(unions.begin(), unions.end(), g[i]);
        idx[i] = static_cast<std::size_t>(it - unions.begin());
      }
      members_.push_back(std::move(idx));
    }
  }

  /// Coalescence step per count; throws on exceeding max_steps.
  std::vector<double> run(RngStream& stream, std::size_t max_steps) {
    std::vector<double> times(grids_.size(),
                              std::numeric_limits<double>::quiet_NaN());
    std::size_t remaining = grids_.size();
    for (std::size_t c = 0; c < grids_.size(); ++c)
      if (subset_coalesced(c)) {
        times[c] = 0.0;
        --remaining;
      }
    for (std::size_t t = 1; remaining > 0; ++t) {
      if (t > max_steps)
        throw CoalescenceTimeout(
            "coalescence_study: replication exceeded step cap", max_steps);
      step(stream);
      for (std::size_t c = 0; c < grids_.size(); ++c) {
        if (!std::isnan(times[c])) continue;
        if (live_.size() == 1 || subset_coalesced(c)) {
          times[c] = static_cast<double>(t);
          --remaining;
        }
      }
    }
    return times;
  }

private:
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  bool subset_coalesced(std::size_t c) {
    const auto& m = members_[c];
    const std::size_t root = find(m.front());
    if (find(m.back()) != root) return false;  // extremes merge last, usually
    for (std::size_t i = 1; i + 1 < m.size(); ++i)
      if (find(m[i]) != root) return false;
    return true;
  }

  void step(RngStream& stream) {
    const StepRandomness u = draw_step_randomness(stream, sigma_);
    merge_buf_.clear();
    std::vector<std::size_t> still_live;
    still_live.reserve(live_.size());
    for (std::size_t root : live_) {
      values_[root] =
          metropolis_step_cached(target_, values_[root], densities_[root], u);
      const std::uint64_t bits = std::bit_cast<std::uint64_t>(values_[root]);
      const auto [it, inserted] = merge_buf_.try_emplace(bits, root);
      if (inserted)
        still_live.push_back(root);
      else
        parent_[root] = it->second;
    }
    live_ = std::move(still_live);
  }

  const Target& target_;
  double sigma_;
  std::vector<std::vector<double>> grids_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<double> values_;
  std::vector<double> densities_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> live_;
  std::unordered_map<std::uint64_t, std::size_t> merge_buf_;
};

}  // namespace

std::vector<std::vector<double>> nested_coalescence_times(
    const Target& target, double hat0, double hat1, double sigma,
    std::span<const std::size_t> path_counts, std::size_t reps,
    std::uint64_t seed, unsigned threads, std::size_t max_steps) {
  if (reps < 100)
    throw std::invalid_argument("nested_coalescence_times: reps must be >= 100");
  if (path_counts.empty() || path_counts.front() != 2)
    throw std::invalid_argument(
        "nested_coalescence_times: path_counts must start at 2");
  if (!std::is_sorted(path_counts.begin(), path_counts.end()))
    throw std::invalid_argument(
        "nested_coalescence_times: path_counts must be ascending");
  if (!(hat0 < hat1))
    throw std::invalid_argument("nested_coalescence_times: hat0 must be < hat1");

  std::vector<std::vector<double>> times(path_counts.size(),
                                         std::vector<double>(reps));
  detail::parallel_for(reps, threads, [&](std::size_t rep) {
    NestedCoalescenceRun run(target, hat0, hat1, sigma, path_counts);
    RngStream stream(seed, rep);
    const std::vector<double> t = run.run(stream, max_steps);
    for (std::size_t c = 0; c < path_counts.size(); ++c)
      times[c][rep] = t[c];
  });
  return times;
}

std::vector<CoalescenceRow> coalescence_study(
    const Target& target, double hat0, double hat1, double sigma,
    std::span<const std::size_t> path_counts, std::size_t reps,
    std::uint64_t seed, unsigned threads, std::size_t max_steps) {
  const auto times = nested_coalescence_times(target, hat0, hat1, sigma,
                                              path_counts, reps, seed, threads,
                                              max_steps);
  std::vector<CoalescenceRow> rows;
  const std::vector<double>& largest = times.back();
  for (std::size_t c = 0; c < path_counts.size(); ++c) {
    double sum = 0.0;
    std::size_t equal = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      sum += times[c][rep];
      if (times[c][rep] == largest[rep]) ++equal;
    }
    rows.push_back(CoalescenceRow{
        path_counts[c], sum / static_cast<double>(reps),
        100.0 * static_cast<double>(equal) / static_cast<double>(reps),
        summary_stats(times[c])});
  }
  return rows;
}

std::vector<DecayRow> decay_study(const Target& target,
                                  std::span<const double> start_points,
                                  double sigma, int t_max, std::size_t reps,
                                  std::uint64_t seed, unsigned threads) {
  if (start_points.empty())
    throw std::invalid_argument("decay_study: start_points empty");
  if (reps < 1000)
    throw std::invalid_argument("decay_study: reps must be >= 1000");
  if (t_max < 1)
    throw std::invalid_argument("decay_study: t_max must be >= 1");

  // Coupling beyond t_max never affects the curve, so trials stop there.
  std::vector<std::size_t> coupling(reps);
  const std::size_t cap = static_cast<std::size_t>(t_max);
  detail::parallel_for(reps, threads, [&](std::size_t rep) {
    RngStream stream(seed, rep);
    const auto t = coupling_time(target, start_points, sigma, stream, cap);
    coupling[rep] = t ? *t : cap + 1;
  });

  std::vector<DecayRow> rows;
  rows.reserve(cap);
  for (int t = 1; t <= t_max; ++t) {
    std::size_t above = 0;
    for (std::size_t v : coupling)
      if (v > static_cast<std::size_t>(t)) ++above;
    const double s =
        static_cast<double>(above) / static_cast<double>(reps);
    rows.push_back(DecayRow{t, s, 4.0 * s});
  }
  return rows;
}

GofReport gof_study(const Target& target, double hat0, double hat1,
                    double sigma, int block_length, std::size_t n,
                    double delta, std::uint64_t seed,
                    std::uint64_t max_blocks) {
  if (n < 100)
    throw std::invalid_argument("gof_study: n must be >= 100");
  SamplerConfig cfg{target, hat0, hat1, sigma, block_length, seed, max_blocks};
  const SampleResult result = sample(cfg, n);
  if (!result.complete)
    throw std::runtime_error("gof_study: max_blocks exhausted before n samples");

  GofReport report;
  report.samples = result.samples;
  const KsResult ks = ks_statistic(report.samples, target);
  report.ks_d = ks.d;
  report.ks_p_value = ks.p_value;
  const QqOutliers qq = qq_outliers(report.samples, target, delta);
  report.outlier_count = qq.count;
  report.outlier_fraction =
      static_cast<double>(qq.count) / static_cast<double>(n);

  // Mode masses, defined for mixtures whose components are all Normal:
  // regions split at midpoints between adjacent means.
  bool all_normal = target.components().size() >= 2;
  for (const Component& c : target.components())
    if (!std::holds_alternative<NormalComponent>(c)) all_normal = false;
  if (all_normal) {
    std::vector<std::pair<double, double>> modes;  // (mean, weight)
    for (std::size_t i = 0; i < target.components().size(); ++i)
      modes.emplace_back(std::get<NormalComponent>(target.components()[i]).mean,
                         target.weights()[i]);
    std::sort(modes.begin(), modes.end());
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const double lo =
          i == 0 ? -inf : 0.5 * (modes[i - 1].first + modes[i].first);
      const double hi = i + 1 == modes.size()
                            ? inf
                            : 0.5 * (modes[i].first + modes[i + 1].first);
      std::size_t count = 0;
      for (double s : report.samples)
        if (s >= lo && s < hi) ++count;
      report.modes.push_back(GofModeRow{
          lo, hi, static_cast<double>(count) / static_cast<double>(n),
          modes[i].second});
    }
  }
  return report;
}

}  // namespace rocftp
