#include "rocftp/rocftp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "rocftp/parallel.hpp"

namespace rocftp {

void SamplerConfig::validate() const {
  if (!(hat0 < hat1))
    throw std::invalid_argument("SamplerConfig: hat0 must be < hat1");
  if (!(sigma > 0.0))
    throw std::invalid_argument("SamplerConfig: sigma must be > 0");
  if (block_length < 1)
    throw std::invalid_argument("SamplerConfig: block_length must be >= 1");
  if (max_blocks < 1)
    throw std::invalid_argument("SamplerConfig: max_blocks must be >= 1");
  const double x = initial_state();
  if (!(x >= hat0 && x <= hat1))
    throw std::invalid_argument("SamplerConfig: x0 must lie in [hat0, hat1]");
}

BlockReport run_block(const SamplerConfig& config, double x_in,
                      RngStream& stream, std::uint64_t block_index) {
  std::array<double, 3> s{config.hat0, config.hat1, x_in};
  std::array<double, 3> d{config.target.density(s[0]),
                          config.target.density(s[1]),
                          config.target.density(s[2])};
  BlockReport report{block_index, x_in, false, std::nullopt, x_in};
  if (s[0] == s[1] && s[1] == s[2]) {
    report.coalesced = true;
    report.coalescence_step = 0;
  }
  for (int t = 1; t <= config.block_length; ++t) {
    const StepRandomness u = draw_step_randomness(stream, config.sigma);
    for (int i = 0; i < 3; ++i)
      s[i] = metropolis_step_cached(config.target, s[i], d[i], u);
    if (!report.coalesced && s[0] == s[1] && s[1] == s[2]) {
      report.coalesced = true;
      report.coalescence_step = t;
    }
  }
  report.end_state = s[2];
  return report;
}

SampleResult sample(const SamplerConfig& config, std::size_t n) {
  config.validate();
  SampleResult out;
  out.samples.reserve(n);
  double x = config.initial_state();
  bool established = false;
  std::uint64_t last_coalescent = 0;
  std::uint64_t block = 0;
  while (out.samples.size() < n && block < config.max_blocks) {
    RngStream stream(config.seed, block);
    const BlockReport report = run_block(config, x, stream, block);
    ++out.stats.blocks;
    if (report.coalesced) {
      ++out.stats.coalescent_blocks;
      if (established) {
        out.samples.push_back(report.start_state);
        out.stats.blocks_per_sample.push_back(block - last_coalescent);
      } else {
        established = true;
      }
      last_coalescent = block;
    }
    x = report.end_state;
    ++block;
  }
  out.stats.total_steps =
      out.stats.blocks * static_cast<std::uint64_t>(config.block_length);
  out.stats.p_hat = out.stats.blocks == 0
                        ? 0.0
                        : static_cast<double>(out.stats.coalescent_blocks) /
                              static_cast<double>(out.stats.blocks);
  out.complete = out.samples.size() >= n;
  return out;
}

int calibrate_block_length(const Target& target, double hat0, double hat1,
                           double sigma, std::size_t reps, std::uint64_t seed,
                           unsigned threads, std::size_t max_steps) {
  if (reps < 100)
    throw std::invalid_argument("calibrate_block_length: reps must be >= 100");
  if (hat0 > hat1)
    throw std::invalid_argument("calibrate_block_length: hat0 must be <= hat1");
  const std::array<double, 3> starts{hat0, 0.5 * (hat0 + hat1), hat1};
  std::vector<double> times(reps);
  detail::parallel_for(reps, threads, [&](std::size_t rep) {
    RngStream stream(seed, rep);
    const auto t = coupling_time(target, starts, sigma, stream, max_steps);
    if (!t)
      throw CoalescenceTimeout(
          "calibrate_block_length: coalescence not reached within " +
              std::to_string(max_steps) + " steps",
          max_steps);
    times[rep] = static_cast<double>(*t);
  });
  std::sort(times.begin(), times.end());
  // Type-7 median, rounded up.
  const std::size_t m = reps / 2;
  const double median =
      (reps % 2 == 1) ? times[m] : 0.5 * (times[m - 1] + times[m]);
  return std::max(1, static_cast<int>(std::ceil(median)));
}

}  // namespace rocftp
