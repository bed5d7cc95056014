#include "rocftp/metro_ms.hpp"

#include <algorithm>

namespace rocftp {

namespace {

bool all_equal(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != v[0]) return false;
  return true;
}

}  // namespace

PathEnsemble evolve_paths(const Target& target, std::vector<double> initial,
                          std::span<const StepRandomness> steps,
                          std::vector<std::vector<double>>* trajectory) {
  if (initial.empty())
    throw std::invalid_argument("evolve_paths: initial states empty");
  PathEnsemble out;
  out.states = std::move(initial);
  std::vector<double> dens(out.states.size());
  for (std::size_t i = 0; i < out.states.size(); ++i)
    dens[i] = target.density(out.states[i]);
  if (all_equal(out.states)) out.coalesced_step = 0;
  std::size_t t = 0;
  for (const StepRandomness& u : steps) {
    ++t;
    for (std::size_t i = 0; i < out.states.size(); ++i)
      out.states[i] = metropolis_step_cached(target, out.states[i], dens[i], u);
    if (trajectory) trajectory->push_back(out.states);
    if (!out.coalesced_step && all_equal(out.states)) out.coalesced_step = t;
  }
  return out;
}

std::optional<std::size_t> coupling_time(const Target& target,
                                         std::span<const double> initial,
                                         double sigma, RngStream& stream,
                                         std::size_t max_steps) {
  if (initial.empty())
    throw std::invalid_argument("coupling_time: initial states empty");
  std::vector<double> states(initial.begin(), initial.end());
  std::vector<double> dens(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    dens[i] = target.density(states[i]);
  if (all_equal(states)) return 0;
  for (std::size_t t = 1; t <= max_steps; ++t) {
    const StepRandomness u = draw_step_randomness(stream, sigma);
    for (std::size_t i = 0; i < states.size(); ++i)
      states[i] = metropolis_step_cached(target, states[i], dens[i], u);
    if (all_equal(states)) return t;
  }
  return std::nullopt;
}

}  // namespace rocftp
