#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rocftp/errors.hpp"
#include "rocftp/multishift.hpp"
#include "rocftp/rng.hpp"
#include "rocftp/targets.hpp"

namespace rocftp {

// The full per-step randomness of the Metropolis-multishift operation:
// one coupler packet plus one acceptance uniform. The same packet AND the
// same acceptance uniform are applied to every path evolved jointly; that
// is what makes the update a deterministic function of (state, randomness)
// and lets coupled paths coalesce.
struct StepRandomness {
  CouplerDraw draw;
  double accept_u;  // in [0,1)
};

/// Consumes exactly four u64 values from the stream.
inline StepRandomness draw_step_randomness(RngStream& stream, double sigma) {
  CouplerDraw d = draw_coupler(stream, sigma);
  return StepRandomness{d, stream.next_uniform()};
}

/// One Metropolis-multishift update with the caller holding the current
/// state's density (updated on acceptance). Proposal y = apply_shift(state);
/// accept iff accept_u <= min(1, pi(y)/pi(state)). A zero-density state
/// always accepts a positive-density proposal; if both densities vanish
/// the chain is outside the working support and a SupportError is thrown.
inline double metropolis_step_cached(const Target& target, double state,
                                     double& state_density,
                                     const StepRandomness& u) {
  const double y = apply_shift(u.draw, state);
  const double dy = target.density(y);
  if (dy <= 0.0) {
    if (state_density <= 0.0)
      throw SupportError("state outside support");
    return state;  // alpha = 0, reject
  }
  if (state_density <= 0.0 || u.accept_u * state_density <= dy) {
    state_density = dy;
    return y;
  }
  return state;
}

/// Convenience form that recomputes the current density.
inline double metropolis_step(const Target& target, double state,
                              const StepRandomness& u) {
  double d = target.density(state);
  return metropolis_step_cached(target, state, d, u);
}

struct PathEnsemble {
  std::vector<double> states;
  std::optional<std::size_t> coalesced_step;  // first step with all states equal
};

/// Evolves every path with the same StepRandomness at each step and
/// records the first step index at which all states compare exactly
/// equal (0 when the initial states already do). Optionally records the
/// state vector after every step.
PathEnsemble evolve_paths(const Target& target, std::vector<double> initial,
                          std::span<const StepRandomness> steps,
                          std::vector<std::vector<double>>* trajectory = nullptr);

/// Steps the jointly-coupled paths until all are exactly equal; returns
/// the number of steps taken (0 if initially equal) or nullopt once
/// max_steps is exceeded.
std::optional<std::size_t> coupling_time(const Target& target,
                                         std::span<const double> initial,
                                         double sigma, RngStream& stream,
                                         std::size_t max_steps);

}  // namespace rocftp
