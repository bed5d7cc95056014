#pragma once

#include <cstdint>
#include <vector>

#include "rocftp/errors.hpp"
#include "rocftp/multishift.hpp"
#include "rocftp/rng.hpp"

namespace rocftp {

/// AR(1) update through the multishift mapping: apply_shift(draw, rho*state).
/// Monotone in state for rho >= 0 and any fixed draw.
inline double ar1_multishift_step(double rho, double state,
                                  const CouplerDraw& draw) {
  return apply_shift(draw, rho * state);
}

struct CftpResult {
  double sample;          // state at time 0
  std::uint64_t lookback;  // final window length 2^n
};

/// Observer for the randomness-reuse contract: for each pass n the digest
/// of the draw used at every absolute time index (entry k corresponds to
/// the transition into time -k). Overlapping indices must agree between
/// passes.
struct CftpTrace {
  std::vector<std::vector<std::uint64_t>> pass_digests;
};

std::uint64_t coupler_digest(const CouplerDraw& draw);

/// Monotone CFTP on the AR(1)-multishift chain with unit innovation scale.
/// Two chains start from (start_lo, start_hi) at time -2^n; the lookback
/// starts at 2 and doubles on failure. Fresh randomness covers only the
/// newly added earlier segment; logged randomness is replayed verbatim for
/// later times. Coalescence is checked at the halfway time -2^{n-1}.
/// Throws CftpBudgetError carrying the log size when max_doublings levels
/// fail to coalesce.
CftpResult cftp_run(double rho, double start_lo, double start_hi,
                    RngStream& stream, int max_doublings,
                    CftpTrace* trace = nullptr);

}  // namespace rocftp
