#include "rocftp/cftp.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace rocftp {

std::uint64_t coupler_digest(const CouplerDraw& draw) {
  // FNV-1a over the three payload doubles.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (double v : {draw.halfwidth, draw.offset, draw.scale}) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

CftpResult cftp_run(double rho, double start_lo, double start_hi,
                    RngStream& stream, int max_doublings, CftpTrace* trace) {
  if (!(std::fabs(rho) < 1.0))
    throw std::invalid_argument("cftp_run: |rho| must be < 1");
  if (!(start_lo < start_hi))
    throw std::invalid_argument("cftp_run: start_lo must be < start_hi");
  if (max_doublings < 1)
    throw std::invalid_argument("cftp_run: max_doublings must be >= 1");

  // log[k] holds the draw for the transition into time -k; the window
  // [-2^n, 0] uses entries k = 2^n - 1 ... 0. Doubling prepends entries
  // for earlier times only -- logged draws are never regenerated.
  std::vector<CouplerDraw> log;
  std::uint64_t lookback = 2;
  for (int level = 1;; ++level, lookback *= 2) {
    if (level > max_doublings)
      throw CftpBudgetError("cftp_run: no coalescence within doubling budget",
                            log.size());
    const std::size_t old_size = log.size();
    log.resize(lookback);
    // Fresh draws for the newly added earlier segment, generated in
    // forward time order (decreasing k).
    for (std::size_t k = lookback; k-- > old_size;)
      log[k] = draw_coupler(stream, 1.0);

    std::vector<std::uint64_t>* digests = nullptr;
    if (trace) digests = &trace->pass_digests.emplace_back(lookback);

    double lo = start_lo;
    double hi = start_hi;
    bool coalesced_at_half = false;
    const std::size_t half = lookback / 2;
    for (std::size_t k = lookback; k-- > 0;) {
      const CouplerDraw& d = log[k];
      if (digests) (*digests)[k] = coupler_digest(d);
      lo = ar1_multishift_step(rho, lo, d);
      hi = ar1_multishift_step(rho, hi, d);
      if (k == half) coalesced_at_half = (lo == hi);
    }
    if (coalesced_at_half) return CftpResult{lo, lookback};
  }
}

}  // namespace rocftp
