#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rocftp {

/// Target grammar syntax or validation failure; position is a 0-based
/// byte offset into the input text.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

/// Both the current state and the proposal have zero target density:
/// the chain sits outside the target's working support.
struct SupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A coalescence trial ran past its step cap.
struct CoalescenceTimeout : std::runtime_error {
  CoalescenceTimeout(const std::string& msg, std::size_t steps_run)
      : std::runtime_error(msg), steps(steps_run) {}
  std::size_t steps;
};

/// CFTP exhausted its doubling budget without coalescing.
struct CftpBudgetError : std::runtime_error {
  CftpBudgetError(const std::string& msg, std::size_t log_entries)
      : std::runtime_error(msg), log_size(log_entries) {}
  std::size_t log_size;
};

}  // namespace rocftp
