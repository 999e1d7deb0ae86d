#pragma once

#include <stdexcept>
#include <string>

namespace mmlqg {

// Numerical failure while solving (blow-up, singular boundary matching, ...).
// The message carries the diagnostic name expected by callers and tests,
// e.g. "Riccati escape", "NCE singular", "simulation overflow".
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Inconsistent inputs (grid mismatch, unvalidated parameters, bad CLI args).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace mmlqg
