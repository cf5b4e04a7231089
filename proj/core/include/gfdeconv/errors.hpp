#pragma once

#include <stdexcept>
#include <string>

namespace gfd {

/// Raised when a solver's applicability conditions fail on the given data
/// (degenerate support window, non-isolated zero bands, non-PSD covariance
/// after jitter, ...). Distinct from std::invalid_argument, which signals a
/// malformed input or configuration.
class SolverRejection : public std::runtime_error {
public:
  explicit SolverRejection(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gfd
