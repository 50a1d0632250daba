#pragma once

#include <stdexcept>
#include <string>

namespace levyenv {

/// Invalid law parameters, preconditions or configuration values.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A query fell outside the stored window of a path.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The stored window is too short for the requested functional; callers
/// are expected to resample with a wider window from the same streams.
class WindowTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Monte Carlo replication could not be completed (window cap reached,
/// numerical stall). Experiments count these instead of dropping them.
class ReplicationAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levyenv
