#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hlim {

/// Input rejected by a precondition check (bad grid, incompatible source,
/// malformed config, ...).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A solver produced a non-finite field.
class SolverBlowup : public std::runtime_error {
public:
  SolverBlowup(std::size_t step, double max_norm, const std::string &what)
      : std::runtime_error(what), step_(step), max_norm_(max_norm) {}

  std::size_t step() const noexcept { return step_; }
  double max_norm() const noexcept { return max_norm_; }

private:
  std::size_t step_;
  double max_norm_;
};

/// Raised by the PEHM surface-pressure consistency monitor.
class ConsistencyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace hlim
