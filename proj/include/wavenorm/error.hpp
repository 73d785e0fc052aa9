#pragma once

#include <stdexcept>
#include <string>

namespace wavenorm {

/// Precondition or regime violation (negative argument, t outside the
/// validity window of an estimate, unsupported profile kind, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature ran out of panels before meeting its tolerance.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  /// Error estimate reached when the panel budget was exhausted.
  double achieved() const noexcept { return achieved_; }

private:
  double achieved_;
};

/// A periodic-box observable was requested beyond the time range on which
/// finite propagation speed keeps the periodic images away.
class HorizonError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A proven inequality failed numerically. Always a correctness failure.
class BoundViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace wavenorm
