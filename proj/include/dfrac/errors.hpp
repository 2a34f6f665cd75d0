#pragma once

#include <stdexcept>
#include <string>

namespace dfrac {

// Error taxonomy shared by every module. The CLI maps each class to a
// distinct message prefix; callers that only care about failure can catch
// std::runtime_error.

/// Argument outside the mathematical domain (Gamma poles, z = 0, t < 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Shape or horizon contract violated by the caller.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Series or iteration hit its hard cap before reaching tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// lambda I - A is singular to working precision, i.e. lambda is treated as
/// a point of the spectrum.
class ResolventSetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction method was requested whose precondition does not hold.
class MethodInapplicableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state-dependent forcing callback misbehaved (non-finite output or a
/// violated Lipschitz declaration).
class ForcingError : public std::runtime_error {
 public:
  ForcingError(const std::string& what, int index)
      : std::runtime_error(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// Declared growth bound makes the Poisson integral divergent.
class InadmissibleGrowthError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed configuration or input file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dfrac
