#pragma once

#include <stdexcept>
#include <string>

namespace riskstage {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (alpha >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Instance or document violates a schema or structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A first-stage vector has no completion, or an algorithm found no feasible
/// answer.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, int scenario = -1)
      : Error(what), scenario_(scenario) {}
  /// Scenario that could not be completed, or -1 when not scenario specific.
  int scenario() const { return scenario_; }

 private:
  int scenario_;
};

/// Spanning-tree first stage containing a cycle.
class NonCanonicalError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or iteration limit was hit; results would be incomplete.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// Algorithm precondition not met (wrong family, non series-parallel, ...).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace riskstage
