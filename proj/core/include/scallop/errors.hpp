#pragma once

#include <stdexcept>
#include <string>

namespace scallop {

/// Base class for all library errors. Each named failure mode below maps to
/// one construction stage so callers can tag diagnostics by origin.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The deterministic perturbation scheme could not certify linear
/// independence of the pooled center set.
class IndependenceFailure : public Error {
 public:
  using Error::Error;
};

/// A one-dimensional transition window is too narrow for double precision.
class DegenerateTransition : public Error {
 public:
  using Error::Error;
};

/// The greedy cover needs more balls than the configured budget allows.
class CoverBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Every candidate gap for a radius was narrower than the resolution floor.
class RadiusSelectionExhausted : public Error {
 public:
  using Error::Error;
};

/// Evaluation was requested at a point not covered by any scalloped ball.
class OutsideCover : public Error {
 public:
  using Error::Error;
};

/// An off-span point showed a vanishing gradient; the construction is broken.
class ConfinementViolation : public Error {
 public:
  using Error::Error;
};

/// The inductive containment step could not fit a radius factor below 1.
class MuSelectionFailure : public Error {
 public:
  using Error::Error;
};

/// No admissible tilt amplitude exists for a removal region.
class TiltInfeasible : public Error {
 public:
  using Error::Error;
};

/// A pluggable deletion map failed one of its validation properties.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The two input sets are not certifiably disjoint.
class NotDisjoint : public Error {
 public:
  using Error::Error;
};

/// Malformed expression source.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, int line, int column)
      : Error(what), line(line), column(column) {}
  int line;
  int column;
};

/// An identifier that names neither a variable nor a builtin function.
class UnknownIdentifier : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

/// Expression evaluation left its domain (sqrt of a negative, x/0, ...).
class EvalDomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration or command line usage.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace scallop
