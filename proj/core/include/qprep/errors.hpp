#pragma once

#include <stdexcept>
#include <string>

namespace qprep {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A gate references a qubit id outside the registry.
struct UnknownQubitError : Error {
  using Error::Error;
};

/// Two gates in one layer touch the same qubit, or one gate repeats an operand.
struct OverlappingSupportError : Error {
  using Error::Error;
};

/// Malformed circuit text. `line` is 1-based.
struct ParseError : Error {
  int line;
  ParseError(int line_, const std::string& msg)
      : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/// Input data fails a shape or normalization precondition.
struct SpecError : Error {
  using Error::Error;
};

/// Gate-word search cannot reach the requested accuracy under its caps.
struct BudgetUnreachableError : Error {
  using Error::Error;
};

/// A fixed measurement outcome has zero probability.
struct ImpossibleOutcomeError : Error {
  using Error::Error;
};

/// A sparse function lists the same index key twice.
struct DuplicateEntriesError : Error {
  using Error::Error;
};

/// A stored single-qubit state fails normalization.
struct UnnormalizedWordError : Error {
  using Error::Error;
};

/// A sparse state lists the same basis index twice.
struct DuplicateIndicesError : Error {
  using Error::Error;
};

/// Every entry of a sparse state has amplitude exactly zero.
struct ZeroAmplitudeOnlyEntriesError : Error {
  using Error::Error;
};

/// A combination weight that must be positive is zero, negative, or NaN.
struct NonpositiveCoefficientError : Error {
  using Error::Error;
};

/// A compiled artifact failed its built-in simulation check.
struct VerificationFailedError : Error {
  double deviation;
  explicit VerificationFailedError(const std::string& what, double dev)
      : Error(what), deviation(dev) {}
};

/// Circuit-level operation applied where it is not defined
/// (e.g. inverting a measurement, simulating one with apply_circuit).
struct UnsupportedGateError : Error {
  using Error::Error;
};

}  // namespace qprep
