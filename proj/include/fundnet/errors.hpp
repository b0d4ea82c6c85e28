#pragma once

#include <stdexcept>
#include <string>

namespace fundnet {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invariant violations in input data. Loaders let these propagate so the
/// caller sees which invariant broke; the CLI maps them to exit code 4.
struct ValidationError : Error {
  using Error::Error;
};

// ---- graph construction ----
struct SelfLoop : ValidationError {
  using ValidationError::ValidationError;
};
struct DuplicateEdge : ValidationError {
  using ValidationError::ValidationError;
};
struct NegativeWeight : ValidationError {
  using ValidationError::ValidationError;
};
struct DegenerateGraph : ValidationError {
  using ValidationError::ValidationError;
};

// ---- metrics ----
struct NoConvergence : Error {
  using Error::Error;
};
struct UnlabeledNode : ValidationError {
  using ValidationError::ValidationError;
};
struct DegenerateLabels : ValidationError {
  using ValidationError::ValidationError;
};
struct InsufficientSnapshots : ValidationError {
  using ValidationError::ValidationError;
};

// ---- valuation ----
struct SelfHolding : ValidationError {
  using ValidationError::ValidationError;
};
struct FractionOutOfRange : ValidationError {
  using ValidationError::ValidationError;
};
struct FullyInternalized : ValidationError {
  using ValidationError::ValidationError;
};
struct NegativePrice : ValidationError {
  using ValidationError::ValidationError;
};
struct AssetUnheld : ValidationError {
  using ValidationError::ValidationError;
};
/// Internal solver failure; unreachable for inputs that passed validation.
struct SingularSystem : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};

// ---- contagion ----
struct UnknownAsset : Error {
  using Error::Error;
};

// ---- ingestion ----
struct ParseError : ValidationError {
  ParseError(const std::string& what, int line, int column)
      : ValidationError(what + " (line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};
struct UnresolvedReference : ValidationError {
  using ValidationError::ValidationError;
};
struct DuplicateRow : ValidationError {
  using ValidationError::ValidationError;
};
struct InconsistentSymbols : ValidationError {
  using ValidationError::ValidationError;
};
struct InfeasibleTargets : Error {
  using Error::Error;
};

// ---- sweep ----
struct AmbiguousCell : Error {
  using Error::Error;
};
struct UnknownParameter : Error {
  using Error::Error;
};

// ---- I/O ----
struct IoError : Error {
  using Error::Error;
};

}  // namespace fundnet
