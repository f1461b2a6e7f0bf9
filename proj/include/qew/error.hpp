#pragma once

#include <stdexcept>
#include <string>

namespace qew {

enum class ErrorKind {
  InvalidDimension,
  OutOfRange,
  DimensionMismatch,
  InvalidState,     // a matrix failed a DensityMatrix / RailState invariant
  NonHermitian,
  MissingEntry,
  InvalidSchedule,
  OverBudget,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

/// Error raised for invalid user-level input. Callers at the CLI boundary map
/// these to exit code 2; anything else escaping the library is an internal fault.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qew
