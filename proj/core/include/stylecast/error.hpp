#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stylecast {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data or configuration violates a documented contract.
/// The command-line tool maps this to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A metric has no finite value for the given inputs (zero actuals,
/// constant vectors, empty tie-corrected denominators).
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

/// Non-fatal conditions collected while processing (empty partitions,
/// items that contribute no rows). Callers decide whether to print them.
using Warnings = std::vector<std::string>;

}  // namespace stylecast
