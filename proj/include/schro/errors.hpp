#pragma once

#include <stdexcept>
#include <string>

namespace schro {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Operand shapes do not fit the operation (non-square, mismatched sizes).
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& message) : Error(message) {}
};

/// A dense object would exceed the configured qubit / dimension budget.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& message) : Error(message) {}
};

/// Index or argument outside its admissible range.
class RangeError : public Error {
 public:
  explicit RangeError(const std::string& message) : Error(message) {}
};

/// The request is well-formed but not supported by this code path.
class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& message) : Error(message) {}
};

/// Invalid user configuration (CLI flags, config files, parameters).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error(message) {}
};

/// Parse failure on a textual artifact (circuit dumps, config files).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error(message) {}
};

/// Recovery node does not clear the growth threshold max(lambda_max(C1) T, 0).
class ThresholdError : public Error {
 public:
  ThresholdError(const std::string& message, double threshold)
      : Error(message), threshold_(threshold) {}

  /// lambda_max(C1) * T at the time the check failed.
  double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
};

}  // namespace schro
