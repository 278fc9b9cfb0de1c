#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace prepcost {

enum class ErrorKind {
  NonHermitianInput,
  NotPositive,
  InvalidTrace,
  InvalidNorm,
  NotUnitary,
  DimensionMismatch,
  DimensionTooLarge,
  InvalidCurve,
  InvalidGenerator,
  FrameJump,
  SupportCrossing,
  SupportMismatch,
  InvalidBloch,
  NonpositiveSeminorm,
  InvalidArgument,
  ParseError,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; `kind()` drives CLI exit codes and
// `time()` carries the curve time at which a numerical failure was detected.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<double> time = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), time_(time) {}

  ErrorKind kind() const { return kind_; }
  std::optional<double> time() const { return time_; }

 private:
  ErrorKind kind_;
  std::optional<double> time_;
};

}  // namespace prepcost
