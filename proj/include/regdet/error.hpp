#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace regdet {

/// Raised when an input violates an operation's precondition. The offending
/// parameter name travels with the exception so front ends can report it.
class InvalidArgument : public std::invalid_argument {
 public:
  InvalidArgument(std::string parameter, const std::string& message)
      : std::invalid_argument(message), parameter_(std::move(parameter)) {}

  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string parameter_;
};

/// Raised when a numerical procedure cannot certify the requested tolerance.
class ToleranceNotReached : public std::runtime_error {
 public:
  ToleranceNotReached(const std::string& message, double achieved)
      : std::runtime_error(message), achieved_(achieved) {}

  /// Best error bound the procedure could establish.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace regdet
