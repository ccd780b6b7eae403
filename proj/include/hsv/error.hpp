#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsv {

enum class ErrorCode {
  NonPositiveSemiDefinite,
  InvalidParams,
  InvalidConfig,
  DegenerateModel,
  UnsupportedModel,
  NumericalBlowup,
  EmptyInput,
  InvalidBump,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. The code classifies the failure so that front ends
/// can map it onto exit statuses without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hsv
