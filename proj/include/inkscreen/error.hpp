#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace inkscreen {

enum class ErrorCode {
  MalformedInput,
  RangeViolation,
  NonMonotonicTime,
  EmptySession,
  EvenWindow,
  TooShort,
  NoRows,
  EmptyLabels,
  BadAlpha,
  BadC,
  NonFinite,
  ShapeMismatch,
  BadDepth,
  BadMaxFeatures,
  BadKernel,
  BadGamma,
  SingleClass,
  TooFewPerClass,
  DegenerateAUC,
  Empty,
  TooFew,
  BadPermCount,
  BadSpec,
  IdMismatch,
  BundleVersionMismatch,
  RegistryHashMismatch,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (CLI, HTTP service) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace inkscreen
