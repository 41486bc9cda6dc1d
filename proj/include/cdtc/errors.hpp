#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cdtc {

enum class ErrorCode {
  IllegalCell,
  ResponseShapeMismatch,
  NegativeElapsed,
  ElapsedOutOfRange,
  ClockSkew,
  UnknownCourse,
  UnknownModule,
  SessionNotFound,
  ItemMismatch,
  ValidationErrorsPresent,
  SchemaUnsupported,
  HashMismatch,
  MalformedPackage,
  StorageFailure,
  CorruptProgress,
  InvalidId,
  InvalidConfig,
  MalformedRequest,
};

std::string_view to_string(ErrorCode code);

/// Every failure surfaced by the library carries one of the codes above so the
/// HTTP layer and the CLI can map it without string matching.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace cdtc
