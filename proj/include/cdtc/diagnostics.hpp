#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cdtc {

/// 1-based line and column, both counted in Unicode code points; length is
/// also in code points.
struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::optional<SourceSpan> span;

  bool is_error() const noexcept { return severity == Severity::Error; }

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// Rule codes. Parser and validator share the E0xx range; W1xx are pedagogical
// warnings, W2xx structural ones.
namespace codes {
inline constexpr std::string_view kIllegalCell = "E001";
inline constexpr std::string_view kBadMcq = "E002";
inline constexpr std::string_view kBadSequenceOrSort = "E003";
inline constexpr std::string_view kDuplicateId = "E004";
inline constexpr std::string_view kIncompleteObjective = "E005";
inline constexpr std::string_view kUnknownCategory = "E006";
inline constexpr std::string_view kSyntax = "E010";
inline constexpr std::string_view kBadString = "E011";
inline constexpr std::string_view kUnbalancedBraces = "E012";
inline constexpr std::string_view kUnknownKeyword = "E013";
inline constexpr std::string_view kInvalidValue = "E014";
inline constexpr std::string_view kMissingField = "E015";
inline constexpr std::string_view kDuplicateField = "E016";
inline constexpr std::string_view kUnexpectedCharacter = "E017";
inline constexpr std::string_view kRememberWithoutUse = "W101";
inline constexpr std::string_view kAssessmentWithoutObjective = "W102";
inline constexpr std::string_view kKindOutsideBlueprint = "W103";
inline constexpr std::string_view kUnreachableLevel = "W104";
inline constexpr std::string_view kEmptyModule = "W201";
inline constexpr std::string_view kIgnoredMeta = "W202";
} // namespace codes

/// Where each course element was declared, keyed by element path:
/// "<module>", "<module>/<item>", "<module>/<item>/<assessment>" and
/// "<module>/<item>/objective#<n>".
using SourceMap = std::map<std::string, SourceSpan>;

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// `file:line:col: error E001: message` (position omitted for whole-file diagnostics).
std::string format_diagnostic(const Diagnostic& diagnostic, std::string_view file_name);

std::ostream& operator<<(std::ostream& os, const Diagnostic& diagnostic);

} // namespace cdtc
