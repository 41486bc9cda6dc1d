#pragma once

#include "cdtc/course.hpp"
#include "cdtc/diagnostics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdtc {

struct ParseResult {
  /// Present iff no Error-severity diagnostic was produced.
  std::optional<Course> course;
  std::vector<Diagnostic> diagnostics;
  SourceMap source_map;
};

/// Parses `.cdtc` course text. Never throws on malformed input; every problem
/// becomes a positioned diagnostic, and parsing resumes after the enclosing
/// block so several errors are reported per run.
ParseResult parse_course(std::string_view text);

/// Canonical text: 2-space indentation, grammar field order, LF endings, one
/// trailing newline, no comments or blank lines. Optional fields at their
/// default value are omitted.
std::string render_canonical(const Course& course);

/// Double-quoted DSL string literal with `\"` and `\\` escapes.
std::string quote_dsl_string(std::string_view text);

} // namespace cdtc
