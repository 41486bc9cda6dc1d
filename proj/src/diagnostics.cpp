#include "cdtc/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace cdtc {

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.is_error(); });
}

std::string format_diagnostic(const Diagnostic& diagnostic, std::string_view file_name) {
  std::ostringstream out;
  out << file_name << ':';
  if (diagnostic.span) out << diagnostic.span->line << ':' << diagnostic.span->column << ':';
  out << ' ' << (diagnostic.is_error() ? "error" : "warning") << ' ' << diagnostic.code << ": "
      << diagnostic.message;
  return out.str();
}

std::ostream& operator<<(std::ostream& os, const Diagnostic& diagnostic) {
  return os << format_diagnostic(diagnostic, "<input>");
}

} // namespace cdtc
