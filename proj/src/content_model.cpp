#include "cdtc/content_model.hpp"

#include "cdtc/errors.hpp"

#include <string>
#include <utility>

namespace cdtc {

std::string_view to_string(ContentType type) {
  switch (type) {
    case ContentType::Fact: return "fact";
    case ContentType::Concept: return "concept";
    case ContentType::Procedure: return "procedure";
    case ContentType::Principle: return "principle";
  }
  return "?";
}

std::string_view to_string(PerformanceLevel level) {
  switch (level) {
    case PerformanceLevel::Remember: return "remember";
    case PerformanceLevel::Use: return "use";
    case PerformanceLevel::Find: return "find";
  }
  return "?";
}

std::string_view to_string(BloomLevel level) {
  switch (level) {
    case BloomLevel::Remembering: return "remembering";
    case BloomLevel::Understanding: return "understanding";
    case BloomLevel::Applying: return "applying";
    case BloomLevel::Analyzing: return "analyzing";
    case BloomLevel::Evaluating: return "evaluating";
    case BloomLevel::Creating: return "creating";
  }
  return "?";
}

std::optional<ContentType> parse_content_type(std::string_view text) {
  for (auto type : kContentTypes) {
    if (to_string(type) == text) return type;
  }
  return std::nullopt;
}

std::optional<PerformanceLevel> parse_performance_level(std::string_view text) {
  for (auto level : kPerformanceLevels) {
    if (to_string(level) == text) return level;
  }
  return std::nullopt;
}

std::size_t MatrixCell::index() const noexcept {
  // fact occupies one slot; every other type occupies three.
  if (type_ == ContentType::Fact) return 0;
  return 1 + (static_cast<std::size_t>(type_) - 1) * 3 + static_cast<std::size_t>(level_);
}

std::string MatrixCell::name() const {
  std::string out{to_string(type_)};
  out += '/';
  out += to_string(level_);
  return out;
}

std::optional<MatrixCell> try_make_cell(ContentType type, PerformanceLevel level) noexcept {
  if (!is_legal_cell(type, level)) return std::nullopt;
  return MatrixCell{type, level};
}

MatrixCell make_cell(ContentType type, PerformanceLevel level) {
  if (!is_legal_cell(type, level)) {
    throw Error(ErrorCode::IllegalCell, "illegal matrix cell " + std::string(to_string(type)) +
                                            "/" + std::string(to_string(level)) +
                                            ": facts admit only remember-level performance");
  }
  return MatrixCell{type, level};
}

const std::array<MatrixCell, kLegalCellCount>& legal_cells() {
  static const auto cells = [] {
    std::array<std::optional<MatrixCell>, kLegalCellCount> slots;
    std::size_t n = 0;
    for (auto type : kContentTypes) {
      for (auto level : kPerformanceLevels) {
        if (auto cell = try_make_cell(type, level)) slots[n++] = *cell;
      }
    }
    return [&]<std::size_t... I>(std::index_sequence<I...>) {
      return std::array<MatrixCell, kLegalCellCount>{*slots[I]...};
    }(std::make_index_sequence<kLegalCellCount>{});
  }();
  return cells;
}

std::optional<MatrixCell> parse_cell(std::string_view name) {
  auto slash = name.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto type = parse_content_type(name.substr(0, slash));
  auto level = parse_performance_level(name.substr(slash + 1));
  if (!type || !level) return std::nullopt;
  return try_make_cell(*type, *level);
}

std::vector<BloomLevel> bloom_levels_of(PerformanceLevel level) {
  switch (level) {
    case PerformanceLevel::Remember: return {BloomLevel::Remembering};
    case PerformanceLevel::Use: return {BloomLevel::Understanding, BloomLevel::Applying};
    case PerformanceLevel::Find:
      return {BloomLevel::Analyzing, BloomLevel::Evaluating, BloomLevel::Creating};
  }
  return {};
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IllegalCell: return "IllegalCell";
    case ErrorCode::ResponseShapeMismatch: return "ResponseShapeMismatch";
    case ErrorCode::NegativeElapsed: return "NegativeElapsed";
    case ErrorCode::ElapsedOutOfRange: return "ElapsedOutOfRange";
    case ErrorCode::ClockSkew: return "ClockSkew";
    case ErrorCode::UnknownCourse: return "UnknownCourse";
    case ErrorCode::UnknownModule: return "UnknownModule";
    case ErrorCode::SessionNotFound: return "SessionNotFound";
    case ErrorCode::ItemMismatch: return "ItemMismatch";
    case ErrorCode::ValidationErrorsPresent: return "ValidationErrorsPresent";
    case ErrorCode::SchemaUnsupported: return "SchemaUnsupported";
    case ErrorCode::HashMismatch: return "HashMismatch";
    case ErrorCode::MalformedPackage: return "MalformedPackage";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::CorruptProgress: return "CorruptProgress";
    case ErrorCode::InvalidId: return "InvalidId";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::MalformedRequest: return "MalformedRequest";
  }
  return "Unknown";
}

} // namespace cdtc
