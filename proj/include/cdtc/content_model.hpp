#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdtc {

// Declaration order is the canonical order used for tie-breaks and reports.
enum class ContentType { Fact, Concept, Procedure, Principle };
enum class PerformanceLevel { Remember, Use, Find };
enum class BloomLevel { Remembering, Understanding, Applying, Analyzing, Evaluating, Creating };

inline constexpr std::array<ContentType, 4> kContentTypes = {
    ContentType::Fact, ContentType::Concept, ContentType::Procedure, ContentType::Principle};
inline constexpr std::array<PerformanceLevel, 3> kPerformanceLevels = {
    PerformanceLevel::Remember, PerformanceLevel::Use, PerformanceLevel::Find};
inline constexpr std::array<BloomLevel, 6> kBloomLevels = {
    BloomLevel::Remembering, BloomLevel::Understanding, BloomLevel::Applying,
    BloomLevel::Analyzing,   BloomLevel::Evaluating,    BloomLevel::Creating};

std::string_view to_string(ContentType type);
std::string_view to_string(PerformanceLevel level);
std::string_view to_string(BloomLevel level);

std::optional<ContentType> parse_content_type(std::string_view text);
std::optional<PerformanceLevel> parse_performance_level(std::string_view text);

/// Facts have no abstract representation, so only remember-level work applies.
constexpr bool is_legal_cell(ContentType type, PerformanceLevel level) noexcept {
  return type != ContentType::Fact || level == PerformanceLevel::Remember;
}

/// A legal (content type, performance level) coordinate. The two illegal pairs
/// (fact/use, fact/find) cannot be constructed.
class MatrixCell {
public:
  ContentType content_type() const noexcept { return type_; }
  PerformanceLevel performance() const noexcept { return level_; }

  /// Position in legal_cells(), 0..9.
  std::size_t index() const noexcept;

  /// Lowercase "<type>/<level>", e.g. "concept/use".
  std::string name() const;

  friend bool operator==(const MatrixCell&, const MatrixCell&) = default;
  friend std::strong_ordering operator<=>(const MatrixCell& a, const MatrixCell& b) {
    if (auto c = a.type_ <=> b.type_; c != 0) return c;
    return a.level_ <=> b.level_;
  }

private:
  friend MatrixCell make_cell(ContentType, PerformanceLevel);
  friend std::optional<MatrixCell> try_make_cell(ContentType, PerformanceLevel) noexcept;
  constexpr MatrixCell(ContentType type, PerformanceLevel level) : type_(type), level_(level) {}

  ContentType type_;
  PerformanceLevel level_;
};

inline constexpr std::size_t kLegalCellCount = 10;

/// Throws Error{IllegalCell} for (Fact, Use) and (Fact, Find).
MatrixCell make_cell(ContentType type, PerformanceLevel level);
std::optional<MatrixCell> try_make_cell(ContentType type, PerformanceLevel level) noexcept;

/// Content type major, performance level minor.
const std::array<MatrixCell, kLegalCellCount>& legal_cells();

/// Inverse of MatrixCell::name().
std::optional<MatrixCell> parse_cell(std::string_view name);

/// Reporting-only correspondence between the three performance levels and the
/// six Bloom levels. Gating never consults it.
std::vector<BloomLevel> bloom_levels_of(PerformanceLevel level);

} // namespace cdtc
