#pragma once

#include "cdtc/course.hpp"
#include "cdtc/diagnostics.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cdtc {

/// Pedagogical checks over a parsed course. Output is ordered by module, then
/// item (module-level findings first), then rule code. Spans are attached when
/// a source map from the parser is supplied.
std::vector<Diagnostic> validate(const Course& course, const SourceMap* source_map = nullptr);

/// Assessment count per legal cell for one module.
struct CoverageMatrix {
  std::array<std::size_t, kLegalCellCount> counts{};

  std::size_t count(MatrixCell cell) const { return counts[cell.index()]; }
  std::size_t total() const;

  friend bool operator==(const CoverageMatrix&, const CoverageMatrix&) = default;
};

CoverageMatrix coverage_matrix(const LearningModule& module);

/// An (item, cell) the item's type admits, at or below the highest level the
/// module exercises anywhere, that has no assessment.
struct Gap {
  std::string module_id;
  std::string item_id;
  MatrixCell cell;
  std::string reason;

  friend bool operator==(const Gap&, const Gap&) = default;
};

std::vector<Gap> gap_report(const Course& course);

/// Text table per module (10 rows, one per legal cell) followed by its gaps.
std::string render_report_text(const Course& course);

/// One object per module: `module_id`, `counts` (cell name -> count, in
/// legal_cells() order), `gaps`.
nlohmann::ordered_json render_report_json(const Course& course);

} // namespace cdtc
