#include "cdtc/objectives.hpp"

#include <algorithm>

namespace cdtc {

std::string render_objective(const ContentItem& /*item*/, const Objective& objective,
                             std::string_view audience_noun) {
  std::string out = "Given " + objective.given;
  if (objective.arranged) out += " arranged in " + *objective.arranged;
  out += ", the ";
  out += audience_noun;
  out += " will be able to " + objective.behavior + ", " + objective.criteria + ".";
  return out;
}

std::vector<AssessmentKind> assessment_blueprint(MatrixCell cell) {
  using K = AssessmentKind;
  switch (cell.performance()) {
    case PerformanceLevel::Remember:
      if (cell.content_type() == ContentType::Fact) return {K::Mcq};
      return {K::Mcq, K::Order};
    case PerformanceLevel::Use: return {K::Mcq, K::Classify, K::Order};
    case PerformanceLevel::Find: return {K::Classify, K::Task};
  }
  return {};
}

bool blueprint_admits(MatrixCell cell, AssessmentKind kind) {
  auto kinds = assessment_blueprint(cell);
  return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

} // namespace cdtc
