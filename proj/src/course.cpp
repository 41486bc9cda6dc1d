#include "cdtc/course.hpp"

#include <algorithm>

namespace cdtc {

std::string_view to_string(AssessmentKind kind) {
  switch (kind) {
    case AssessmentKind::Mcq: return "mcq";
    case AssessmentKind::Classify: return "classify";
    case AssessmentKind::Order: return "order";
    case AssessmentKind::Task: return "task";
  }
  return "?";
}

std::optional<AssessmentKind> parse_assessment_kind(std::string_view text) {
  for (auto kind : {AssessmentKind::Mcq, AssessmentKind::Classify, AssessmentKind::Order,
                    AssessmentKind::Task}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

std::optional<std::size_t> McqPayload::correct_index() const {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (!options[i].correct) continue;
    if (found) return std::nullopt;
    found = i;
  }
  return found;
}

std::optional<std::size_t> ClassifyPayload::category_index(const ClassifyEntry& entry) const {
  auto it = std::find(categories.begin(), categories.end(), entry.category);
  if (it == categories.end()) return std::nullopt;
  return static_cast<std::size_t>(it - categories.begin());
}

const AssessmentItem* ContentItem::find_assessment(std::string_view assessment_id) const {
  for (const auto& a : assessments) {
    if (a.id == assessment_id) return &a;
  }
  return nullptr;
}

const ContentItem* LearningModule::find_item(std::string_view item_id) const {
  for (const auto& item : items) {
    if (item.id == item_id) return &item;
  }
  return nullptr;
}

std::size_t LearningModule::assessment_count() const {
  std::size_t n = 0;
  for (const auto& item : items) n += item.assessments.size();
  return n;
}

bool LearningModule::has_level(PerformanceLevel level) const {
  for (const auto& item : items) {
    for (const auto& a : item.assessments) {
      if (a.level == level && is_legal_cell(item.content_type, level)) return true;
    }
  }
  return false;
}

const LearningModule* Course::find_module(std::string_view module_id) const {
  for (const auto& m : modules) {
    if (m.id == module_id) return &m;
  }
  return nullptr;
}

bool is_identifier(std::string_view text) {
  if (text.empty() || text[0] < 'a' || text[0] > 'z') return false;
  return std::all_of(text.begin() + 1, text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
  });
}

} // namespace cdtc
