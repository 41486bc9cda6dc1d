#pragma once

#include "cdtc/content_model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cdtc {

/// Conditions / behaviour / criteria triple. `given` is the fixed condition,
/// `arranged` the optional variable condition.
struct Objective {
  PerformanceLevel level = PerformanceLevel::Remember;
  std::string given;
  std::optional<std::string> arranged;
  std::string behavior;
  std::string criteria;

  friend bool operator==(const Objective&, const Objective&) = default;
};

enum class AssessmentKind { Mcq, Classify, Order, Task };

std::string_view to_string(AssessmentKind kind);
std::optional<AssessmentKind> parse_assessment_kind(std::string_view text);

struct McqOption {
  std::string text;
  bool correct = false;

  friend bool operator==(const McqOption&, const McqOption&) = default;
};

struct McqPayload {
  std::vector<McqOption> options;

  /// Index of the single correct option, or nullopt when zero or several are marked.
  std::optional<std::size_t> correct_index() const;

  friend bool operator==(const McqPayload&, const McqPayload&) = default;
};

struct ClassifyEntry {
  std::string text;
  std::string category;

  friend bool operator==(const ClassifyEntry&, const ClassifyEntry&) = default;
};

struct ClassifyPayload {
  std::vector<std::string> categories;
  std::vector<ClassifyEntry> entries;

  /// Index into `categories` of the entry's key, or nullopt if the key names no category.
  std::optional<std::size_t> category_index(const ClassifyEntry& entry) const;

  friend bool operator==(const ClassifyPayload&, const ClassifyPayload&) = default;
};

/// Steps are stored in their correct sequence.
struct OrderPayload {
  std::vector<std::string> steps;

  friend bool operator==(const OrderPayload&, const OrderPayload&) = default;
};

struct TaskPayload {
  friend bool operator==(const TaskPayload&, const TaskPayload&) = default;
};

using AssessmentPayload = std::variant<McqPayload, ClassifyPayload, OrderPayload, TaskPayload>;

inline constexpr int kDefaultTimeLimitSeconds = 60;
inline constexpr int kDefaultPenaltyIntervalSeconds = 10;
inline constexpr int kDefaultPenaltyPoints = 1;

struct AssessmentItem {
  std::string id;
  PerformanceLevel level = PerformanceLevel::Remember;
  std::string stem;
  AssessmentPayload payload = McqPayload{};
  int time_limit_seconds = kDefaultTimeLimitSeconds;
  int penalty_interval_seconds = kDefaultPenaltyIntervalSeconds;
  int penalty_points = kDefaultPenaltyPoints;

  AssessmentKind kind() const noexcept { return static_cast<AssessmentKind>(payload.index()); }
  bool is_timed() const noexcept {
    return kind() == AssessmentKind::Classify || kind() == AssessmentKind::Order;
  }

  friend bool operator==(const AssessmentItem&, const AssessmentItem&) = default;
};

struct ContentItem {
  std::string id;
  ContentType content_type = ContentType::Fact;
  std::string body;
  std::vector<Objective> objectives;
  std::vector<AssessmentItem> assessments;

  const AssessmentItem* find_assessment(std::string_view assessment_id) const;

  friend bool operator==(const ContentItem&, const ContentItem&) = default;
};

struct LearningModule {
  std::string id;
  std::string title;
  std::optional<int> ila_ref;
  std::vector<ContentItem> items;

  const ContentItem* find_item(std::string_view item_id) const;
  std::size_t assessment_count() const;
  bool has_level(PerformanceLevel level) const;

  friend bool operator==(const LearningModule&, const LearningModule&) = default;
};

struct Course {
  std::string id;
  std::string title;
  std::vector<LearningModule> modules;

  const LearningModule* find_module(std::string_view module_id) const;

  friend bool operator==(const Course&, const Course&) = default;
};

/// `[a-z][a-z0-9-]*`
bool is_identifier(std::string_view text);

inline constexpr int kMinIlaRef = 1;
inline constexpr int kMaxIlaRef = 21;

} // namespace cdtc
