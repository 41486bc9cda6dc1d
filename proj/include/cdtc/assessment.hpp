#pragma once

#include "cdtc/course.hpp"
#include "cdtc/progress.hpp"

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

namespace cdtc {

// Responses use the authored (canonical) indices; presentation shuffles are
// undone by the service before scoring.
struct McqResponse {
  std::size_t choice = 0;
};
/// Category index per entry, in entry order.
struct ClassifyResponse {
  std::vector<std::size_t> assignments;
};
/// Step index placed at each position.
struct OrderResponse {
  std::vector<std::size_t> sequence;
};
struct TaskResponse {
  bool confirmed = false;
};

using Response = std::variant<McqResponse, ClassifyResponse, OrderResponse, TaskResponse>;

/// Completed penalty intervals past the time limit, times the penalty points.
/// Zero for untimed kinds (mcq, task).
int time_penalty(const AssessmentItem& assessment, int elapsed_seconds);

/// Throws Error{ResponseShapeMismatch} or Error{NegativeElapsed}.
ScoreResult score(const AssessmentItem& assessment, const Response& response,
                  int elapsed_seconds);

/// Appends an attempt to the module's history. Throws Error{ClockSkew} when
/// `now` precedes the learner's last recorded attempt.
LearnerProgress record_attempt(LearnerProgress progress, std::string_view module_id,
                               const ContentItem& item, const AssessmentItem& assessment,
                               const ScoreResult& result, int elapsed_seconds, Timestamp now);

inline constexpr int kDefaultMasteryWindow = 5;

struct Mastery {
  int correct = 0;
  int counted = 0;

  double ratio() const { return counted == 0 ? 0.0 : static_cast<double>(correct) / counted; }
  /// `correct / counted >= threshold` with at least `min_attempts` counted.
  bool meets(double threshold, int min_attempts) const;

  friend bool operator==(const Mastery&, const Mastery&) = default;
};

/// Share of fully-correct attempts among the most recent `window` attempts at
/// `level` in the module.
Mastery mastery(const LearnerProgress& progress, std::string_view module_id,
                PerformanceLevel level, int window = kDefaultMasteryWindow);

/// Same window rule restricted to attempts at index >= `from_index`.
Mastery level_mastery(const ModuleProgress& module, PerformanceLevel level, int window,
                      std::size_t from_index = 0);

Mastery cell_mastery(const ModuleProgress& module, MatrixCell cell, int window);

} // namespace cdtc
