#pragma once

#include "cdtc/assessment.hpp"
#include "cdtc/course.hpp"
#include "cdtc/progress.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cdtc {

struct SequencerConfig {
  double mastery_threshold = 0.8;
  int min_attempts = 3;
  int mastery_window = kDefaultMasteryWindow;
  /// Refresher intervals in seconds; index 0 is used after first mastery and
  /// after a failed review.
  std::vector<Timestamp> refresher_ladder = {1 * kSecondsPerDay, 7 * kSecondsPerDay,
                                             30 * kSecondsPerDay};
};

/// Throws Error{InvalidConfig} on a threshold outside (0, 1], non-positive
/// attempt counts or an empty/non-positive ladder.
void check_config(const SequencerConfig& config);

/// Levels the learner may currently work at (Unlocked or Mastered). A level
/// without assessments in the module is never included; Use requires
/// Remember mastery, Find requires Use mastery.
std::set<PerformanceLevel> unlocked_levels(const LearnerProgress& progress,
                                           const LearningModule& module, double threshold,
                                           int min_attempts,
                                           int window = kDefaultMasteryWindow);

/// Refresher ladder step. First mastery or a passed review moves one rung up
/// (capped at the top); a failed review drops to rung 0 and the level's gate
/// reverts from Mastered to Unlocked, restarting its mastery window.
void on_mastery_event(ModuleProgress& module, PerformanceLevel level, bool passed, Timestamp now,
                      const SequencerConfig& config);

/// Pure ladder arithmetic behind on_mastery_event.
RefresherEntry next_refresher(const std::optional<RefresherEntry>& current, bool passed,
                              Timestamp now, const std::vector<Timestamp>& ladder);

/// Brings gate states up to date after new attempts: Locked levels unlock
/// once the level below is Mastered, Unlocked levels become Mastered once
/// their mastery meets the threshold (scheduling the first refresher).
/// Returns the levels that became Mastered.
std::vector<PerformanceLevel> update_gates(ModuleProgress& module, const LearningModule& content,
                                           const SequencerConfig& config, Timestamp now);

/// Records a scored answer to a served decision, then advances the refresher
/// schedule (for refresher items) and the gates. Returns the levels that
/// became Mastered. Throws Error{ClockSkew} like record_attempt.
std::vector<PerformanceLevel> apply_outcome(LearnerProgress& progress, const LearningModule& module,
                                            const ContentItem& item,
                                            const AssessmentItem& assessment, bool refresher,
                                            const ScoreResult& result, int elapsed_seconds,
                                            Timestamp now, const SequencerConfig& config);

using ReviewRef = std::pair<std::string, PerformanceLevel>;

/// Mastered levels whose refresher is due at or before `now`, ordered by
/// due time, then module id, then level.
std::vector<ReviewRef> due_reviews(const LearnerProgress& progress, Timestamp now);

struct ServedRef {
  std::string item_id;
  std::string assessment_id;

  friend bool operator==(const ServedRef&, const ServedRef&) = default;
};

struct SessionState {
  std::string learner_id;
  std::string course_id;
  std::string module_id;
  std::uint64_t rng_seed = 0;
  std::vector<ServedRef> served_items;
};

struct ItemDecision {
  std::string item_id;
  std::string assessment_id;
  MatrixCell cell;
  bool refresher = false;
  /// First time the learner meets this cell: show the item body before the exercise.
  bool show_demonstration = false;
  /// Presented position -> authored index, for mcq options, classify entries
  /// or order steps. Empty for tasks.
  std::vector<std::size_t> presentation;

  friend bool operator==(const ItemDecision&, const ItemDecision&) = default;
};

struct GatedDecision {
  PerformanceLevel level;
  PerformanceLevel prerequisite;
  double needed_ratio = 0.0;
  int needed_attempts = 0;
  Mastery current;

  friend bool operator==(const GatedDecision&, const GatedDecision&) = default;
};

struct CompleteDecision {
  std::optional<Timestamp> next_refresher_due;

  friend bool operator==(const CompleteDecision&, const CompleteDecision&) = default;
};

using Decision = std::variant<ItemDecision, GatedDecision, CompleteDecision>;

/// Picks what the learner sees next: due refreshers first, then the
/// least-mastered cell among unlocked, not-yet-mastered levels. Ties break by
/// content type, level, item id, assessment id; the previous served item is
/// skipped when another candidate exists. Presentation order is drawn from
/// SplitMix64(rng_seed + served count). Throws Error{UnknownModule}.
Decision next_item(const SessionState& session, const Course& course,
                   const LearnerProgress& progress, const SequencerConfig& config, Timestamp now);

} // namespace cdtc
