#pragma once

#include "cdtc/assessment.hpp"
#include "cdtc/course.hpp"
#include "cdtc/sequencer.hpp"

#include <nlohmann/json.hpp>

namespace cdtc::testing {

/// A response in authored indices that scores full marks, or one that
/// deliberately loses at least one point.
Response scripted_response(const AssessmentItem& assessment, bool correct);

/// Presented-position response for an item decision returned by the
/// service. Matches presented texts against the course, so the texts of
/// options, entries and steps must be distinct within an assessment.
nlohmann::json presented_response(const Course& course, const nlohmann::json& decision,
                                  bool correct);

/// Drives the sequencer the way the service does, in memory.
class SequencerDriver {
public:
  SequencerDriver(const Course& course, const std::string& module_id, SequencerConfig config,
                  std::uint64_t seed, Timestamp start);

  /// next_item at the current time; item decisions are recorded as served.
  Decision decide();
  /// Scores a scripted answer to `served` and applies it.
  ScoreResult answer(const ItemDecision& served, bool correct, int elapsed_seconds);
  void advance(Timestamp seconds) { now += seconds; }

  const LearningModule& module() const { return *module_; }
  const AssessmentItem& assessment(const ItemDecision& d) const;

  const Course& course;
  SequencerConfig config;
  LearnerProgress progress;
  SessionState session;
  Timestamp now;

private:
  const LearningModule* module_;
};

} // namespace cdtc::testing
