#pragma once

#include "cdtc/content_model.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cdtc {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

struct ScoreResult {
  int raw_points = 0;
  int max_points = 1;
  int time_penalty = 0;
  int final_points = 0;
  bool correct = false; // final_points == max_points

  friend bool operator==(const ScoreResult&, const ScoreResult&) = default;
};

struct Attempt {
  std::string item_id;
  std::string assessment_id;
  MatrixCell cell;
  Timestamp timestamp = 0;
  int elapsed_seconds = 0;
  ScoreResult result;

  friend bool operator==(const Attempt&, const Attempt&) = default;
};

enum class GateState { Locked, Unlocked, Mastered };

std::string_view to_string(GateState state);
std::optional<GateState> parse_gate_state(std::string_view text);

struct RefresherEntry {
  Timestamp due_at = 0;
  int interval_index = 0;

  friend bool operator==(const RefresherEntry&, const RefresherEntry&) = default;
};

struct LevelProgress {
  GateState gate = GateState::Locked;
  std::optional<RefresherEntry> refresher;
  /// Attempts before this index do not count toward re-earning the gate after
  /// a failed refresher.
  std::size_t epoch_start = 0;

  friend bool operator==(const LevelProgress&, const LevelProgress&) = default;
};

struct ModuleProgress {
  std::vector<Attempt> attempts;
  std::array<LevelProgress, 3> levels{{{GateState::Unlocked, std::nullopt, 0}, {}, {}}};
  std::vector<std::uint64_t> session_seeds;

  LevelProgress& level(PerformanceLevel l) { return levels[static_cast<std::size_t>(l)]; }
  const LevelProgress& level(PerformanceLevel l) const {
    return levels[static_cast<std::size_t>(l)];
  }

  friend bool operator==(const ModuleProgress&, const ModuleProgress&) = default;
};

struct LearnerProgress {
  std::string learner_id;
  std::map<std::string, ModuleProgress> modules;

  /// Latest attempt timestamp across every module, if any.
  std::optional<Timestamp> last_timestamp() const;
  std::size_t attempt_count() const;

  friend bool operator==(const LearnerProgress&, const LearnerProgress&) = default;
};

} // namespace cdtc
