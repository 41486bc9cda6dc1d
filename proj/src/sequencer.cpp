#include "cdtc/sequencer.hpp"

#include "cdtc/errors.hpp"
#include "cdtc/rng.hpp"

#include <algorithm>
#include <tuple>

namespace cdtc {
namespace {

PerformanceLevel level_below(PerformanceLevel level) {
  return static_cast<PerformanceLevel>(static_cast<int>(level) - 1);
}

Mastery gate_mastery(const ModuleProgress& mp, PerformanceLevel level, int window) {
  return level_mastery(mp, level, window, mp.level(level).epoch_start);
}

struct Candidate {
  const ContentItem* item;
  const AssessmentItem* assessment;
  MatrixCell cell;
  Mastery mastery;
};

// Exact comparison of correct/counted ratios; an empty window counts as 0.
bool ratio_less(const Mastery& a, const Mastery& b) {
  long long lhs = static_cast<long long>(a.correct) * std::max(b.counted, 1);
  long long rhs = static_cast<long long>(b.correct) * std::max(a.counted, 1);
  return lhs < rhs;
}

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (ratio_less(a.mastery, b.mastery)) return true;
  if (ratio_less(b.mastery, a.mastery)) return false;
  return std::tie(a.cell, a.item->id, a.assessment->id) <
         std::tie(b.cell, b.item->id, b.assessment->id);
}

std::size_t presentation_size(const AssessmentItem& a) {
  return std::visit(
      [](const auto& p) -> std::size_t {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, McqPayload>) return p.options.size();
        if constexpr (std::is_same_v<P, ClassifyPayload>) return p.entries.size();
        if constexpr (std::is_same_v<P, OrderPayload>) return p.steps.size();
        return 0;
      },
      a.payload);
}

} // namespace

void check_config(const SequencerConfig& config) {
  if (!(config.mastery_threshold > 0.0 && config.mastery_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "mastery threshold must be in (0, 1]");
  }
  if (config.min_attempts < 1) throw Error(ErrorCode::InvalidConfig, "min attempts must be >= 1");
  if (config.mastery_window < 1) {
    throw Error(ErrorCode::InvalidConfig, "mastery window must be >= 1");
  }
  if (config.refresher_ladder.empty()) {
    throw Error(ErrorCode::InvalidConfig, "refresher ladder must not be empty");
  }
  for (auto step : config.refresher_ladder) {
    if (step <= 0) throw Error(ErrorCode::InvalidConfig, "refresher intervals must be positive");
  }
}

std::set<PerformanceLevel> unlocked_levels(const LearnerProgress& progress,
                                           const LearningModule& module, double threshold,
                                           int min_attempts, int window) {
  ModuleProgress fresh;
  auto it = progress.modules.find(module.id);
  const ModuleProgress& mp = it == progress.modules.end() ? fresh : it->second;

  std::set<PerformanceLevel> out;
  for (auto level : kPerformanceLevels) {
    if (!module.has_level(level)) continue;
    bool open = level == PerformanceLevel::Remember || mp.level(level).gate != GateState::Locked;
    if (!open) {
      auto below = level_below(level);
      open = mp.level(below).gate == GateState::Mastered ||
             gate_mastery(mp, below, window).meets(threshold, min_attempts);
    }
    if (open) out.insert(level);
  }
  return out;
}

RefresherEntry next_refresher(const std::optional<RefresherEntry>& current, bool passed,
                              Timestamp now, const std::vector<Timestamp>& ladder) {
  if (!passed || !current) return {now + ladder.front(), 0};
  int top = static_cast<int>(ladder.size()) - 1;
  int index = std::min(current->interval_index + 1, top);
  return {now + ladder[static_cast<std::size_t>(index)], index};
}

void on_mastery_event(ModuleProgress& module, PerformanceLevel level, bool passed, Timestamp now,
                      const SequencerConfig& config) {
  auto& lp = module.level(level);
  if (lp.gate != GateState::Mastered) {
    if (!passed) return;
    lp.gate = GateState::Mastered;
    lp.refresher = next_refresher(std::nullopt, true, now, config.refresher_ladder);
    return;
  }
  lp.refresher = next_refresher(lp.refresher, passed, now, config.refresher_ladder);
  if (!passed) {
    lp.gate = GateState::Unlocked;
    lp.epoch_start = module.attempts.size();
  }
}

std::vector<PerformanceLevel> update_gates(ModuleProgress& module, const LearningModule& content,
                                           const SequencerConfig& config, Timestamp now) {
  std::vector<PerformanceLevel> newly_mastered;
  for (auto level : kPerformanceLevels) {
    auto& lp = module.level(level);
    if (lp.gate == GateState::Locked) {
      if (level == PerformanceLevel::Remember ||
          module.level(level_below(level)).gate == GateState::Mastered) {
        lp.gate = GateState::Unlocked;
      }
    }
    if (lp.gate == GateState::Unlocked && content.has_level(level) &&
        gate_mastery(module, level, config.mastery_window)
            .meets(config.mastery_threshold, config.min_attempts)) {
      on_mastery_event(module, level, true, now, config);
      newly_mastered.push_back(level);
    }
  }
  return newly_mastered;
}

std::vector<PerformanceLevel> apply_outcome(LearnerProgress& progress, const LearningModule& module,
                                            const ContentItem& item,
                                            const AssessmentItem& assessment, bool refresher,
                                            const ScoreResult& result, int elapsed_seconds,
                                            Timestamp now, const SequencerConfig& config) {
  progress = record_attempt(std::move(progress), module.id, item, assessment, result,
                            elapsed_seconds, now);
  auto& mp = progress.modules[module.id];
  if (refresher) on_mastery_event(mp, assessment.level, result.correct, now, config);
  return update_gates(mp, module, config, now);
}

std::vector<ReviewRef> due_reviews(const LearnerProgress& progress, Timestamp now) {
  std::vector<std::tuple<Timestamp, std::string, PerformanceLevel>> due;
  for (const auto& [module_id, mp] : progress.modules) {
    for (auto level : kPerformanceLevels) {
      const auto& lp = mp.level(level);
      if (lp.gate == GateState::Mastered && lp.refresher && lp.refresher->due_at <= now) {
        due.emplace_back(lp.refresher->due_at, module_id, level);
      }
    }
  }
  std::sort(due.begin(), due.end());
  std::vector<ReviewRef> out;
  out.reserve(due.size());
  for (auto& [at, id, level] : due) out.emplace_back(std::move(id), level);
  return out;
}

Decision next_item(const SessionState& session, const Course& course,
                   const LearnerProgress& progress, const SequencerConfig& config, Timestamp now) {
  const LearningModule* module = course.find_module(session.module_id);
  if (!module) {
    throw Error(ErrorCode::UnknownModule, "unknown module '" + session.module_id + "'");
  }
  ModuleProgress mp;
  if (auto it = progress.modules.find(module->id); it != progress.modules.end()) mp = it->second;
  update_gates(mp, *module, config, now);

  std::optional<PerformanceLevel> review_level;
  Timestamp review_due = 0;
  for (auto level : kPerformanceLevels) {
    const auto& lp = mp.level(level);
    if (lp.gate != GateState::Mastered || !lp.refresher || lp.refresher->due_at > now) continue;
    if (!module->has_level(level)) continue;
    if (!review_level || lp.refresher->due_at < review_due) {
      review_level = level;
      review_due = lp.refresher->due_at;
    }
  }

  auto eligible = [&](PerformanceLevel level) {
    if (review_level) return level == *review_level;
    return mp.level(level).gate == GateState::Unlocked;
  };

  std::vector<Candidate> candidates;
  for (const auto& item : module->items) {
    for (const auto& a : item.assessments) {
      auto cell = try_make_cell(item.content_type, a.level);
      if (!cell || !eligible(a.level)) continue;
      candidates.push_back({&item, &a, *cell, cell_mastery(mp, *cell, config.mastery_window)});
    }
  }

  if (candidates.empty()) {
    std::optional<PerformanceLevel> locked;
    std::optional<Timestamp> next_due;
    for (auto level : kPerformanceLevels) {
      if (!module->has_level(level)) continue;
      const auto& lp = mp.level(level);
      if (lp.gate != GateState::Mastered && !locked) locked = level;
      if (lp.refresher && (!next_due || lp.refresher->due_at < *next_due)) {
        next_due = lp.refresher->due_at;
      }
    }
    if (!locked) return CompleteDecision{next_due};
    // Remember is never locked, so a blocked level always has one below it.
    auto below = level_below(*locked);
    return GatedDecision{*locked, below, config.mastery_threshold, config.min_attempts,
                         gate_mastery(mp, below, config.mastery_window)};
  }

  std::sort(candidates.begin(), candidates.end(), candidate_less);
  const Candidate* pick = &candidates.front();
  if (candidates.size() > 1 && !session.served_items.empty()) {
    const auto& last = session.served_items.back();
    if (last.item_id == pick->item->id && last.assessment_id == pick->assessment->id) {
      pick = &candidates[1];
    }
  }

  ItemDecision decision{pick->item->id, pick->assessment->id, pick->cell, review_level.has_value(),
                        false, {}};
  decision.show_demonstration =
      std::none_of(mp.attempts.begin(), mp.attempts.end(),
                   [&](const Attempt& a) { return a.cell == pick->cell; });
  decision.presentation =
      shuffled_indices(presentation_size(*pick->assessment),
                       session.rng_seed + static_cast<std::uint64_t>(session.served_items.size()));
  return decision;
}

} // namespace cdtc
