#include "cdtc/assessment.hpp"

#include "cdtc/errors.hpp"

#include <algorithm>
#include <string>

namespace cdtc {
namespace {

[[noreturn]] void shape_mismatch(const AssessmentItem& a, const std::string& detail) {
  throw Error(ErrorCode::ResponseShapeMismatch,
              "response does not fit " + std::string(to_string(a.kind())) + " assessment '" +
                  a.id + "': " + detail);
}

ScoreResult score_mcq(const AssessmentItem& a, const McqPayload& p, const Response& r) {
  const auto* resp = std::get_if<McqResponse>(&r);
  if (!resp) shape_mismatch(a, "expected an option choice");
  if (resp->choice >= p.options.size()) shape_mismatch(a, "choice out of range");
  ScoreResult s;
  s.max_points = 1;
  s.raw_points = p.options[resp->choice].correct ? 1 : 0;
  return s;
}

ScoreResult score_classify(const AssessmentItem& a, const ClassifyPayload& p, const Response& r) {
  const auto* resp = std::get_if<ClassifyResponse>(&r);
  if (!resp) shape_mismatch(a, "expected category assignments");
  if (resp->assignments.size() != p.entries.size()) {
    shape_mismatch(a, "expected " + std::to_string(p.entries.size()) + " assignments, got " +
                          std::to_string(resp->assignments.size()));
  }
  ScoreResult s;
  s.max_points = std::max<int>(1, static_cast<int>(p.entries.size()));
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    if (resp->assignments[i] >= p.categories.size()) shape_mismatch(a, "category out of range");
    if (p.category_index(p.entries[i]) == resp->assignments[i]) ++s.raw_points;
  }
  return s;
}

ScoreResult score_order(const AssessmentItem& a, const OrderPayload& p, const Response& r) {
  const auto* resp = std::get_if<OrderResponse>(&r);
  if (!resp) shape_mismatch(a, "expected a step sequence");
  const auto n = p.steps.size();
  if (resp->sequence.size() != n) shape_mismatch(a, "sequence length differs from step count");
  std::vector<bool> seen(n, false);
  for (auto step : resp->sequence) {
    if (step >= n || seen[step]) shape_mismatch(a, "sequence is not a permutation of the steps");
    seen[step] = true;
  }
  ScoreResult s;
  s.max_points = std::max<int>(1, static_cast<int>(n));
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (resp->sequence[pos] == pos) ++s.raw_points;
  }
  return s;
}

ScoreResult score_task(const AssessmentItem& a, const Response& r) {
  const auto* resp = std::get_if<TaskResponse>(&r);
  if (!resp) shape_mismatch(a, "expected a confirmation");
  ScoreResult s;
  s.max_points = 1;
  s.raw_points = resp->confirmed ? 1 : 0;
  return s;
}

} // namespace

int time_penalty(const AssessmentItem& assessment, int elapsed_seconds) {
  if (!assessment.is_timed()) return 0;
  int over = std::max(0, elapsed_seconds - assessment.time_limit_seconds);
  return (over / assessment.penalty_interval_seconds) * assessment.penalty_points;
}

ScoreResult score(const AssessmentItem& assessment, const Response& response,
                  int elapsed_seconds) {
  if (elapsed_seconds < 0) {
    throw Error(ErrorCode::NegativeElapsed,
                "elapsed_seconds must be non-negative, got " + std::to_string(elapsed_seconds));
  }
  ScoreResult s = std::visit(
      [&](const auto& payload) -> ScoreResult {
        using P = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<P, McqPayload>) return score_mcq(assessment, payload, response);
        if constexpr (std::is_same_v<P, ClassifyPayload>)
          return score_classify(assessment, payload, response);
        if constexpr (std::is_same_v<P, OrderPayload>)
          return score_order(assessment, payload, response);
        if constexpr (std::is_same_v<P, TaskPayload>) return score_task(assessment, response);
      },
      assessment.payload);
  s.time_penalty = time_penalty(assessment, elapsed_seconds);
  s.final_points = std::max(0, s.raw_points - s.time_penalty);
  s.correct = s.final_points == s.max_points;
  return s;
}

LearnerProgress record_attempt(LearnerProgress progress, std::string_view module_id,
                               const ContentItem& item, const AssessmentItem& assessment,
                               const ScoreResult& result, int elapsed_seconds, Timestamp now) {
  if (auto last = progress.last_timestamp(); last && now < *last) {
    throw Error(ErrorCode::ClockSkew, "attempt time " + std::to_string(now) +
                                          " precedes last recorded attempt at " +
                                          std::to_string(*last));
  }
  auto& module = progress.modules[std::string(module_id)];
  module.attempts.push_back(Attempt{item.id, assessment.id,
                                    make_cell(item.content_type, assessment.level), now,
                                    elapsed_seconds, result});
  return progress;
}

bool Mastery::meets(double threshold, int min_attempts) const {
  if (counted < min_attempts || counted == 0) return false;
  return static_cast<double>(correct) + 1e-9 >= threshold * counted;
}

namespace {

template <typename Pred>
Mastery window_mastery(const std::vector<Attempt>& attempts, int window, std::size_t from_index,
                       Pred&& matches) {
  Mastery m;
  for (std::size_t i = attempts.size(); i-- > from_index && m.counted < window;) {
    if (!matches(attempts[i])) continue;
    ++m.counted;
    if (attempts[i].result.correct) ++m.correct;
  }
  return m;
}

} // namespace

Mastery level_mastery(const ModuleProgress& module, PerformanceLevel level, int window,
                      std::size_t from_index) {
  return window_mastery(module.attempts, window, from_index,
                        [&](const Attempt& a) { return a.cell.performance() == level; });
}

Mastery cell_mastery(const ModuleProgress& module, MatrixCell cell, int window) {
  return window_mastery(module.attempts, window, 0,
                        [&](const Attempt& a) { return a.cell == cell; });
}

Mastery mastery(const LearnerProgress& progress, std::string_view module_id,
                PerformanceLevel level, int window) {
  auto it = progress.modules.find(std::string(module_id));
  if (it == progress.modules.end()) return {};
  return level_mastery(it->second, level, window);
}

std::optional<Timestamp> LearnerProgress::last_timestamp() const {
  std::optional<Timestamp> last;
  for (const auto& [id, m] : modules) {
    if (!m.attempts.empty()) {
      Timestamp t = m.attempts.back().timestamp;
      if (!last || t > *last) last = t;
    }
  }
  return last;
}

std::size_t LearnerProgress::attempt_count() const {
  std::size_t n = 0;
  for (const auto& [id, m] : modules) n += m.attempts.size();
  return n;
}

std::string_view to_string(GateState state) {
  switch (state) {
    case GateState::Locked: return "locked";
    case GateState::Unlocked: return "unlocked";
    case GateState::Mastered: return "mastered";
  }
  return "?";
}

std::optional<GateState> parse_gate_state(std::string_view text) {
  for (auto s : {GateState::Locked, GateState::Unlocked, GateState::Mastered}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

} // namespace cdtc
