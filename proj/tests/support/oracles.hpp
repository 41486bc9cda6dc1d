#pragma once

// Reference implementations written independently of the library: they work
// on names instead of indices and count penalties by stepping through time.

#include "cdtc/course.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace cdtc::testing {

inline int oracle_penalty(int elapsed, int limit, int interval, int points) {
  int penalty = 0;
  for (int t = limit + interval; t <= elapsed; t += interval) penalty += points;
  return penalty;
}

/// `chosen[k]` is the category name the learner gave entry k.
inline int oracle_classify_raw(const ClassifyPayload& p, const std::vector<std::string>& chosen) {
  int raw = 0;
  for (std::size_t k = 0; k < p.entries.size(); ++k) {
    if (chosen[k] == p.entries[k].category) ++raw;
  }
  return raw;
}

/// `placed[pos]` is the step text the learner put at `pos`; steps must be
/// distinct.
inline int oracle_order_raw(const OrderPayload& p, const std::vector<std::string>& placed) {
  int raw = 0;
  for (std::size_t pos = 0; pos < placed.size(); ++pos) {
    if (placed[pos] == p.steps[pos]) ++raw;
  }
  return raw;
}

inline int oracle_final(int raw, int penalty) { return std::max(0, raw - penalty); }

} // namespace cdtc::testing

#include "cdtc/progress.hpp"

#include <cmath>
#include <deque>

namespace cdtc::testing {

/// Whether the `window` most recent attempts at `level` met the threshold at
/// any point in `attempts`. Once this holds for level L, level L+1 may be
/// served from then on.
inline bool ever_mastered(const std::vector<Attempt>& attempts, PerformanceLevel level,
                          double threshold, int min_attempts, int window) {
  std::deque<bool> recent;
  for (const auto& a : attempts) {
    if (a.cell.performance() != level) continue;
    recent.push_back(a.result.correct);
    if (static_cast<int>(recent.size()) > window) recent.pop_front();
    int correct = static_cast<int>(std::count(recent.begin(), recent.end(), true));
    int counted = static_cast<int>(recent.size());
    if (counted >= min_attempts && correct * 100 >= static_cast<int>(std::lround(threshold * 100)) * counted) {
      return true;
    }
  }
  return false;
}

} // namespace cdtc::testing
