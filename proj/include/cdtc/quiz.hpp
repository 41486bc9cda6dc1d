#pragma once

#include "cdtc/service.hpp"

#include <functional>
#include <iosfwd>
#include <string>

namespace cdtc {

struct QuizOptions {
  /// Seconds since an arbitrary origin; defaults to a steady clock. Elapsed
  /// time per item is the difference between prompt and answer.
  std::function<double()> stopwatch;
};

/// Interactive session on a terminal. Reads one answer per line:
///   mcq       option number, e.g. "2"
///   classify  one category number per entry, e.g. "1 2 2 1"
///   order     step numbers in the chosen order, e.g. "3 1 2 5 4"
///   task      "y" or "n"
/// "q" or end of input stops the session. Returns the number of answers
/// recorded.
int run_quiz(Service& service, const std::string& learner_id, const std::string& module_id,
             std::istream& in, std::ostream& out, QuizOptions options = {});

} // namespace cdtc
