#include "cdtc/quiz.hpp"

#include "cdtc/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace cdtc {

using nlohmann::json;

namespace {

void print_item(const json& d, std::ostream& out) {
  out << "\n[" << d.at("cell").get<std::string>() << "] " << d.at("item_id").get<std::string>();
  if (d.at("refresher").get<bool>()) out << " (refresher)";
  out << '\n';
  if (d.contains("demonstration")) {
    out << "\n  " << d.at("demonstration").get<std::string>() << "\n\n";
  }
  out << d.at("stem").get<std::string>() << '\n';
  const std::string kind = d.at("kind");
  auto numbered = [&](const json& list) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      out << "  " << i + 1 << ". " << list[i].get<std::string>() << '\n';
    }
  };
  if (kind == "mcq") {
    numbered(d.at("options"));
    out << "Choose one number.\n";
  } else if (kind == "classify") {
    out << "Categories:\n";
    numbered(d.at("categories"));
    out << "Entries:\n";
    numbered(d.at("entries"));
    out << "Give a category number for each entry, in order.\n";
  } else if (kind == "order") {
    numbered(d.at("steps"));
    out << "List the step numbers in the correct order.\n";
  } else {
    out << "Did you complete the task? (y/n)\n";
  }
  if (d.contains("time_limit")) {
    out << "Time limit " << d.at("time_limit").get<int>() << "s; "
        << d.at("penalty_points").get<int>() << " point(s) off per "
        << d.at("penalty_interval").get<int>() << "s over.\n";
  }
}

std::vector<int> numbers(const std::string& line) {
  std::istringstream in(line);
  std::vector<int> out;
  int n = 0;
  while (in >> n) out.push_back(n);
  if (!in.eof()) throw Error(ErrorCode::MalformedRequest, "expected numbers separated by spaces");
  return out;
}

json to_response(const std::string& kind, const std::string& line) {
  if (kind == "task") {
    if (line == "y" || line == "Y") return {{"confirmed", true}};
    if (line == "n" || line == "N") return {{"confirmed", false}};
    throw Error(ErrorCode::MalformedRequest, "answer y or n");
  }
  json zero_based = json::array();
  for (int n : numbers(line)) zero_based.push_back(n - 1);
  if (kind == "mcq") {
    if (zero_based.size() != 1) throw Error(ErrorCode::MalformedRequest, "give a single number");
    return {{"choice", zero_based[0]}};
  }
  if (kind == "classify") return {{"assignments", zero_based}};
  return {{"order", zero_based}};
}

void print_feedback(const json& fb, std::ostream& out) {
  const auto& s = fb.at("score");
  out << "Score " << s.at("final_points").get<int>() << "/" << s.at("max_points").get<int>();
  if (int penalty = s.at("time_penalty").get<int>(); penalty > 0) {
    out << " (" << penalty << " off for time)";
  }
  out << (s.at("correct").get<bool>() ? "  correct" : "  not yet") << '\n';
  const auto& m = fb.at("mastery");
  const auto& after = m.at("level_after");
  out << m.at("level").get<std::string>() << " mastery " << after.at("correct").get<int>() << "/"
      << after.at("counted").get<int>() << '\n';
  for (const auto& level : m.at("newly_mastered")) {
    out << "Mastered " << level.get<std::string>() << "!\n";
  }
}

} // namespace

int run_quiz(Service& service, const std::string& learner_id, const std::string& module_id,
             std::istream& in, std::ostream& out, QuizOptions options) {
  if (!options.stopwatch) {
    options.stopwatch = [] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
          .count();
    };
  }
  json started = service.start_session(learner_id, service.course().id, module_id);
  const std::string session_id = started.at("session_id");
  json decision = started.at("decision");
  int answered = 0;

  while (true) {
    const std::string type = decision.at("type");
    if (type == "complete") {
      out << "\nModule complete.";
      if (!decision.at("next_refresher_due").is_null()) {
        out << " Next review due at " << decision.at("next_refresher_due").get<Timestamp>() << '.';
      }
      out << '\n';
      return answered;
    }
    if (type == "gated") {
      const auto& needed = decision.at("needed");
      const auto& current = decision.at("current");
      out << "\n" << decision.at("level").get<std::string>() << " is locked: master "
          << needed.at("level").get<std::string>() << " first (" << current.at("correct").get<int>()
          << "/" << current.at("counted").get<int>() << " so far, need "
          << std::lround(needed.at("ratio").get<double>() * 100) << "% over at least "
          << needed.at("min_attempts").get<int>() << " attempts).\n";
      return answered;
    }

    print_item(decision, out);
    const double shown = options.stopwatch();
    std::string line;
    while (true) {
      out << "> " << std::flush;
      if (!std::getline(in, line) || line == "q") {
        out << "\nSession ended.\n";
        return answered;
      }
      // A learner who walked away is scored at the cap rather than rejected.
      const double elapsed = std::clamp(options.stopwatch() - shown, 0.0,
                                        static_cast<double>(service.max_elapsed_seconds()));
      Submission sub{session_id, decision.at("item_id"), decision.at("assessment_id"), {},
                     static_cast<int>(std::floor(elapsed))};
      try {
        sub.response = to_response(decision.at("kind"), line);
        json feedback = service.answer(sub);
        print_feedback(feedback, out);
        decision = feedback.at("decision");
        ++answered;
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MalformedRequest && e.code() != ErrorCode::ResponseShapeMismatch) {
          throw;
        }
        out << e.what() << '\n';
      }
    }
  }
}

} // namespace cdtc
