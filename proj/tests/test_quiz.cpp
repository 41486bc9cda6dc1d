#include "cdtc/quiz.hpp"

#include "harness.hpp"

#include <doctest.h>

#include <sstream>

using namespace cdtc;

namespace {

struct QuizFixture {
  QuizFixture()
      : course(testing::load_fixture("anemia.cdtc")),
        dir("quiz"),
        service(testing::package_of(course), dir.path(), testing::fixed_options(7)) {}

  void master_remember() {
    auto started = service.start_session("ana", course.id, "anemia");
    nlohmann::json d = started["decision"];
    for (int i = 0; i < 3; ++i) {
      d = service.answer(testing::submission_for(course, started["session_id"], d, true, 2))["decision"];
    }
  }

  Course course;
  testing::TempDir dir;
  Service service;
};

QuizOptions scripted_clock(std::vector<double> reads) {
  auto state = std::make_shared<std::pair<std::vector<double>, std::size_t>>(std::move(reads), 0);
  return {[state] {
    auto& [values, i] = *state;
    return values[std::min(i++, values.size() - 1)];
  }};
}

} // namespace

TEST_SUITE("quiz") {

TEST_CASE("bad input is explained and the item asked again") {
  QuizFixture f;
  std::istringstream in("abc\n9\n1\nq\n");
  std::ostringstream out;
  int answered = run_quiz(f.service, "ana", "anemia", in, out, scripted_clock({0}));
  CHECK(answered == 1);
  std::string text = out.str();
  CHECK(text.find("[fact/remember] hb-levels") != std::string::npos);
  CHECK(text.find("expected numbers separated by spaces") != std::string::npos);
  CHECK(text.find("choice must be an integer in [0, 4)") != std::string::npos);
  CHECK(text.find("Score ") != std::string::npos);
  CHECK(text.find("remember mastery ") != std::string::npos);
  CHECK(text.find("Session ended.") != std::string::npos);
  CHECK(load_progress("ana", f.dir.path()).attempt_count() == 1);
}

TEST_CASE("end of input ends the session") {
  QuizFixture f;
  std::istringstream in("");
  std::ostringstream out;
  CHECK(run_quiz(f.service, "ana", "anemia", in, out) == 0);
  CHECK(out.str().find("Session ended.") != std::string::npos);
}

TEST_CASE("slow classify answers lose points for time") {
  QuizFixture f;
  f.master_remember();
  std::istringstream in("1 1 1 1\nq\n");
  std::ostringstream out;
  CHECK(run_quiz(f.service, "ana", "anemia", in, out, scripted_clock({100, 175})) == 1);
  std::string text = out.str();
  CHECK(text.find("[concept/use] hemoglobin") != std::string::npos);
  CHECK(text.find("Time limit 60s; 1 point(s) off per 10s over.") != std::string::npos);
  CHECK(text.find("Score 0/4 (1 off for time)  not yet") != std::string::npos);
}

TEST_CASE("a learner who walks away is scored at the cap") {
  QuizFixture f;
  f.master_remember();
  std::istringstream in("1 1 1 1\nq\n");
  std::ostringstream out;
  CHECK(run_quiz(f.service, "ana", "anemia", in, out, scripted_clock({0, 1e6})) == 1);
  auto p = load_progress("ana", f.dir.path());
  CHECK(p.modules.at("anemia").attempts.back().elapsed_seconds == 3600);
}

TEST_CASE("tasks take y or n") {
  Course course = testing::load_fixture("kmc.cdtc");
  testing::TempDir dir("quiz-task");
  Service service(testing::package_of(course), dir.path(), testing::fixed_options(2));
  auto started = service.start_session("k", course.id, "kmc");
  nlohmann::json d = started["decision"];
  while (d["type"] == "item" && d["kind"] != "task") {
    d = service.answer(testing::submission_for(course, started["session_id"], d, true, 2))["decision"];
  }
  REQUIRE(d["type"] == "item");
  std::istringstream in("maybe\ny\nq\n");
  std::ostringstream out;
  CHECK(run_quiz(service, "k", "kmc", in, out, scripted_clock({0})) == 1);
  CHECK(out.str().find("Did you complete the task? (y/n)") != std::string::npos);
  CHECK(out.str().find("answer y or n") != std::string::npos);
}

}
