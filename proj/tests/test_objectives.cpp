#include "cdtc/objectives.hpp"

#include <doctest.h>

using namespace cdtc;

TEST_SUITE("objectives") {

TEST_CASE("worked example renders byte-exact") {
  ContentItem item{"iron-foods", ContentType::Concept, "Iron rich foods.", {}, {}};
  Objective o{PerformanceLevel::Use, "some images of food", "random order",
              "recall the foods rich in iron and sort them into two groups",
              "with no errors and no delay"};
  CHECK(render_objective(item, o) ==
        "Given some images of food arranged in random order, the learner will be able to recall "
        "the foods rich in iron and sort them into two groups, with no errors and no delay.");
}

TEST_CASE("arranged slot is optional and the audience noun is configurable") {
  ContentItem item{"x", ContentType::Fact, "b", {}, {}};
  Objective o{PerformanceLevel::Remember, "a pregnant mother", std::nullopt,
              "recall the Hb level", "with no errors"};
  CHECK(render_objective(item, o, "AWW") ==
        "Given a pregnant mother, the AWW will be able to recall the Hb level, with no errors.");
}

TEST_CASE("blueprint") {
  using enum AssessmentKind;
  CHECK(assessment_blueprint(make_cell(ContentType::Fact, PerformanceLevel::Remember)) ==
        std::vector<AssessmentKind>{Mcq});
  for (const auto& cell : legal_cells()) {
    auto kinds = assessment_blueprint(cell);
    CHECK_FALSE(kinds.empty());
    for (auto k : kinds) CHECK(blueprint_admits(cell, k));
  }
  CHECK(blueprint_admits(make_cell(ContentType::Procedure, PerformanceLevel::Remember), Order));
  CHECK(blueprint_admits(make_cell(ContentType::Concept, PerformanceLevel::Use), Classify));
  CHECK(blueprint_admits(make_cell(ContentType::Principle, PerformanceLevel::Find), Task));
  CHECK_FALSE(blueprint_admits(make_cell(ContentType::Concept, PerformanceLevel::Find), Mcq));
  CHECK_FALSE(blueprint_admits(make_cell(ContentType::Procedure, PerformanceLevel::Use), Task));
}

}
