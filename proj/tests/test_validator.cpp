#include "cdtc/dsl.hpp"
#include "cdtc/validator.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>

using namespace cdtc;

namespace {

Course parse_ok(std::string_view text) {
  auto r = parse_course(text);
  REQUIRE(r.course);
  return *r.course;
}

std::vector<std::string> codes_of(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

std::vector<std::string> errors_of(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) {
    if (d.is_error()) out.push_back(d.code);
  }
  return out;
}

Objective objective(PerformanceLevel level) { return {level, "g", std::nullopt, "b", "c"}; }

AssessmentItem mcq(std::string id, PerformanceLevel level) {
  return {std::move(id), level, "stem", McqPayload{{{"yes", true}, {"no", false}}}};
}

} // namespace

TEST_SUITE("validator") {

TEST_CASE("objective missing criteria is one E005") {
  auto r = parse_course(R"(course "c" { module m { item concept k { body: "b"
    objective remember { given: "g" behavior: "b" }
    assess remember mcq q { stem: "s" option*: "a" option: "b" }
    assess use mcq u { stem: "s" option*: "a" option: "b" } } } })");
  REQUIRE(r.course);
  auto ds = validate(*r.course, &r.source_map);
  auto codes = codes_of(ds);
  CHECK(std::count(codes.begin(), codes.end(), "E005") == 1);
  auto it = std::find_if(ds.begin(), ds.end(), [](const auto& d) { return d.code == "E005"; });
  REQUIRE(it != ds.end());
  CHECK(it->is_error());
  CHECK(it->span);
}

TEST_CASE("concept with only a remember mcq is one W101") {
  Course c = parse_ok(R"(course "c" { module m { item concept k { body: "b"
    objective remember { given: "g" behavior: "b" criteria: "c" }
    assess remember mcq q { stem: "s" option*: "a" option: "b" } } } })");
  CHECK(codes_of(validate(c)) == std::vector<std::string>{"W101"});
}

TEST_CASE("facts never trigger W101 and a clean fact is silent") {
  Course c = parse_ok(R"(course "c" { module m { item fact f { body: "b"
    objective remember { given: "g" behavior: "b" criteria: "c" }
    assess remember mcq q { stem: "s" option*: "a" option: "b" } } } })");
  CHECK(validate(c).empty());
}

TEST_CASE("W101 needs at least one assessment") {
  Course c = parse_ok(R"(course "c" { module m { item concept k { body: "b" } } })");
  CHECK(validate(c).empty());
}

TEST_CASE("payload shape errors") {
  Course c;
  c.id = "c";
  LearningModule m{"m", "", std::nullopt, {}};
  ContentItem k{"k", ContentType::Concept, "body", {}, {}};
  for (auto l : kPerformanceLevels) k.objectives.push_back(objective(l));

  SUBCASE("mcq with two correct options") {
    k.assessments.push_back({"q", PerformanceLevel::Use, "s",
                             McqPayload{{{"a", true}, {"b", true}}}});
    m.items.push_back(k);
    c.modules.push_back(m);
    CHECK(errors_of(validate(c)) == std::vector<std::string>{"E002"});
  }
  SUBCASE("mcq with one option") {
    k.assessments.push_back({"q", PerformanceLevel::Use, "s", McqPayload{{{"a", true}}}});
    m.items.push_back(k);
    c.modules.push_back(m);
    CHECK(errors_of(validate(c)) == std::vector<std::string>{"E002"});
  }
  SUBCASE("order with one step") {
    k.assessments.push_back({"o", PerformanceLevel::Use, "s", OrderPayload{{"only"}}});
    m.items.push_back(k);
    c.modules.push_back(m);
    CHECK(errors_of(validate(c)) == std::vector<std::string>{"E003"});
  }
  SUBCASE("classify with no entries") {
    k.assessments.push_back({"s", PerformanceLevel::Use, "s", ClassifyPayload{{"x", "y"}, {}}});
    m.items.push_back(k);
    c.modules.push_back(m);
    CHECK(errors_of(validate(c)) == std::vector<std::string>{"E003"});
  }
  SUBCASE("classify entry keyed to an undeclared category") {
    k.assessments.push_back(
        {"s", PerformanceLevel::Use, "s", ClassifyPayload{{"x", "y"}, {{"e", "z"}}}});
    m.items.push_back(k);
    c.modules.push_back(m);
    CHECK(errors_of(validate(c)) == std::vector<std::string>{"E006"});
  }
  SUBCASE("illegal cell built in memory") {
    ContentItem f{"f", ContentType::Fact, "body", {objective(PerformanceLevel::Remember)},
                  {mcq("q", PerformanceLevel::Use)}};
    m.items.push_back(f);
    c.modules.push_back(m);
    auto codes = codes_of(validate(c));
    CHECK(std::count(codes.begin(), codes.end(), "E001") == 1);
  }
  SUBCASE("duplicate ids") {
    k.assessments.push_back(mcq("q", PerformanceLevel::Use));
    k.assessments.push_back(mcq("q", PerformanceLevel::Use));
    m.items.push_back(k);
    m.items.push_back(k);
    c.modules.push_back(m);
    c.modules.push_back(m);
    auto codes = codes_of(validate(c));
    // One module clash, one item clash per module, one assessment clash per item.
    CHECK(std::count(codes.begin(), codes.end(), "E004") == 1 + 2 + 4);
  }
}

TEST_CASE("warnings W102, W103, W104 and W201") {
  Course c = parse_ok(R"(course "c" {
  module m {
    item concept k {
      body: "b"
      assess use task t { stem: "s" }
    }
  }
  module empty { }
}
)");
  auto codes = codes_of(validate(c));
  CHECK(codes == std::vector<std::string>{"W104", "W102", "W103", "W201"});
}

TEST_CASE("diagnostics are ordered by module, item, then code") {
  Course c = parse_ok(R"(course "c" {
  module a {
    item concept k1 { body: "b" assess remember mcq q { stem: "s" option*: "x" option: "y" } }
    item concept k2 { body: "b" objective remember { given: "" behavior: "b" criteria: "c" } }
  }
  module b { }
}
)");
  auto codes = codes_of(validate(c));
  CHECK(codes == std::vector<std::string>{"W101", "W102", "E005", "W201"});
}

TEST_CASE("coverage matrix counts assessments per cell") {
  Course c = testing::load_fixture("handwashing.cdtc");
  auto matrix = coverage_matrix(c.modules[0]);
  CHECK(matrix.total() == c.modules[0].assessment_count());
  CHECK(matrix.count(make_cell(ContentType::Procedure, PerformanceLevel::Remember)) == 2);
  CHECK(matrix.count(make_cell(ContentType::Principle, PerformanceLevel::Find)) == 0);
}

TEST_CASE("gap report is bounded by the highest level the module exercises") {
  Course c = parse_ok(R"(course "c" { module m {
    item concept k { body: "b" objective use { given: "g" behavior: "b" criteria: "c" }
      assess use mcq q { stem: "s" option*: "x" option: "y" } }
    item procedure p { body: "b" }
  } })");
  auto gaps = gap_report(c);
  std::vector<std::string> got;
  for (const auto& g : gaps) {
    CHECK_FALSE(g.reason.empty());
    got.push_back(g.item_id + " " + g.cell.name());
  }
  CHECK(got == std::vector<std::string>{"k concept/remember", "p procedure/remember",
                                        "p procedure/use"});
}

TEST_CASE("JSON report lists all ten cells in canonical order") {
  auto report = render_report_json(testing::load_fixture("kmc.cdtc"));
  REQUIRE(report.size() == 1);
  CHECK(report[0]["module_id"] == "kmc");
  std::vector<std::string> keys;
  for (const auto& [k, v] : report[0]["counts"].items()) keys.push_back(k);
  REQUIRE(keys.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(keys[i] == legal_cells()[i].name());
  CHECK(report[0]["gaps"].empty());
}

TEST_CASE("text report names every module") {
  auto text = render_report_text(testing::load_fixture("anemia.cdtc"));
  CHECK(text.find("module anemia") != std::string::npos);
  CHECK(text.find("principle/find") != std::string::npos);
}

}
