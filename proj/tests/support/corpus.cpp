#include "corpus.hpp"

#include "fixtures.hpp"
#include "generator.hpp"

#include "cdtc/assessment.hpp"
#include "cdtc/dsl.hpp"
#include "cdtc/package.hpp"
#include "cdtc/validator.hpp"

#include <nlohmann/json.hpp>

namespace cdtc::testing {

using nlohmann::json;

namespace {

const AssessmentItem* find(const Course& c, const std::string& item, const std::string& assessment) {
  for (const auto& m : c.modules) {
    if (const auto* i = m.find_item(item)) return i->find_assessment(assessment);
  }
  return nullptr;
}

void check_keys(std::vector<std::string>& out) {
  auto problem = [&out](const std::string& what) { out.push_back("answer key: " + what); };

  Course hand = load_fixture("handwashing.cdtc");
  const auto* order = find(hand, "steps", "step-order");
  if (!order || order->kind() != AssessmentKind::Order) {
    problem("handwashing step-order missing");
  } else {
    const auto& steps = std::get<OrderPayload>(order->payload).steps;
    const std::vector<std::string> first = {"WET", "LATHER", "SCRUB", "RINSE", "DRY"};
    if (steps.size() != first.size()) problem("handwashing has " + std::to_string(steps.size()) + " steps");
    for (std::size_t i = 0; i < std::min(steps.size(), first.size()); ++i) {
      if (steps[i].rfind(first[i], 0) != 0) problem("handwashing step " + std::to_string(i + 1));
    }
    if (score(*order, OrderResponse{{0, 1, 2, 3, 4}}, 0).final_points != 5) {
      problem("handwashing order does not score 5/5");
    }
  }

  Course anemia = load_fixture("anemia.cdtc");
  const auto* cards = find(anemia, "hemoglobin", "mcp-cards");
  if (!cards || cards->kind() != AssessmentKind::Classify) {
    problem("anemia mcp-cards missing");
  } else {
    const auto& p = std::get<ClassifyPayload>(cards->payload);
    const std::vector<ClassifyEntry> key = {
        {"Hb 12.5", "normal"}, {"Hb 11.5", "mild"}, {"Hb 10.5", "medium"}, {"Hb 8", "severe"}};
    if (p.entries != key) problem("anemia mcp-cards entries");
    if (score(*cards, ClassifyResponse{{0, 1, 2, 3}}, 30).final_points != 4) {
      problem("anemia mcp-cards does not score 4/4");
    }
  }
  const auto* worm = find(anemia, "prevention", "deworming");
  if (!worm || worm->kind() != AssessmentKind::Mcq) {
    problem("anemia deworming missing");
  } else {
    const auto& p = std::get<McqPayload>(worm->payload);
    for (std::size_t i = 0; i < p.options.size(); ++i) {
      int expected = p.options[i].text == "albendazole" ? 1 : 0;
      if (score(*worm, McqResponse{i}, 0).final_points != expected) {
        problem("deworming option '" + p.options[i].text + "'");
      }
    }
  }

  Course kmc = load_fixture("kmc.cdtc");
  const auto* doll = find(kmc, "kmc-steps", "baby-doll");
  if (!doll || doll->kind() != AssessmentKind::Task || doll->level != PerformanceLevel::Use) {
    problem("kmc baby-doll should be a use-level task");
  }
  const auto* kmc_order = find(kmc, "kmc-steps", "step-order");
  if (!kmc_order || std::get<OrderPayload>(kmc_order->payload).steps.size() != 4) {
    problem("kmc step-order should have 4 steps");
  }

  Course weak = load_fixture("weak-newborn.cdtc");
  const auto* sort = find(weak, "identify-weak", "sort-babies");
  if (!sort || sort->kind() != AssessmentKind::Classify) {
    problem("weak-newborn sort-babies missing");
  } else {
    int weak_count = 0;
    for (const auto& e : std::get<ClassifyPayload>(sort->payload).entries) weak_count += e.category == "weak";
    if (weak_count != 3) problem("weak-newborn sort-babies should have 3 weak signs");
  }
}

} // namespace

std::vector<std::string> fixture_corpus_problems() {
  std::vector<std::string> out;
  json manifest;
  try {
    manifest = json::parse(read_text(fixtures_dir() / "manifest.json"));
  } catch (const std::exception& e) {
    return {std::string("manifest: ") + e.what()};
  }
  std::size_t listed = 0;
  for (const auto& entry : manifest.at("fixtures")) {
    const std::string file = entry.at("file");
    ++listed;
    Course c;
    try {
      c = load_fixture(file);
    } catch (const std::exception& e) {
      out.push_back(file + ": " + e.what());
      continue;
    }
    for (const auto& d : validate(c)) {
      if (d.is_error()) out.push_back(file + ": " + d.code + " " + d.message);
    }
    if (c.id != entry.at("course_id")) out.push_back(file + ": course id " + c.id);
    const auto& modules = entry.at("modules");
    if (modules.size() != c.modules.size()) out.push_back(file + ": module count");
    for (std::size_t i = 0; i < std::min(modules.size(), c.modules.size()); ++i) {
      const auto& m = c.modules[i];
      const auto& jm = modules[i];
      const std::string where = file + ": " + m.id;
      if (m.id != jm.at("module_id")) out.push_back(where + ": module id");
      if (m.items.size() != jm.at("items").get<std::size_t>()) out.push_back(where + ": items");
      if (m.assessment_count() != jm.at("assessments").get<std::size_t>()) {
        out.push_back(where + ": assessments");
      }
      auto coverage = coverage_matrix(m);
      for (const auto& cell : legal_cells()) {
        auto expected = jm.at("coverage").value(cell.name(), std::size_t{0});
        if (coverage.count(cell) != expected) {
          out.push_back(where + ": " + cell.name() + " has " + std::to_string(coverage.count(cell)) +
                        ", manifest says " + std::to_string(expected));
        }
      }
    }
  }
  if (listed != kFixtureFiles.size()) out.push_back("manifest lists " + std::to_string(listed) + " fixtures");
  check_keys(out);
  return out;
}

std::vector<std::string> roundtrip_problems(int generated, std::uint64_t first_seed) {
  std::vector<std::string> out;
  auto check = [&out](const Course& c, const std::string& label) {
    std::string text = render_canonical(c);
    auto parsed = parse_course(text);
    if (!parsed.course) {
      out.push_back(label + ": canonical text does not parse");
      return;
    }
    if (!(*parsed.course == c)) out.push_back(label + ": parse(render(c)) != c");
    if (render_canonical(*parsed.course) != text) out.push_back(label + ": render is not a fixed point");
    try {
      std::string bytes = compile(c);
      auto pkg = load_package(bytes);
      if (!(pkg.course == c)) out.push_back(label + ": load(compile(c)) != c");
      if (compile(pkg.course) != bytes) out.push_back(label + ": package bytes differ");
    } catch (const std::exception& e) {
      out.push_back(label + ": " + e.what());
    }
  };
  for (const auto& file : kFixtureFiles) {
    try {
      check(load_fixture(file), file);
    } catch (const std::exception& e) {
      out.push_back(file + ": " + e.what());
    }
  }
  for (int i = 0; i < generated; ++i) {
    std::uint64_t seed = first_seed + static_cast<std::uint64_t>(i);
    check(random_course(seed), "generated course " + std::to_string(seed));
  }
  return out;
}

} // namespace cdtc::testing
