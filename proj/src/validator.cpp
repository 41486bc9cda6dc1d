#include "cdtc/validator.hpp"

#include "cdtc/objectives.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

namespace cdtc {
namespace {

struct Finding {
  std::size_t module = 0;
  std::ptrdiff_t item = -1; // -1 for module-level findings
  std::size_t sequence = 0;
  Diagnostic diagnostic;
};

class Collector {
public:
  Collector(const SourceMap* map) : map_(map) {}

  void add(std::size_t module, std::ptrdiff_t item, Severity severity, std::string_view code,
           std::string message, const std::string& path) {
    Diagnostic d{severity, std::string(code), std::move(message), std::nullopt};
    if (map_) {
      if (auto it = map_->find(path); it != map_->end()) d.span = it->second;
    }
    findings_.push_back({module, item, findings_.size(), std::move(d)});
  }

  std::vector<Diagnostic> finish() {
    std::stable_sort(findings_.begin(), findings_.end(), [](const Finding& a, const Finding& b) {
      if (a.module != b.module) return a.module < b.module;
      if (a.item != b.item) return a.item < b.item;
      if (a.diagnostic.code != b.diagnostic.code) return a.diagnostic.code < b.diagnostic.code;
      return a.sequence < b.sequence;
    });
    std::vector<Diagnostic> out;
    out.reserve(findings_.size());
    for (auto& f : findings_) out.push_back(std::move(f.diagnostic));
    return out;
  }

private:
  const SourceMap* map_;
  std::vector<Finding> findings_;
};

std::string level_name(PerformanceLevel level) { return std::string(to_string(level)); }

void check_assessment_shape(Collector& out, std::size_t mi, std::ptrdiff_t ii,
                            const AssessmentItem& a, const std::string& where,
                            const std::string& path) {
  if (const auto* mcq = std::get_if<McqPayload>(&a.payload)) {
    auto correct = std::count_if(mcq->options.begin(), mcq->options.end(),
                                 [](const McqOption& o) { return o.correct; });
    if (mcq->options.size() < 2) {
      out.add(mi, ii, Severity::Error, codes::kBadMcq,
              where + ": mcq needs at least 2 options, has " + std::to_string(mcq->options.size()),
              path);
    } else if (correct != 1) {
      out.add(mi, ii, Severity::Error, codes::kBadMcq,
              where + ": mcq needs exactly one correct option, has " + std::to_string(correct),
              path);
    }
  } else if (const auto* cls = std::get_if<ClassifyPayload>(&a.payload)) {
    if (cls->categories.size() < 2) {
      out.add(mi, ii, Severity::Error, codes::kBadSequenceOrSort,
              where + ": classify needs at least 2 categories", path);
    } else if (cls->entries.empty()) {
      out.add(mi, ii, Severity::Error, codes::kBadSequenceOrSort,
              where + ": classify needs at least one entry", path);
    }
    for (const auto& e : cls->entries) {
      if (!cls->category_index(e)) {
        out.add(mi, ii, Severity::Error, codes::kUnknownCategory,
                where + ": entry '" + e.text + "' is keyed to undeclared category '" +
                    e.category + "'",
                path);
      }
    }
  } else if (const auto* ord = std::get_if<OrderPayload>(&a.payload)) {
    if (ord->steps.size() < 2) {
      out.add(mi, ii, Severity::Error, codes::kBadSequenceOrSort,
              where + ": order needs at least 2 steps", path);
    }
  }
}

void check_item(Collector& out, std::size_t mi, std::ptrdiff_t ii, const LearningModule& module,
                const ContentItem& item) {
  const std::string item_path = module.id + "/" + item.id;
  const std::string type_name{to_string(item.content_type)};

  std::set<PerformanceLevel> objective_levels;
  for (std::size_t k = 0; k < item.objectives.size(); ++k) {
    const auto& o = item.objectives[k];
    const std::string path = item_path + "/objective#" + std::to_string(k);
    objective_levels.insert(o.level);
    if (!is_legal_cell(item.content_type, o.level)) {
      out.add(mi, ii, Severity::Error, codes::kIllegalCell,
              item_path + ": " + level_name(o.level) + "-level objective on a " + type_name +
                  " item is not a legal cell",
              path);
    }
    std::vector<std::string> missing;
    if (o.given.empty()) missing.push_back("given");
    if (o.behavior.empty()) missing.push_back("behavior");
    if (o.criteria.empty()) missing.push_back("criteria");
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
      out.add(mi, ii, Severity::Error, codes::kIncompleteObjective,
              item_path + ": " + level_name(o.level) + "-level objective is missing " + list,
              path);
    }
  }

  std::set<std::string> assessment_ids;
  bool has_remember = false;
  bool has_use = false;
  for (const auto& a : item.assessments) {
    const std::string path = item_path + "/" + a.id;
    if (!assessment_ids.insert(a.id).second) {
      out.add(mi, ii, Severity::Error, codes::kDuplicateId,
              item_path + ": duplicate assessment id '" + a.id + "'", path);
    }
    has_remember |= a.level == PerformanceLevel::Remember;
    has_use |= a.level == PerformanceLevel::Use;
    auto cell = try_make_cell(item.content_type, a.level);
    if (!cell) {
      out.add(mi, ii, Severity::Error, codes::kIllegalCell,
              path + ": " + level_name(a.level) + "-level assessment on a " + type_name +
                  " item is not a legal cell",
              path);
    } else if (!blueprint_admits(*cell, a.kind())) {
      out.add(mi, ii, Severity::Warning, codes::kKindOutsideBlueprint,
              path + ": " + std::string(to_string(a.kind())) + " is not an admissible kind for " +
                  cell->name(),
              path);
    }
    check_assessment_shape(out, mi, ii, a, path, path);
    if (!objective_levels.contains(a.level)) {
      out.add(mi, ii, Severity::Warning, codes::kAssessmentWithoutObjective,
              path + ": no " + level_name(a.level) + "-level objective on item '" + item.id + "'",
              path);
    }
  }

  if (item.content_type != ContentType::Fact && has_remember && !has_use) {
    out.add(mi, ii, Severity::Warning, codes::kRememberWithoutUse,
            item_path + ": " + type_name + " item is assessed at remember level but never at use",
            item_path);
  }
}

} // namespace

std::vector<Diagnostic> validate(const Course& course, const SourceMap* source_map) {
  Collector out(source_map);
  std::set<std::string> module_ids;
  for (std::size_t mi = 0; mi < course.modules.size(); ++mi) {
    const auto& module = course.modules[mi];
    if (!module_ids.insert(module.id).second) {
      out.add(mi, -1, Severity::Error, codes::kDuplicateId,
              "duplicate module id '" + module.id + "'", module.id);
    }
    if (module.items.empty()) {
      out.add(mi, -1, Severity::Warning, codes::kEmptyModule,
              "module '" + module.id + "' has no items", module.id);
    }
    for (auto level : {PerformanceLevel::Use, PerformanceLevel::Find}) {
      auto below = static_cast<PerformanceLevel>(static_cast<int>(level) - 1);
      if (module.has_level(level) && !module.has_level(below)) {
        out.add(mi, -1, Severity::Warning, codes::kUnreachableLevel,
                "module '" + module.id + "' has " + level_name(level) +
                    "-level assessments but none at " + level_name(below) +
                    ", so they can never unlock",
                module.id);
      }
    }
    std::set<std::string> item_ids;
    for (std::size_t ii = 0; ii < module.items.size(); ++ii) {
      const auto& item = module.items[ii];
      auto idx = static_cast<std::ptrdiff_t>(ii);
      if (!item_ids.insert(item.id).second) {
        out.add(mi, idx, Severity::Error, codes::kDuplicateId,
                module.id + ": duplicate item id '" + item.id + "'", module.id + "/" + item.id);
      }
      check_item(out, mi, idx, module, item);
    }
  }
  return out.finish();
}

std::size_t CoverageMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

CoverageMatrix coverage_matrix(const LearningModule& module) {
  CoverageMatrix m;
  for (const auto& item : module.items) {
    for (const auto& a : item.assessments) {
      if (auto cell = try_make_cell(item.content_type, a.level)) ++m.counts[cell->index()];
    }
  }
  return m;
}

std::vector<Gap> gap_report(const Course& course) {
  std::vector<Gap> gaps;
  for (const auto& module : course.modules) {
    std::optional<PerformanceLevel> max_level;
    for (auto level : kPerformanceLevels) {
      if (module.has_level(level)) max_level = level;
    }
    if (!max_level) continue;
    for (const auto& item : module.items) {
      for (auto level : kPerformanceLevels) {
        if (level > *max_level) break;
        auto cell = try_make_cell(item.content_type, level);
        if (!cell) continue;
        bool covered = std::any_of(item.assessments.begin(), item.assessments.end(),
                                   [&](const AssessmentItem& a) { return a.level == level; });
        if (covered) continue;
        gaps.push_back({module.id, item.id, *cell,
                        "no " + level_name(level) + "-level assessment for " +
                            std::string(to_string(item.content_type)) + " item '" + item.id +
                            "' while the module exercises up to " + level_name(*max_level)});
      }
    }
  }
  return gaps;
}

std::string render_report_text(const Course& course) {
  auto gaps = gap_report(course);
  std::ostringstream out;
  for (const auto& module : course.modules) {
    auto matrix = coverage_matrix(module);
    out << "module " << module.id;
    if (!module.title.empty()) out << " (" << module.title << ")";
    out << '\n';
    out << "  " << std::left << std::setw(20) << "cell" << std::right << std::setw(6) << "count"
        << '\n';
    for (const auto& cell : legal_cells()) {
      out << "  " << std::left << std::setw(20) << cell.name() << std::right << std::setw(6)
          << matrix.count(cell) << '\n';
    }
    out << "  " << std::left << std::setw(20) << "total" << std::right << std::setw(6)
        << matrix.total() << '\n';
    std::size_t shown = 0;
    for (const auto& g : gaps) {
      if (g.module_id != module.id) continue;
      if (shown++ == 0) out << "  gaps:\n";
      out << "    " << g.item_id << ' ' << g.cell.name() << ": " << g.reason << '\n';
    }
    if (shown == 0) out << "  gaps: none\n";
  }
  return out.str();
}

nlohmann::ordered_json render_report_json(const Course& course) {
  auto gaps = gap_report(course);
  auto modules = nlohmann::ordered_json::array();
  for (const auto& module : course.modules) {
    auto matrix = coverage_matrix(module);
    nlohmann::ordered_json entry;
    entry["module_id"] = module.id;
    auto counts = nlohmann::ordered_json::object();
    for (const auto& cell : legal_cells()) counts[cell.name()] = matrix.count(cell);
    entry["counts"] = std::move(counts);
    auto list = nlohmann::ordered_json::array();
    for (const auto& g : gaps) {
      if (g.module_id != module.id) continue;
      list.push_back({{"item_id", g.item_id}, {"cell", g.cell.name()}, {"reason", g.reason}});
    }
    entry["gaps"] = std::move(list);
    modules.push_back(std::move(entry));
  }
  return modules;
}

} // namespace cdtc
