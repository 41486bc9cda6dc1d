#include "cdtc/service.hpp"

#include "cdtc/errors.hpp"
#include "cdtc/rng.hpp"

#include <chrono>
#include <random>

namespace cdtc {

using nlohmann::json;

struct Service::Session {
  std::string id;
  SessionState state;
  std::optional<ItemDecision> pending;
};

namespace {

struct Located {
  const ContentItem* item = nullptr;
  const AssessmentItem* assessment = nullptr;
};

Located locate(const LearningModule& module, const std::string& item_id,
               const std::string& assessment_id) {
  Located out;
  out.item = module.find_item(item_id);
  if (out.item) out.assessment = out.item->find_assessment(assessment_id);
  return out;
}

[[noreturn]] void bad_shape(const std::string& detail) {
  throw Error(ErrorCode::ResponseShapeMismatch, "malformed response: " + detail);
}

std::size_t index_value(const json& v, std::size_t bound, const char* what) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
      static_cast<std::uint64_t>(v.get<std::int64_t>()) >= bound) {
    bad_shape(std::string(what) + " must be an integer in [0, " + std::to_string(bound) + ")");
  }
  return static_cast<std::size_t>(v.get<std::int64_t>());
}

const json& response_field(const json& response, const char* key) {
  if (!response.is_object() || !response.contains(key)) {
    bad_shape(std::string("expected an object with '") + key + "'");
  }
  return response.at(key);
}

json mastery_to_json(const Mastery& m) {
  return {{"correct", m.correct}, {"counted", m.counted}, {"ratio", m.ratio()}};
}

json gates_to_json(const ModuleProgress& mp) {
  json out = json::object();
  for (auto level : kPerformanceLevels) {
    out[std::string(to_string(level))] = std::string(to_string(mp.level(level).gate));
  }
  return out;
}

} // namespace

json score_to_json(const ScoreResult& s) {
  return {{"raw_points", s.raw_points},     {"max_points", s.max_points},
          {"time_penalty", s.time_penalty}, {"final_points", s.final_points},
          {"correct", s.correct}};
}

Response decode_response(const AssessmentItem& assessment, const json& response,
                         const std::vector<std::size_t>& presentation) {
  switch (assessment.kind()) {
    case AssessmentKind::Mcq: {
      auto k = index_value(response_field(response, "choice"), presentation.size(), "choice");
      return McqResponse{presentation[k]};
    }
    case AssessmentKind::Classify: {
      const auto& payload = std::get<ClassifyPayload>(assessment.payload);
      const json& list = response_field(response, "assignments");
      if (!list.is_array() || list.size() != presentation.size()) {
        bad_shape("assignments must list one category per presented entry");
      }
      ClassifyResponse out;
      out.assignments.resize(presentation.size());
      for (std::size_t p = 0; p < list.size(); ++p) {
        std::size_t category = 0;
        if (list[p].is_string()) {
          ClassifyEntry probe{"", list[p].get<std::string>()};
          auto idx = payload.category_index(probe);
          if (!idx) bad_shape("unknown category '" + probe.category + "'");
          category = *idx;
        } else {
          category = index_value(list[p], payload.categories.size(), "category");
        }
        out.assignments[presentation[p]] = category;
      }
      return out;
    }
    case AssessmentKind::Order: {
      const json& list = response_field(response, "order");
      if (!list.is_array() || list.size() != presentation.size()) {
        bad_shape("order must list every presented step once");
      }
      OrderResponse out;
      for (const auto& v : list) {
        out.sequence.push_back(presentation[index_value(v, presentation.size(), "step")]);
      }
      return out;
    }
    case AssessmentKind::Task: {
      const json& v = response_field(response, "confirmed");
      if (!v.is_boolean()) bad_shape("confirmed must be a boolean");
      return TaskResponse{v.get<bool>()};
    }
  }
  bad_shape("unsupported assessment kind");
}

Service::Service(CoursePackage package, std::filesystem::path data_dir, ServiceOptions options)
    : package_(std::move(package)), data_dir_(std::move(data_dir)), options_(std::move(options)) {
  check_config(options_.config.sequencer);
  if (!options_.clock) {
    options_.clock = [] {
      return static_cast<Timestamp>(std::chrono::duration_cast<std::chrono::seconds>(
                                        std::chrono::system_clock::now().time_since_epoch())
                                        .count());
    };
  }
  if (!options_.entropy) {
    options_.entropy = [] {
      std::random_device device;
      return (static_cast<std::uint64_t>(device()) << 32) ^ device();
    };
  }
}

Service::~Service() = default;

json Service::list_courses() const {
  return json::array({{{"course_id", course().id}, {"title", course().title}}});
}

json Service::list_modules(const std::string& course_id) const {
  if (course_id != course().id) {
    throw Error(ErrorCode::UnknownCourse, "unknown course '" + course_id + "'");
  }
  json out = json::array();
  for (const auto& m : course().modules) {
    out.push_back({{"module_id", m.id},
                   {"title", m.title},
                   {"ila_ref", m.ila_ref ? json(*m.ila_ref) : json(nullptr)},
                   {"item_count", m.items.size()}});
  }
  return out;
}

Service::LearnerSlot& Service::slot(const std::string& learner_id) {
  if (!is_valid_learner_id(learner_id)) {
    throw Error(ErrorCode::InvalidId, "invalid learner id '" + learner_id + "'");
  }
  std::lock_guard lock(registry_mutex_);
  auto& entry = learners_[learner_id];
  if (!entry) entry = std::make_unique<LearnerSlot>();
  return *entry;
}

LearnerProgress& Service::loaded(LearnerSlot& slot, const std::string& learner_id) {
  if (!slot.progress) slot.progress = load_progress(learner_id, data_dir_);
  return *slot.progress;
}

void Service::store(LearnerSlot& slot, LearnerProgress progress) {
  persist_progress(progress, data_dir_, options_.persist_hooks);
  slot.progress = std::move(progress);
}

Timestamp Service::now(const LearnerProgress& progress) const {
  Timestamp t = options_.clock();
  // Attempts must stay ordered even if the wall clock steps backwards.
  if (auto last = progress.last_timestamp(); last && t < *last) t = *last;
  return t;
}

std::shared_ptr<Service::Session> Service::find_session(const std::string& session_id) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::SessionNotFound, "unknown session '" + session_id + "'");
  }
  return it->second;
}

json Service::render_decision(const Decision& decision) const {
  if (const auto* gated = std::get_if<GatedDecision>(&decision)) {
    return {{"type", "gated"},
            {"level", std::string(to_string(gated->level))},
            {"needed",
             {{"level", std::string(to_string(gated->prerequisite))},
              {"ratio", gated->needed_ratio},
              {"min_attempts", gated->needed_attempts}}},
            {"current", mastery_to_json(gated->current)}};
  }
  if (const auto* done = std::get_if<CompleteDecision>(&decision)) {
    return {{"type", "complete"},
            {"next_refresher_due",
             done->next_refresher_due ? json(*done->next_refresher_due) : json(nullptr)}};
  }
  const auto& d = std::get<ItemDecision>(decision);
  // Module lookup cannot fail: decisions are only produced for known modules.
  const LearningModule* module = nullptr;
  for (const auto& m : course().modules) {
    if (m.find_item(d.item_id)) module = &m;
  }
  auto [item, assessment] = locate(*module, d.item_id, d.assessment_id);
  json out{{"type", "item"},
           {"item_id", d.item_id},
           {"assessment_id", d.assessment_id},
           {"cell", d.cell.name()},
           {"level", std::string(to_string(assessment->level))},
           {"kind", std::string(to_string(assessment->kind()))},
           {"stem", assessment->stem},
           {"refresher", d.refresher}};
  if (d.show_demonstration) out["demonstration"] = item->body;
  auto presented = [&](const std::vector<std::string>& texts) {
    json list = json::array();
    for (auto idx : d.presentation) list.push_back(texts[idx]);
    return list;
  };
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, McqPayload>) {
          std::vector<std::string> texts;
          for (const auto& o : p.options) texts.push_back(o.text);
          out["options"] = presented(texts);
        } else if constexpr (std::is_same_v<P, ClassifyPayload>) {
          std::vector<std::string> texts;
          for (const auto& e : p.entries) texts.push_back(e.text);
          out["categories"] = p.categories;
          out["entries"] = presented(texts);
        } else if constexpr (std::is_same_v<P, OrderPayload>) {
          out["steps"] = presented(p.steps);
        }
      },
      assessment->payload);
  if (assessment->is_timed()) {
    out["time_limit"] = assessment->time_limit_seconds;
    out["penalty_interval"] = assessment->penalty_interval_seconds;
    out["penalty_points"] = assessment->penalty_points;
  }
  return out;
}

json Service::decide(Session& session, const LearnerProgress& progress, Timestamp at) {
  if (session.pending) return render_decision(*session.pending);
  Decision decision = next_item(session.state, course(), progress, options_.config.sequencer, at);
  if (const auto* item = std::get_if<ItemDecision>(&decision)) {
    session.state.served_items.push_back({item->item_id, item->assessment_id});
    session.pending = *item;
  }
  return render_decision(decision);
}

json Service::start_session(const std::string& learner_id, const std::string& course_id,
                            const std::string& module_id) {
  if (course_id != course().id) {
    throw Error(ErrorCode::UnknownCourse, "unknown course '" + course_id + "'");
  }
  if (!course().find_module(module_id)) {
    throw Error(ErrorCode::UnknownModule, "unknown module '" + module_id + "'");
  }
  auto& learner = slot(learner_id);
  std::lock_guard lock(learner.mutex);
  LearnerProgress progress = loaded(learner, learner_id);
  Timestamp at = now(progress);

  auto session = std::make_shared<Session>();
  session->state = {learner_id, course_id, module_id, options_.entropy(), {}};
  auto& mp = progress.modules[module_id];
  mp.session_seeds.push_back(session->state.rng_seed);
  update_gates(mp, *course().find_module(module_id), options_.config.sequencer, at);
  store(learner, std::move(progress));

  {
    std::lock_guard sessions_lock(sessions_mutex_);
    std::uint64_t n = ++session_counter_;
    SplitMix64 mix(session->state.rng_seed ^ n);
    char suffix[17];
    std::snprintf(suffix, sizeof suffix, "%016llx", static_cast<unsigned long long>(mix.next()));
    session->id = "s" + std::to_string(n) + "-" + suffix;
    sessions_[session->id] = session;
  }
  json decision = decide(*session, *learner.progress, at);
  return {{"session_id", session->id},
          {"seed", session->state.rng_seed},
          {"decision", std::move(decision)}};
}

json Service::next(const std::string& session_id) {
  auto session = find_session(session_id);
  auto& learner = slot(session->state.learner_id);
  std::lock_guard lock(learner.mutex);
  const auto& progress = loaded(learner, session->state.learner_id);
  return {{"decision", decide(*session, progress, now(progress))}};
}

json Service::answer(const Submission& submission) {
  auto session = find_session(submission.session_id);
  auto& learner = slot(session->state.learner_id);
  std::lock_guard lock(learner.mutex);

  if (!session->pending || session->pending->item_id != submission.item_id ||
      session->pending->assessment_id != submission.assessment_id) {
    throw Error(ErrorCode::ItemMismatch, "item '" + submission.item_id + "/" +
                                             submission.assessment_id +
                                             "' is not the item currently served in this session");
  }
  if (submission.elapsed_seconds > options_.max_elapsed_seconds) {
    throw Error(ErrorCode::ElapsedOutOfRange,
                "elapsed_seconds exceeds the " + std::to_string(options_.max_elapsed_seconds) +
                    "s cap");
  }
  const LearningModule& module = *course().find_module(session->state.module_id);
  auto [item, assessment] = locate(module, submission.item_id, submission.assessment_id);
  const ItemDecision served = *session->pending;

  Response response = decode_response(*assessment, submission.response, served.presentation);
  ScoreResult result = score(*assessment, response, submission.elapsed_seconds);

  LearnerProgress progress = loaded(learner, session->state.learner_id);
  Timestamp at = now(progress);
  const auto level = assessment->level;
  Mastery cell_before;
  Mastery level_before;
  if (auto it = progress.modules.find(module.id); it != progress.modules.end()) {
    cell_before = cell_mastery(it->second, served.cell, options_.config.sequencer.mastery_window);
    level_before = level_mastery(it->second, level, options_.config.sequencer.mastery_window);
  }

  auto newly = apply_outcome(progress, module, *item, *assessment, served.refresher, result,
                             submission.elapsed_seconds, at, options_.config.sequencer);
  const auto& mp = progress.modules[module.id];

  const int window = options_.config.sequencer.mastery_window;
  json mastery{{"cell", served.cell.name()},
               {"level", std::string(to_string(level))},
               {"cell_before", mastery_to_json(cell_before)},
               {"cell_after", mastery_to_json(cell_mastery(mp, served.cell, window))},
               {"level_before", mastery_to_json(level_before)},
               {"level_after", mastery_to_json(level_mastery(mp, level, window))},
               {"gates", gates_to_json(mp)},
               {"newly_mastered", json::array()}};
  for (auto l : newly) mastery["newly_mastered"].push_back(std::string(to_string(l)));
  if (served.refresher) mastery["refresher_passed"] = result.correct;

  store(learner, std::move(progress));
  session->pending.reset();
  json decision = decide(*session, *learner.progress, at);
  return {{"score", score_to_json(result)}, {"mastery", std::move(mastery)},
          {"decision", std::move(decision)}};
}

json Service::progress(const std::string& learner_id) {
  auto& learner = slot(learner_id);
  std::lock_guard lock(learner.mutex);
  const auto& progress = loaded(learner, learner_id);
  Timestamp at = now(progress);
  const int window = options_.config.sequencer.mastery_window;

  json modules = json::object();
  for (const auto& module : course().modules) {
    ModuleProgress mp;
    if (auto it = progress.modules.find(module.id); it != progress.modules.end()) mp = it->second;
    json matrix = json::object();
    for (const auto& cell : legal_cells()) matrix[cell.name()] = mastery_to_json(cell_mastery(mp, cell, window));
    json refreshers = json::object();
    for (auto level : kPerformanceLevels) {
      const auto& lp = mp.level(level);
      if (lp.gate == GateState::Mastered && lp.refresher) {
        refreshers[std::string(to_string(level))] = {
            {"due_at", lp.refresher->due_at},
            {"interval_index", lp.refresher->interval_index},
            {"due", lp.refresher->due_at <= at}};
      }
    }
    modules[module.id] = {{"matrix", std::move(matrix)},
                          {"gates", gates_to_json(mp)},
                          {"refreshers", std::move(refreshers)},
                          {"attempts", mp.attempts.size()}};
  }
  json due = json::array();
  for (const auto& [module_id, level] : due_reviews(progress, at)) {
    due.push_back({{"module_id", module_id}, {"level", std::string(to_string(level))}});
  }
  return {{"learner_id", learner_id}, {"modules", std::move(modules)}, {"due_reviews", std::move(due)}};
}

} // namespace cdtc
