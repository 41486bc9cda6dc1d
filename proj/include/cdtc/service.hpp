#pragma once

#include "cdtc/config.hpp"
#include "cdtc/package.hpp"
#include "cdtc/sequencer.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace cdtc {

struct ServiceOptions {
  RuntimeConfig config;
  /// Defaults to the system clock.
  std::function<Timestamp()> clock;
  /// Source of fresh session seeds; defaults to std::random_device.
  std::function<std::uint64_t()> entropy;
  /// Submissions claiming more time than this are rejected.
  int max_elapsed_seconds = 3600;
  PersistHooks persist_hooks;
};

/// A learner's answer to the item currently served in a session. The
/// response uses presented (shuffled) positions:
///   mcq      {"choice": k}
///   classify {"assignments": [category index or name per presented entry]}
///   order    {"order": [presented step positions in the learner's order]}
///   task     {"confirmed": true|false}
struct Submission {
  std::string session_id;
  std::string item_id;
  std::string assessment_id;
  nlohmann::json response;
  int elapsed_seconds = 0;
};

/// Delivery engine behind both the HTTP API and the terminal quiz. Sessions
/// live in memory; learner progress is persisted after every change under a
/// per-learner lock. Payloads never carry answer keys.
class Service {
public:
  Service(CoursePackage package, std::filesystem::path data_dir, ServiceOptions options = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  const Course& course() const { return package_.course; }
  const RuntimeConfig& config() const { return options_.config; }
  int max_elapsed_seconds() const { return options_.max_elapsed_seconds; }

  nlohmann::json list_courses() const;
  nlohmann::json list_modules(const std::string& course_id) const;

  /// {session_id, seed, decision}
  nlohmann::json start_session(const std::string& learner_id, const std::string& course_id,
                               const std::string& module_id);
  /// {decision}; repeats the pending item if it has not been answered yet.
  nlohmann::json next(const std::string& session_id);
  /// {score, mastery, decision}
  nlohmann::json answer(const Submission& submission);
  nlohmann::json progress(const std::string& learner_id);

private:
  struct Session;
  struct LearnerSlot {
    std::mutex mutex;
    std::optional<LearnerProgress> progress; // guarded by `mutex`
  };

  std::shared_ptr<Session> find_session(const std::string& session_id);
  LearnerSlot& slot(const std::string& learner_id);
  /// Caller holds the slot's mutex.
  LearnerProgress& loaded(LearnerSlot& slot, const std::string& learner_id);
  /// Persists, then updates the cache; the cache never runs ahead of disk.
  void store(LearnerSlot& slot, LearnerProgress progress);
  Timestamp now(const LearnerProgress& progress) const;
  nlohmann::json decide(Session& session, const LearnerProgress& progress, Timestamp now);
  nlohmann::json render_decision(const Decision& decision) const;

  CoursePackage package_;
  std::filesystem::path data_dir_;
  ServiceOptions options_;

  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t session_counter_ = 0;

  std::mutex registry_mutex_;
  std::map<std::string, std::unique_ptr<LearnerSlot>> learners_;
};

/// Decodes a presented-position response into canonical indices for scoring.
/// Throws Error{ResponseShapeMismatch}.
Response decode_response(const AssessmentItem& assessment, const nlohmann::json& response,
                         const std::vector<std::size_t>& presentation);

nlohmann::json score_to_json(const ScoreResult& score);

} // namespace cdtc
