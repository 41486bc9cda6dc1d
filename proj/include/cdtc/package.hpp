#pragma once

#include "cdtc/course.hpp"
#include "cdtc/progress.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace cdtc {

inline constexpr std::string_view kPackageSchema = "cdtc-package/1";
inline constexpr std::string_view kProgressSchema = "cdtc-progress/1";

// Canonical form for every file this library writes: keys sorted
// lexicographically, compact separators, UTF-8, one trailing LF.
std::string canonical_dump(const nlohmann::json& value);

std::string sha256_hex(std::string_view bytes);

nlohmann::json course_to_json(const Course& course);
/// Throws Error{MalformedPackage} naming the offending path.
Course course_from_json(const nlohmann::json& value);

/// SHA-256 over the compact sorted-key serialisation of the course object.
std::string content_hash(const Course& course);

struct CoursePackage {
  Course course;
  Timestamp compiled_at = 0;
  std::string content_hash;
};

/// Throws Error{ValidationErrorsPresent} when validate() reports any error.
std::string compile(const Course& course, Timestamp compiled_at = 0);

/// Throws Error{SchemaUnsupported}, Error{HashMismatch} or Error{MalformedPackage}.
CoursePackage load_package(std::string_view bytes);

nlohmann::json progress_to_json(const LearnerProgress& progress);
/// Throws Error{CorruptProgress}.
LearnerProgress progress_from_json(const nlohmann::json& value);
std::string serialize_progress(const LearnerProgress& progress);

/// Learner ids double as file names: `[A-Za-z0-9_-]{1,128}`.
bool is_valid_learner_id(std::string_view id);

std::filesystem::path progress_path(std::string_view learner_id,
                                    const std::filesystem::path& data_dir);

struct PersistHooks {
  /// Runs after the temp file is fully written and before it replaces the
  /// primary file. Throwing from it simulates a crash at that point.
  std::function<void(const std::filesystem::path& temp_file)> before_rename;
};

/// Writes `<data_dir>/<learner_id>.progress.json` via write-temp-then-rename.
/// Throws Error{StorageFailure} or Error{InvalidId}.
void persist_progress(const LearnerProgress& progress, const std::filesystem::path& data_dir,
                      const PersistHooks& hooks = {});

/// Missing file yields fresh empty progress. Throws Error{CorruptProgress}
/// (message names the file), Error{StorageFailure} or Error{InvalidId}.
LearnerProgress load_progress(std::string_view learner_id, const std::filesystem::path& data_dir);

} // namespace cdtc
