#include "cdtc/package.hpp"

#include "cdtc/errors.hpp"
#include "cdtc/validator.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace cdtc {

using nlohmann::json;

namespace {

// Field access that reports the JSON path of whatever is missing or mistyped.
class Reader {
public:
  Reader(ErrorCode code) : code_(code) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw Error(code_, path + ": " + what);
  }

  const json& field(const json& obj, const std::string& path, const char* key) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
  }

  std::string string(const json& obj, const std::string& path, const char* key) const {
    const json& v = field(obj, path, key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
  }

  std::int64_t integer(const json& obj, const std::string& path, const char* key) const {
    const json& v = field(obj, path, key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<std::int64_t>();
  }

  int small_int(const json& obj, const std::string& path, const char* key) const {
    auto v = integer(obj, path, key);
    if (v < 0 || v > 1'000'000'000) fail(path + "." + key, "integer out of range");
    return static_cast<int>(v);
  }

  bool boolean(const json& obj, const std::string& path, const char* key) const {
    const json& v = field(obj, path, key);
    if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
    return v.get<bool>();
  }

  const json& array(const json& obj, const std::string& path, const char* key) const {
    const json& v = field(obj, path, key);
    if (!v.is_array()) fail(path + "." + key, "expected an array");
    return v;
  }

  std::vector<std::string> strings(const json& obj, const std::string& path,
                                   const char* key) const {
    std::vector<std::string> out;
    for (const auto& v : array(obj, path, key)) {
      if (!v.is_string()) fail(path + "." + key, "expected an array of strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  }

  MatrixCell cell(const json& obj, const std::string& path) const {
    auto name = string(obj, path, "cell");
    auto parsed = parse_cell(name);
    if (!parsed) fail(path + ".cell", "'" + name + "' is not a legal matrix cell");
    return *parsed;
  }

private:
  ErrorCode code_;
};

json assessment_to_json(const AssessmentItem& a, ContentType owner) {
  json out;
  out["id"] = a.id;
  out["cell"] = make_cell(owner, a.level).name();
  out["kind"] = std::string(to_string(a.kind()));
  out["stem"] = a.stem;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, McqPayload>) {
          out["options"] = json::array();
          for (const auto& o : p.options) {
            out["options"].push_back({{"text", o.text}, {"correct", o.correct}});
          }
        } else if constexpr (std::is_same_v<P, ClassifyPayload>) {
          out["categories"] = p.categories;
          out["entries"] = json::array();
          for (const auto& e : p.entries) {
            out["entries"].push_back({{"text", e.text}, {"category", e.category}});
          }
        } else if constexpr (std::is_same_v<P, OrderPayload>) {
          out["steps"] = p.steps;
        }
      },
      a.payload);
  if (a.is_timed()) {
    out["time_limit"] = a.time_limit_seconds;
    out["penalty_interval"] = a.penalty_interval_seconds;
    out["penalty_points"] = a.penalty_points;
  }
  return out;
}

AssessmentItem assessment_from_json(const Reader& r, const json& v, const std::string& path,
                                    ContentType owner) {
  AssessmentItem a;
  a.id = r.string(v, path, "id");
  auto cell = r.cell(v, path);
  if (cell.content_type() != owner) r.fail(path + ".cell", "content type differs from its item");
  a.level = cell.performance();
  a.stem = r.string(v, path, "stem");
  auto kind_name = r.string(v, path, "kind");
  auto kind = parse_assessment_kind(kind_name);
  if (!kind) r.fail(path + ".kind", "unknown assessment kind '" + kind_name + "'");
  switch (*kind) {
    case AssessmentKind::Mcq: {
      McqPayload p;
      const json& options = r.array(v, path, "options");
      for (std::size_t i = 0; i < options.size(); ++i) {
        auto opath = path + ".options[" + std::to_string(i) + "]";
        p.options.push_back({r.string(options[i], opath, "text"),
                             r.boolean(options[i], opath, "correct")});
      }
      a.payload = std::move(p);
      break;
    }
    case AssessmentKind::Classify: {
      ClassifyPayload p;
      p.categories = r.strings(v, path, "categories");
      const json& entries = r.array(v, path, "entries");
      for (std::size_t i = 0; i < entries.size(); ++i) {
        auto epath = path + ".entries[" + std::to_string(i) + "]";
        p.entries.push_back({r.string(entries[i], epath, "text"),
                             r.string(entries[i], epath, "category")});
      }
      a.payload = std::move(p);
      break;
    }
    case AssessmentKind::Order: a.payload = OrderPayload{r.strings(v, path, "steps")}; break;
    case AssessmentKind::Task: a.payload = TaskPayload{}; break;
  }
  if (a.is_timed()) {
    a.time_limit_seconds = r.small_int(v, path, "time_limit");
    a.penalty_interval_seconds = r.small_int(v, path, "penalty_interval");
    a.penalty_points = r.small_int(v, path, "penalty_points");
    if (a.time_limit_seconds < 1 || a.penalty_interval_seconds < 1 || a.penalty_points < 1) {
      r.fail(path, "timing parameters must be positive");
    }
  }
  return a;
}

std::string hex(const unsigned char* data, std::size_t n) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    out += digits[data[i] >> 4];
    out += digits[data[i] & 0x0F];
  }
  return out;
}

std::string level_key(PerformanceLevel level) { return std::string(to_string(level)); }

} // namespace

std::string canonical_dump(const json& value) { return value.dump() + "\n"; }

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  return hex(digest.data(), length);
}

json course_to_json(const Course& course) {
  json modules = json::array();
  for (const auto& m : course.modules) {
    json items = json::array();
    for (const auto& item : m.items) {
      json objectives = json::array();
      for (const auto& o : item.objectives) {
        json jo{{"cell", make_cell(item.content_type, o.level).name()},
                {"given", o.given},
                {"behavior", o.behavior},
                {"criteria", o.criteria}};
        if (o.arranged) jo["arranged"] = *o.arranged;
        objectives.push_back(std::move(jo));
      }
      json assessments = json::array();
      for (const auto& a : item.assessments) {
        assessments.push_back(assessment_to_json(a, item.content_type));
      }
      items.push_back({{"id", item.id},
                       {"content_type", std::string(to_string(item.content_type))},
                       {"body", item.body},
                       {"objectives", std::move(objectives)},
                       {"assessments", std::move(assessments)}});
    }
    json jm{{"id", m.id}, {"title", m.title}, {"items", std::move(items)}};
    if (m.ila_ref) jm["ila_ref"] = *m.ila_ref;
    modules.push_back(std::move(jm));
  }
  return {{"id", course.id}, {"title", course.title}, {"modules", std::move(modules)}};
}

Course course_from_json(const json& v) {
  const Reader r(ErrorCode::MalformedPackage);
  Course course;
  course.id = r.string(v, "course", "id");
  course.title = r.string(v, "course", "title");
  const json& modules = r.array(v, "course", "modules");
  for (std::size_t mi = 0; mi < modules.size(); ++mi) {
    const json& jm = modules[mi];
    auto mpath = "course.modules[" + std::to_string(mi) + "]";
    LearningModule m;
    m.id = r.string(jm, mpath, "id");
    m.title = r.string(jm, mpath, "title");
    if (jm.is_object() && jm.contains("ila_ref")) {
      auto ref = r.integer(jm, mpath, "ila_ref");
      if (ref < kMinIlaRef || ref > kMaxIlaRef) r.fail(mpath + ".ila_ref", "out of range 1-21");
      m.ila_ref = static_cast<int>(ref);
    }
    const json& items = r.array(jm, mpath, "items");
    for (std::size_t ii = 0; ii < items.size(); ++ii) {
      const json& ji = items[ii];
      auto ipath = mpath + ".items[" + std::to_string(ii) + "]";
      ContentItem item;
      item.id = r.string(ji, ipath, "id");
      auto type_name = r.string(ji, ipath, "content_type");
      auto type = parse_content_type(type_name);
      if (!type) r.fail(ipath + ".content_type", "unknown content type '" + type_name + "'");
      item.content_type = *type;
      item.body = r.string(ji, ipath, "body");
      const json& objectives = r.array(ji, ipath, "objectives");
      for (std::size_t k = 0; k < objectives.size(); ++k) {
        const json& jo = objectives[k];
        auto opath = ipath + ".objectives[" + std::to_string(k) + "]";
        auto cell = r.cell(jo, opath);
        if (cell.content_type() != item.content_type) {
          r.fail(opath + ".cell", "content type differs from its item");
        }
        Objective o;
        o.level = cell.performance();
        o.given = r.string(jo, opath, "given");
        if (jo.contains("arranged")) o.arranged = r.string(jo, opath, "arranged");
        o.behavior = r.string(jo, opath, "behavior");
        o.criteria = r.string(jo, opath, "criteria");
        item.objectives.push_back(std::move(o));
      }
      const json& assessments = r.array(ji, ipath, "assessments");
      for (std::size_t k = 0; k < assessments.size(); ++k) {
        item.assessments.push_back(assessment_from_json(
            r, assessments[k], ipath + ".assessments[" + std::to_string(k) + "]",
            item.content_type));
      }
      m.items.push_back(std::move(item));
    }
    course.modules.push_back(std::move(m));
  }
  return course;
}

std::string content_hash(const Course& course) { return sha256_hex(course_to_json(course).dump()); }

std::string compile(const Course& course, Timestamp compiled_at) {
  auto diagnostics = validate(course);
  if (has_errors(diagnostics)) {
    std::string first;
    for (const auto& d : diagnostics) {
      if (d.is_error()) {
        first = d.code + " " + d.message;
        break;
      }
    }
    throw Error(ErrorCode::ValidationErrorsPresent,
                "course '" + course.id + "' has validation errors (first: " + first + ")");
  }
  json course_json = course_to_json(course);
  json package{{"schema", std::string(kPackageSchema)},
               {"compiled_at", compiled_at},
               {"content_hash", sha256_hex(course_json.dump())},
               {"course", std::move(course_json)}};
  return canonical_dump(package);
}

CoursePackage load_package(std::string_view bytes) {
  const Reader r(ErrorCode::MalformedPackage);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedPackage, std::string("package is not valid JSON: ") + e.what());
  }
  auto schema = r.string(doc, "package", "schema");
  if (schema != kPackageSchema) {
    throw Error(ErrorCode::SchemaUnsupported, "unsupported package schema '" + schema +
                                                  "'; expected '" + std::string(kPackageSchema) +
                                                  "'");
  }
  CoursePackage package;
  package.compiled_at = r.integer(doc, "package", "compiled_at");
  package.content_hash = r.string(doc, "package", "content_hash");
  const json& course_json = r.field(doc, "package", "course");
  if (!course_json.is_object()) r.fail("package.course", "expected an object");
  if (sha256_hex(course_json.dump()) != package.content_hash) {
    throw Error(ErrorCode::HashMismatch, "package content does not match its content_hash");
  }
  package.course = course_from_json(course_json);
  if (has_errors(validate(package.course))) {
    throw Error(ErrorCode::MalformedPackage, "package course does not validate");
  }
  return package;
}

json progress_to_json(const LearnerProgress& progress) {
  json modules = json::object();
  for (const auto& [id, mp] : progress.modules) {
    json attempts = json::array();
    for (const auto& a : mp.attempts) {
      attempts.push_back({{"item_id", a.item_id},
                          {"assessment_id", a.assessment_id},
                          {"cell", a.cell.name()},
                          {"timestamp", a.timestamp},
                          {"elapsed_seconds", a.elapsed_seconds},
                          {"result",
                           {{"raw_points", a.result.raw_points},
                            {"max_points", a.result.max_points},
                            {"time_penalty", a.result.time_penalty},
                            {"final_points", a.result.final_points},
                            {"correct", a.result.correct}}}});
    }
    json levels = json::object();
    for (auto level : kPerformanceLevels) {
      const auto& lp = mp.level(level);
      json jl{{"gate", std::string(to_string(lp.gate))}, {"epoch_start", lp.epoch_start}};
      if (lp.refresher) {
        jl["refresher"] = {{"due_at", lp.refresher->due_at},
                           {"interval_index", lp.refresher->interval_index}};
      }
      levels[level_key(level)] = std::move(jl);
    }
    modules[id] = {{"attempts", std::move(attempts)},
                   {"levels", std::move(levels)},
                   {"session_seeds", mp.session_seeds}};
  }
  return {{"schema", std::string(kProgressSchema)},
          {"learner_id", progress.learner_id},
          {"modules", std::move(modules)}};
}

LearnerProgress progress_from_json(const json& v) {
  const Reader r(ErrorCode::CorruptProgress);
  auto schema = r.string(v, "progress", "schema");
  if (schema != kProgressSchema) r.fail("progress.schema", "unsupported schema '" + schema + "'");
  LearnerProgress progress;
  progress.learner_id = r.string(v, "progress", "learner_id");
  const json& modules = r.field(v, "progress", "modules");
  if (!modules.is_object()) r.fail("progress.modules", "expected an object");
  for (const auto& [id, jm] : modules.items()) {
    auto mpath = "progress.modules." + id;
    ModuleProgress mp;
    const json& attempts = r.array(jm, mpath, "attempts");
    for (std::size_t i = 0; i < attempts.size(); ++i) {
      const json& ja = attempts[i];
      auto apath = mpath + ".attempts[" + std::to_string(i) + "]";
      const json& jr = r.field(ja, apath, "result");
      auto rpath = apath + ".result";
      ScoreResult result{r.small_int(jr, rpath, "raw_points"), r.small_int(jr, rpath, "max_points"),
                         r.small_int(jr, rpath, "time_penalty"),
                         r.small_int(jr, rpath, "final_points"), r.boolean(jr, rpath, "correct")};
      Attempt a{r.string(ja, apath, "item_id"),
                r.string(ja, apath, "assessment_id"),
                r.cell(ja, apath),
                r.integer(ja, apath, "timestamp"),
                r.small_int(ja, apath, "elapsed_seconds"),
                result};
      if (!mp.attempts.empty() && a.timestamp < mp.attempts.back().timestamp) {
        r.fail(apath, "attempts are not ordered by timestamp");
      }
      mp.attempts.push_back(std::move(a));
    }
    const json& levels = r.field(jm, mpath, "levels");
    for (auto level : kPerformanceLevels) {
      auto key = level_key(level);
      auto lpath = mpath + ".levels." + key;
      const json& jl = r.field(levels, mpath + ".levels", key.c_str());
      auto& lp = mp.level(level);
      auto gate_name = r.string(jl, lpath, "gate");
      auto gate = parse_gate_state(gate_name);
      if (!gate) r.fail(lpath + ".gate", "unknown gate state '" + gate_name + "'");
      lp.gate = *gate;
      auto epoch = r.integer(jl, lpath, "epoch_start");
      if (epoch < 0 || static_cast<std::size_t>(epoch) > mp.attempts.size()) {
        r.fail(lpath + ".epoch_start", "out of range");
      }
      lp.epoch_start = static_cast<std::size_t>(epoch);
      if (jl.contains("refresher")) {
        const json& jf = jl["refresher"];
        lp.refresher = RefresherEntry{r.integer(jf, lpath + ".refresher", "due_at"),
                                      r.small_int(jf, lpath + ".refresher", "interval_index")};
      }
    }
    if (mp.level(PerformanceLevel::Remember).gate == GateState::Locked) {
      r.fail(mpath + ".levels.remember", "remember level can never be locked");
    }
    for (const auto& seed : r.array(jm, mpath, "session_seeds")) {
      if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
        r.fail(mpath + ".session_seeds", "expected unsigned integers");
      }
      mp.session_seeds.push_back(seed.get<std::uint64_t>());
    }
    progress.modules.emplace(id, std::move(mp));
  }
  return progress;
}

std::string serialize_progress(const LearnerProgress& progress) {
  return canonical_dump(progress_to_json(progress));
}

bool is_valid_learner_id(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '-' || c == '_';
  });
}

std::filesystem::path progress_path(std::string_view learner_id,
                                    const std::filesystem::path& data_dir) {
  if (!is_valid_learner_id(learner_id)) {
    throw Error(ErrorCode::InvalidId, "invalid learner id '" + std::string(learner_id) + "'");
  }
  return data_dir / (std::string(learner_id) + ".progress.json");
}

void persist_progress(const LearnerProgress& progress, const std::filesystem::path& data_dir,
                      const PersistHooks& hooks) {
  auto target = progress_path(progress.learner_id, data_dir);
  auto temp = target;
  temp += ".tmp";
  std::error_code ec;
  std::filesystem::create_directories(data_dir, ec);
  if (ec) {
    throw Error(ErrorCode::StorageFailure,
                "cannot create data directory " + data_dir.string() + ": " + ec.message());
  }
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::StorageFailure, "cannot open " + temp.string());
    out << serialize_progress(progress);
    out.flush();
    if (!out) throw Error(ErrorCode::StorageFailure, "write failed for " + temp.string());
  }
  if (hooks.before_rename) hooks.before_rename(temp);
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    throw Error(ErrorCode::StorageFailure,
                "cannot replace " + target.string() + ": " + ec.message());
  }
}

LearnerProgress load_progress(std::string_view learner_id, const std::filesystem::path& data_dir) {
  auto path = progress_path(learner_id, data_dir);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    LearnerProgress fresh;
    fresh.learner_id = std::string(learner_id);
    return fresh;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::StorageFailure, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    auto progress = progress_from_json(json::parse(buffer.str()));
    if (progress.learner_id != learner_id) {
      throw Error(ErrorCode::CorruptProgress, "learner id does not match file name");
    }
    return progress;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptProgress, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptProgress, path.string() + ": " + e.what());
  }
}

} // namespace cdtc
