#include "cdtc/config.hpp"
#include "cdtc/dsl.hpp"
#include "cdtc/errors.hpp"
#include "cdtc/http.hpp"
#include "cdtc/objectives.hpp"
#include "cdtc/package.hpp"
#include "cdtc/quiz.hpp"
#include "cdtc/rng.hpp"
#include "cdtc/service.hpp"
#include "cdtc/validator.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace cdtc;
using nlohmann::json;

namespace {

constexpr int kExitDiagnostics = 1;
constexpr int kExitFailure = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out.flush()) throw std::runtime_error("cannot write " + path);
}

/// Parses, then validates when the parse succeeded.
struct Checked {
  ParseResult parsed;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return parsed.course && !has_errors(diagnostics); }
};

Checked check(const std::string& path, bool run_validator) {
  Checked c{parse_course(read_file(path)), {}};
  c.diagnostics = c.parsed.diagnostics;
  if (run_validator && c.parsed.course) {
    auto more = validate(*c.parsed.course, &c.parsed.source_map);
    c.diagnostics.insert(c.diagnostics.end(), more.begin(), more.end());
  }
  return c;
}

void print_text(const std::vector<Diagnostic>& diagnostics, const std::string& file) {
  for (const auto& d : diagnostics) std::cerr << format_diagnostic(d, file) << '\n';
}

json diagnostics_json(const std::vector<Diagnostic>& diagnostics, const std::string& file) {
  json out = json::array();
  for (const auto& d : diagnostics) {
    json entry{{"file", file},
               {"severity", d.is_error() ? "error" : "warning"},
               {"code", d.code},
               {"message", d.message}};
    if (d.span) {
      entry["line"] = d.span->line;
      entry["column"] = d.span->column;
      entry["length"] = d.span->length;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

struct Tunables {
  std::optional<double> threshold;
  std::optional<int> min_attempts;
  std::optional<int> window;
  std::optional<std::string> ladder;
  std::optional<std::string> audience;

  void attach(CLI::App* cmd) {
    cmd->add_option("--threshold", threshold, "Mastery threshold (0, 1]");
    cmd->add_option("--min-attempts", min_attempts, "Attempts required before mastery");
    cmd->add_option("--window", window, "Recent attempts counted for mastery");
    cmd->add_option("--ladder", ladder, "Refresher intervals, e.g. 1d,7d,30d");
    cmd->add_option("--audience", audience, "Audience noun in objective statements");
  }

  RuntimeConfig resolve() const {
    RuntimeConfig config = config_from_env();
    if (threshold) config.sequencer.mastery_threshold = *threshold;
    if (min_attempts) config.sequencer.min_attempts = *min_attempts;
    if (window) config.sequencer.mastery_window = *window;
    if (ladder) config.sequencer.refresher_ladder = parse_ladder(*ladder);
    if (audience) config.audience_noun = *audience;
    check_config(config.sequencer);
    return config;
  }
};

Timestamp build_time() {
  auto v = process_env("SOURCE_DATE_EPOCH");
  if (!v) return 0;
  try {
    return std::stoll(*v);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "SOURCE_DATE_EPOCH must be an integer");
  }
}

ServiceOptions service_options(const Tunables& tunables, std::optional<std::uint64_t> seed) {
  ServiceOptions options;
  options.config = tunables.resolve();
  if (seed) {
    auto rng = std::make_shared<SplitMix64>(*seed);
    options.entropy = [rng] { return rng->next(); };
  }
  return options;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cdtc: courseware compiler and adaptive delivery service"};
  app.require_subcommand(1);

  std::string input;
  std::string format = "text";
  std::string output;
  std::string package_path;
  std::string data_dir;
  std::string learner;
  std::string module;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::uint64_t> seed;
  Tunables tunables;

  auto* parse = app.add_subcommand("parse", "Parse a course file and print diagnostics");
  parse->add_option("file", input, "Course source (.cdtc)")->required();

  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a course file");
  validate_cmd->add_option("file", input, "Course source (.cdtc)")->required();
  validate_cmd->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* compile_cmd = app.add_subcommand("compile", "Compile a course file into a package");
  compile_cmd->add_option("file", input, "Course source (.cdtc)")->required();
  compile_cmd->add_option("-o,--output", output, "Package path")->required();

  auto* report = app.add_subcommand("report", "Coverage matrices and gap report");
  report->add_option("file", input, "Course source (.cdtc)")->required();
  report->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* objectives = app.add_subcommand("objectives", "Render objective statements");
  objectives->add_option("file", input, "Course source (.cdtc)")->required();
  tunables.attach(objectives);

  auto* quiz = app.add_subcommand("quiz", "Interactive terminal session");
  auto* serve = app.add_subcommand("serve", "HTTP service");
  for (auto* cmd : {quiz, serve}) {
    cmd->add_option("--package", package_path, "Compiled package (.json)")->required();
    cmd->add_option("--data", data_dir, "Progress directory")->required();
    cmd->add_option("--seed", seed, "Seed for session seeds (reproducible runs)");
    tunables.attach(cmd);
  }
  quiz->add_option("--learner", learner, "Learner id")->required();
  quiz->add_option("--module", module, "Module id")->required();
  serve->add_option("--port", port, "TCP port; 0 picks a free one");
  serve->add_option("--host", host, "Bind address");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse) {
      auto c = check(input, false);
      print_text(c.diagnostics, input);
      return c.ok() ? 0 : kExitDiagnostics;
    }
    if (*validate_cmd) {
      auto c = check(input, true);
      if (format == "json") {
        std::cout << diagnostics_json(c.diagnostics, input).dump(2) << '\n';
      } else {
        print_text(c.diagnostics, input);
      }
      return c.ok() ? 0 : kExitDiagnostics;
    }
    if (*compile_cmd) {
      auto c = check(input, true);
      print_text(c.diagnostics, input);
      if (!c.ok()) return kExitDiagnostics;
      write_file(output, compile(*c.parsed.course, build_time()));
      return 0;
    }
    if (*report || *objectives) {
      auto c = check(input, false);
      if (!c.parsed.course) {
        print_text(c.diagnostics, input);
        return kExitDiagnostics;
      }
      const Course& course = *c.parsed.course;
      if (*report) {
        if (format == "json") {
          std::cout << render_report_json(course).dump(2) << '\n';
        } else {
          std::cout << render_report_text(course);
        }
        return 0;
      }
      const std::string noun = tunables.resolve().audience_noun;
      for (const auto& m : course.modules) {
        for (const auto& item : m.items) {
          for (const auto& o : item.objectives) std::cout << render_objective(item, o, noun) << '\n';
        }
      }
      return 0;
    }

    auto package = load_package(read_file(package_path));
    Service service(std::move(package), data_dir, service_options(tunables, seed));
    if (*quiz) {
      run_quiz(service, learner, module, std::cin, std::cout);
      return 0;
    }
    HttpServer server(service);
    int bound = server.bind(host, port);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    std::cout << "cdtc serving " << service.course().id << " on http://" << host << ":" << bound
              << std::endl;
    return server.listen() ? 0 : kExitFailure;
  } catch (const Error& e) {
    std::cerr << "cdtc: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "cdtc: " << e.what() << '\n';
    return kExitFailure;
  }
}
