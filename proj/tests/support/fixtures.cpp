#include "fixtures.hpp"

#include "cdtc/dsl.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace cdtc::testing {

std::filesystem::path fixtures_dir() { return CDTC_FIXTURES_DIR; }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Course load_fixture(const std::string& file_name) {
  auto parsed = parse_course(read_text(fixtures_dir() / file_name));
  if (!parsed.course) {
    std::string all;
    for (const auto& d : parsed.diagnostics) all += format_diagnostic(d, file_name) + "\n";
    throw std::runtime_error("fixture does not parse:\n" + all);
  }
  return *parsed.course;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("cdtc-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

} // namespace cdtc::testing
