#pragma once

#include "cdtc/course.hpp"

#include <filesystem>
#include <string>

namespace cdtc::testing {

std::filesystem::path fixtures_dir();
std::string read_text(const std::filesystem::path& path);
/// Parses a fixture; fails the calling test on any error diagnostic.
Course load_fixture(const std::string& file_name);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

} // namespace cdtc::testing
