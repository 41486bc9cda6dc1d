#include "cdtc/config.hpp"

#include "cdtc/errors.hpp"

#include <charconv>
#include <cstdlib>

namespace cdtc {
namespace {

template <typename T>
T parse_number(std::string_view text, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::InvalidConfig,
                std::string(what) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

} // namespace

std::vector<Timestamp> parse_ladder(std::string_view text) {
  std::vector<Timestamp> out;
  while (true) {
    auto comma = text.find(',');
    auto part = trim(text.substr(0, comma));
    Timestamp unit = kSecondsPerDay;
    if (!part.empty()) {
      switch (part.back()) {
        case 's': unit = 1; part.remove_suffix(1); break;
        case 'm': unit = 60; part.remove_suffix(1); break;
        case 'h': unit = 3600; part.remove_suffix(1); break;
        case 'd': unit = kSecondsPerDay; part.remove_suffix(1); break;
        default: break;
      }
    }
    auto n = parse_number<Timestamp>(part, "refresher ladder");
    if (n <= 0) throw Error(ErrorCode::InvalidConfig, "refresher intervals must be positive");
    out.push_back(n * unit);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::optional<std::string> process_env(const char* name) {
  if (const char* v = std::getenv(name)) return std::string(v);
  return std::nullopt;
}

RuntimeConfig config_from_env(const EnvLookup& lookup) {
  RuntimeConfig config;
  if (auto v = lookup("CDTC_MASTERY_THRESHOLD")) {
    config.sequencer.mastery_threshold = parse_number<double>(trim(*v), "CDTC_MASTERY_THRESHOLD");
  }
  if (auto v = lookup("CDTC_MIN_ATTEMPTS")) {
    config.sequencer.min_attempts = parse_number<int>(trim(*v), "CDTC_MIN_ATTEMPTS");
  }
  if (auto v = lookup("CDTC_MASTERY_WINDOW")) {
    config.sequencer.mastery_window = parse_number<int>(trim(*v), "CDTC_MASTERY_WINDOW");
  }
  if (auto v = lookup("CDTC_REFRESHER_LADDER")) config.sequencer.refresher_ladder = parse_ladder(*v);
  if (auto v = lookup("CDTC_AUDIENCE_NOUN"); v && !v->empty()) config.audience_noun = *v;
  check_config(config.sequencer);
  return config;
}

} // namespace cdtc
