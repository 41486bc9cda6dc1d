#include "cdtc/config.hpp"
#include "cdtc/errors.hpp"

#include <doctest.h>

#include <map>

using namespace cdtc;

namespace {

EnvLookup env(std::map<std::string, std::string> vars) {
  return [vars](const char* name) -> std::optional<std::string> {
    auto it = vars.find(name);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

bool invalid(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == ErrorCode::InvalidConfig;
  }
  return false;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("defaults") {
  auto c = config_from_env(env({}));
  CHECK(c.sequencer.mastery_threshold == 0.8);
  CHECK(c.sequencer.min_attempts == 3);
  CHECK(c.sequencer.mastery_window == 5);
  CHECK(c.sequencer.refresher_ladder ==
        std::vector<Timestamp>{kSecondsPerDay, 7 * kSecondsPerDay, 30 * kSecondsPerDay});
  CHECK(c.audience_noun == "learner");
}

TEST_CASE("environment overrides") {
  auto c = config_from_env(env({{"CDTC_MASTERY_THRESHOLD", "0.75"},
                                {"CDTC_MIN_ATTEMPTS", "4"},
                                {"CDTC_MASTERY_WINDOW", " 8 "},
                                {"CDTC_REFRESHER_LADDER", "90s, 2h,3"},
                                {"CDTC_AUDIENCE_NOUN", "AWW"}}));
  CHECK(c.sequencer.mastery_threshold == 0.75);
  CHECK(c.sequencer.min_attempts == 4);
  CHECK(c.sequencer.mastery_window == 8);
  CHECK(c.sequencer.refresher_ladder == std::vector<Timestamp>{90, 7200, 3 * kSecondsPerDay});
  CHECK(c.audience_noun == "AWW");
}

TEST_CASE("ladder units") {
  CHECK(parse_ladder("1d,7d,30d") ==
        std::vector<Timestamp>{kSecondsPerDay, 7 * kSecondsPerDay, 30 * kSecondsPerDay});
  CHECK(parse_ladder("15m") == std::vector<Timestamp>{900});
}

TEST_CASE("bad values are InvalidConfig") {
  CHECK(invalid([] { parse_ladder(""); }));
  CHECK(invalid([] { parse_ladder("1d,,2d"); }));
  CHECK(invalid([] { parse_ladder("0d"); }));
  CHECK(invalid([] { parse_ladder("3w"); }));
  CHECK(invalid([] { config_from_env(env({{"CDTC_MASTERY_THRESHOLD", "high"}})); }));
  CHECK(invalid([] { config_from_env(env({{"CDTC_MASTERY_THRESHOLD", "1.5"}})); }));
  CHECK(invalid([] { config_from_env(env({{"CDTC_MIN_ATTEMPTS", "0"}})); }));
  CHECK(invalid([] { config_from_env(env({{"CDTC_MIN_ATTEMPTS", "3x"}})); }));
}

}
