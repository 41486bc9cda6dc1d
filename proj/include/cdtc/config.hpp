#pragma once

#include "cdtc/objectives.hpp"
#include "cdtc/sequencer.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdtc {

struct RuntimeConfig {
  SequencerConfig sequencer;
  std::string audience_noun{kDefaultAudienceNoun};
};

/// "1d,7d,30d". Units s, m, h, d; a bare number means days.
/// Throws Error{InvalidConfig}.
std::vector<Timestamp> parse_ladder(std::string_view text);

using EnvLookup = std::function<std::optional<std::string>(const char* name)>;

std::optional<std::string> process_env(const char* name);

/// Defaults overlaid with CDTC_MASTERY_THRESHOLD, CDTC_MIN_ATTEMPTS,
/// CDTC_MASTERY_WINDOW, CDTC_REFRESHER_LADDER and CDTC_AUDIENCE_NOUN.
/// Command-line flags are applied on top by the caller.
RuntimeConfig config_from_env(const EnvLookup& lookup = process_env);

} // namespace cdtc
