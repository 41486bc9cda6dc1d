#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cdtc::testing {

inline const std::vector<std::string> kFixtureFiles = {"weak-newborn.cdtc", "handwashing.cdtc",
                                                       "anemia.cdtc", "kmc.cdtc"};

/// Compares every fixture with manifest.json (course id, item and assessment
/// counts, coverage per cell) and with the answer keys taken from the source
/// material. Returns one line per mismatch.
std::vector<std::string> fixture_corpus_problems();

/// DSL text -> course -> DSL text and course -> package -> course for the
/// fixtures plus `generated` random courses. Returns one line per failure.
std::vector<std::string> roundtrip_problems(int generated, std::uint64_t first_seed = 1);

} // namespace cdtc::testing
