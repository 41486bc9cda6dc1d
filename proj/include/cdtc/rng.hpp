#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cdtc {

/// SplitMix64 (Steele, Lea & Flood 2014; the seeding generator of the xoshiro
/// family). Session transcripts depend on this exact sequence:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;

  /// Uniform in [0, bound) by rejection: draws below (2^64 - bound) mod bound
  /// are discarded, then the draw is reduced modulo bound.
  std::uint64_t below(std::uint64_t bound) noexcept;

private:
  std::uint64_t state_;
};

/// Fisher-Yates over 0..n-1, walking i from n-1 down to 1 and swapping with
/// below(i + 1).
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

} // namespace cdtc
