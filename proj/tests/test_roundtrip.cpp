#include "corpus.hpp"
#include "generator.hpp"

#include "cdtc/dsl.hpp"
#include "cdtc/validator.hpp"

#include <doctest.h>

using namespace cdtc;

TEST_SUITE("roundtrip") {

TEST_CASE("generated courses are valid") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CAPTURE(seed);
    for (const auto& d : validate(testing::random_course(seed))) CHECK_FALSE(d.is_error());
  }
}

TEST_CASE("generator is deterministic") {
  CHECK(testing::random_course(42) == testing::random_course(42));
  CHECK_FALSE(testing::random_course(42) == testing::random_course(43));
}

TEST_CASE("fixtures and 500 generated courses survive both round-trips") {
  auto problems = testing::roundtrip_problems(500);
  for (const auto& p : problems) MESSAGE(p);
  CHECK(problems.empty());
}

}
