#pragma once

#include "cdtc/course.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace cdtc {

inline constexpr std::string_view kDefaultAudienceNoun = "learner";

/// `Given <given>[ arranged in <arranged>], the <audience> will be able to
/// <behavior>, <criteria>.` Pure slot filling; author text is never rephrased.
std::string render_objective(const ContentItem& item, const Objective& objective,
                             std::string_view audience_noun = kDefaultAudienceNoun);

/// Assessment kinds that can exercise a cell. Never empty.
std::vector<AssessmentKind> assessment_blueprint(MatrixCell cell);

bool blueprint_admits(MatrixCell cell, AssessmentKind kind);

} // namespace cdtc
