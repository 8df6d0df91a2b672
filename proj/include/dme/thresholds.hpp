#pragma once

// Minimum strength of differential error needed to move an observed ratio.
//
// A threshold is always reported as a factor >= 1. `inflating` means the
// error must have pushed the estimate up (observed > 1, so at least one
// direct-effect ratio must reach the factor); `deflating` means it pushed
// the estimate down (observed < 1, so at least one ratio must fall to
// 1/factor or below).

#include "dme/domain.hpp"

namespace dme {

enum class ThresholdDirection { inflating, deflating, none };

const char* to_string(ThresholdDirection direction);
ThresholdDirection parse_threshold_direction(const std::string& text);

struct Threshold {
  double factor = 1.0;
  ThresholdDirection direction = ThresholdDirection::none;
};

// Factor needed to reduce the observed ratio to exactly 1.
// Throws AlreadyNull when the estimate is 1.
Threshold explain_away_threshold(const ObservedAssociation& observed);

// Factor needed to move the observed ratio to `target`, which must lie
// between 1 and the estimate inclusive.
Threshold shift_threshold(const ObservedAssociation& observed, double target);

// Factor needed for the confidence interval to include 1; 1.0 when it
// already does. Throws MissingInterval without both limits.
Threshold ci_shift_threshold(const ObservedAssociation& observed);

}  // namespace dme
