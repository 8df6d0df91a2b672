#include "dme/thresholds.hpp"

#include <sstream>

namespace dme {

const char* to_string(ThresholdDirection direction) {
  switch (direction) {
    case ThresholdDirection::inflating: return "inflating";
    case ThresholdDirection::deflating: return "deflating";
    case ThresholdDirection::none: return "none";
  }
  return "none";
}

ThresholdDirection parse_threshold_direction(const std::string& text) {
  if (text == "inflating") return ThresholdDirection::inflating;
  if (text == "deflating") return ThresholdDirection::deflating;
  if (text == "none") return ThresholdDirection::none;
  throw ValidationError(ErrorCode::NullDirection, "unknown threshold direction '" + text + "'");
}

Threshold explain_away_threshold(const ObservedAssociation& observed) {
  const double est = observed.estimate();
  if (est > 1.0) return {est, ThresholdDirection::inflating};
  if (est < 1.0) return {1.0 / est, ThresholdDirection::deflating};
  throw ValidationError(ErrorCode::AlreadyNull, "observed association is already null");
}

Threshold shift_threshold(const ObservedAssociation& observed, double target) {
  const double est = observed.estimate();
  const bool inside = est >= 1.0 ? (target >= 1.0 && target <= est)
                                  : (target <= 1.0 && target >= est);
  if (!inside) {
    std::ostringstream msg;
    msg << "target " << target << " is not between 1 and the estimate " << est;
    throw ValidationError(ErrorCode::TargetBeyondEstimate, msg.str());
  }
  if (est > 1.0) return {est / target, ThresholdDirection::inflating};
  if (est < 1.0) return {target / est, ThresholdDirection::deflating};
  return {1.0, ThresholdDirection::none};
}

Threshold ci_shift_threshold(const ObservedAssociation& observed) {
  if (!observed.has_interval()) {
    throw ValidationError(ErrorCode::MissingInterval, "both confidence limits are required");
  }
  const double lower = *observed.ci_lower();
  const double upper = *observed.ci_upper();
  if (lower > 1.0) return {lower, ThresholdDirection::inflating};
  if (upper < 1.0) return {1.0 / upper, ThresholdDirection::deflating};
  return {1.0, ThresholdDirection::none};
}

}  // namespace dme
