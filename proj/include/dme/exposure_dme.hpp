#pragma once

// Differential misclassification of a binary exposure A measured as A*,
// on the odds-ratio scale.
//
// s'_y = P(A*=1 | Y=y, A=1) and f'_y = P(A*=1 | Y=y, A=0). The bound's
// denominator is the largest (causative) or smallest (preventive) of
//   - the sensitivity odds ratio      odds(s'1) / odds(s'0)
//   - the false-positive odds ratio   odds(f'1) / odds(f'0)
//   - the correct classification ratio   r_c = (s'1/s'0) / ((1-f'1)/(1-f'0))
//   - the incorrect classification ratio r_i = (f'1/f'0) / ((1-s'1)/(1-s'0))
// The bound holds with all four terms and no side condition. The usual
// reading in terms of the two odds ratios alone only applies when r_c and
// r_i do not exceed them, which classification_ratio_advisory reports.

#include <string>

#include "dme/domain.hpp"
#include "dme/thresholds.hpp"

namespace dme {

class ExposureMisclassification {
 public:
  ExposureMisclassification(double s1p, double s0p, double f1p, double f0p);

  double s1p() const noexcept { return s1p_; }
  double s0p() const noexcept { return s0p_; }
  double f1p() const noexcept { return f1p_; }
  double f0p() const noexcept { return f0p_; }

  // Relabels Y=1 <-> Y=0.
  ExposureMisclassification swapped_outcome() const { return {s0p_, s1p_, f0p_, f1p_}; }

 private:
  double s1p_, s0p_, f1p_, f0p_;
};

struct ExposureDmeComponents {
  double or_sensitivity;
  double or_false_positive;
  double r_correct;
  double r_incorrect;
  double max_dme;
  double min_dme;
};

/// Exposure prevalence plus true outcome risks; closes the joint law of
/// (A, Y) so that the observed odds ratio can be generated.
class PopulationModel {
 public:
  PopulationModel(double prevalence, TrueBinaryModel outcome);

  double prevalence() const noexcept { return prevalence_; }
  const TrueBinaryModel& outcome() const noexcept { return outcome_; }

 private:
  double prevalence_;
  TrueBinaryModel outcome_;
};

ExposureDmeComponents dme_components_or(const ExposureMisclassification& m);

// causative: true OR >= observed / max_dme; preventive: true OR <= observed / min_dme.
double bound_true_or(const ObservedAssociation& observed, const ExposureDmeComponents& c,
                     EffectDirection direction);

// True when r_c or r_i is the binding term, i.e. the bound is driven by a
// classification ratio rather than by one of the two odds ratios.
bool classification_ratio_advisory(const ExposureDmeComponents& c, EffectDirection direction);

inline constexpr const char* kRareOutcomeCaveat =
    "risk ratio treated as an odds ratio under an assumed rare outcome; "
    "the sensitivity parameters are still odds ratios unless the exposure is also rare";

// Same arithmetic as bound_true_or, applied to a risk-ratio estimate when
// the caller asserts the outcome is rare. The result is approximate.
double bound_true_rr_rare_outcome(const ObservedAssociation& observed,
                                  const ExposureDmeComponents& c, EffectDirection direction);

inline Threshold explain_away_threshold_or(const ObservedAssociation& observed) {
  return explain_away_threshold(observed);
}
inline Threshold shift_threshold_or(const ObservedAssociation& observed, double target) {
  return shift_threshold(observed, target);
}
inline Threshold ci_shift_threshold_or(const ObservedAssociation& observed) {
  return ci_shift_threshold(observed);
}

/// Joint cell probabilities P(Y=y, A*=a*).
struct ObservedJoint {
  double y1_astar1;
  double y1_astar0;
  double y0_astar1;
  double y0_astar0;
};

ObservedJoint forward_joint(const PopulationModel& p, const ExposureMisclassification& m);

// Odds ratio between A* and Y implied by forward_joint. No interval.
ObservedAssociation forward_observed_or(const PopulationModel& p,
                                        const ExposureMisclassification& m);

}  // namespace dme
