#pragma once

// Differential misclassification of a binary outcome Y measured as Y*.
//
// With s_a = P(Y*=1 | Y=1, A=a) and f_a = P(Y*=1 | Y=0, A=a), the largest
// direct effect of A on Y* not through Y is max(s1/s0, f1/f0). For a
// causative true effect (p1 >= p0) the true risk ratio is at least the
// observed one divided by that maximum; for a preventive effect it is at
// most the observed ratio divided by the minimum.

#include "dme/domain.hpp"
#include "dme/thresholds.hpp"

namespace dme {

class OutcomeMisclassification {
 public:
  OutcomeMisclassification(double s1, double s0, double f1, double f0);

  double s1() const noexcept { return s1_; }
  double s0() const noexcept { return s0_; }
  double f1() const noexcept { return f1_; }
  double f0() const noexcept { return f0_; }

 private:
  double s1_, s0_, f1_, f0_;
};

struct OutcomeDmeComponents {
  double sensitivity_ratio;     // s1 / s0
  double false_positive_ratio;  // f1 / f0
  double max_dme;
  double min_dme;
};

OutcomeDmeComponents dme_components_rr(const OutcomeMisclassification& m);

/// Bound on the true risk ratio.
///
/// causative: true RR >= observed / max_dme (a lower bound).
/// preventive: true RR <= observed / min_dme (an upper bound).
/// Throws ScaleMismatch for an odds-ratio input and NullDirection for
/// EffectDirection::null.
double bound_true_rr(const ObservedAssociation& observed, const OutcomeDmeComponents& c,
                     EffectDirection direction);

// Law of total probability: p*_a = s_a p_a + f_a (1 - p_a). No interval.
ObservedAssociation forward_observed_rr(const TrueBinaryModel& t,
                                        const OutcomeMisclassification& m);

}  // namespace dme
