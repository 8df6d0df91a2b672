#include "dme/outcome_dme.hpp"

#include <algorithm>

namespace dme {

OutcomeMisclassification::OutcomeMisclassification(double s1, double s0, double f1, double f0)
    : s1_(require_open_probability(s1, "s1")),
      s0_(require_open_probability(s0, "s0")),
      f1_(require_open_probability(f1, "f1")),
      f0_(require_open_probability(f0, "f0")) {}

OutcomeDmeComponents dme_components_rr(const OutcomeMisclassification& m) {
  const double sens = m.s1() / m.s0();
  const double fp = m.f1() / m.f0();
  return {sens, fp, std::max(sens, fp), std::min(sens, fp)};
}

double bound_true_rr(const ObservedAssociation& observed, const OutcomeDmeComponents& c,
                     EffectDirection direction) {
  if (observed.scale() != RatioScale::risk_ratio) {
    throw ValidationError(ErrorCode::ScaleMismatch, "outcome bound requires a risk-ratio estimate");
  }
  switch (direction) {
    case EffectDirection::causative: return observed.estimate() / c.max_dme;
    case EffectDirection::preventive: return observed.estimate() / c.min_dme;
    case EffectDirection::null: break;
  }
  throw ValidationError(ErrorCode::NullDirection, "bound direction must be causative or preventive");
}

ObservedAssociation forward_observed_rr(const TrueBinaryModel& t,
                                        const OutcomeMisclassification& m) {
  const double p1_star = m.s1() * t.p1() + m.f1() * (1.0 - t.p1());
  const double p0_star = m.s0() * t.p0() + m.f0() * (1.0 - t.p0());
  return ObservedAssociation(p1_star / p0_star, RatioScale::risk_ratio);
}

}  // namespace dme
