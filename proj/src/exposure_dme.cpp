#include "dme/exposure_dme.hpp"

#include <algorithm>

namespace dme {

namespace {

double odds(double p) { return p / (1.0 - p); }

double apply_bound(double estimate, const ExposureDmeComponents& c, EffectDirection direction) {
  switch (direction) {
    case EffectDirection::causative: return estimate / c.max_dme;
    case EffectDirection::preventive: return estimate / c.min_dme;
    case EffectDirection::null: break;
  }
  throw ValidationError(ErrorCode::NullDirection, "bound direction must be causative or preventive");
}

}  // namespace

ExposureMisclassification::ExposureMisclassification(double s1p, double s0p, double f1p,
                                                     double f0p)
    : s1p_(require_open_probability(s1p, "s1'")),
      s0p_(require_open_probability(s0p, "s0'")),
      f1p_(require_open_probability(f1p, "f1'")),
      f0p_(require_open_probability(f0p, "f0'")) {}

PopulationModel::PopulationModel(double prevalence, TrueBinaryModel outcome)
    : prevalence_(require_open_probability(prevalence, "prevalence")), outcome_(outcome) {}

ExposureDmeComponents dme_components_or(const ExposureMisclassification& m) {
  ExposureDmeComponents c{};
  c.or_sensitivity = odds(m.s1p()) / odds(m.s0p());
  c.or_false_positive = odds(m.f1p()) / odds(m.f0p());
  c.r_correct = (m.s1p() / m.s0p()) / ((1.0 - m.f1p()) / (1.0 - m.f0p()));
  c.r_incorrect = (m.f1p() / m.f0p()) / ((1.0 - m.s1p()) / (1.0 - m.s0p()));
  const auto all = {c.or_sensitivity, c.or_false_positive, c.r_correct, c.r_incorrect};
  c.max_dme = std::max(all);
  c.min_dme = std::min(all);
  return c;
}

double bound_true_or(const ObservedAssociation& observed, const ExposureDmeComponents& c,
                     EffectDirection direction) {
  if (observed.scale() != RatioScale::odds_ratio) {
    throw ValidationError(ErrorCode::ScaleMismatch, "exposure bound requires an odds-ratio estimate");
  }
  return apply_bound(observed.estimate(), c, direction);
}

bool classification_ratio_advisory(const ExposureDmeComponents& c, EffectDirection direction) {
  const double or_max = std::max(c.or_sensitivity, c.or_false_positive);
  const double or_min = std::min(c.or_sensitivity, c.or_false_positive);
  const bool above = std::max(c.r_correct, c.r_incorrect) > or_max;
  const bool below = std::min(c.r_correct, c.r_incorrect) < or_min;
  switch (direction) {
    case EffectDirection::causative: return above;
    case EffectDirection::preventive: return below;
    case EffectDirection::null: return above || below;
  }
  return above || below;
}

double bound_true_rr_rare_outcome(const ObservedAssociation& observed,
                                  const ExposureDmeComponents& c, EffectDirection direction) {
  if (observed.scale() != RatioScale::risk_ratio) {
    throw ValidationError(ErrorCode::ScaleMismatch,
                          "rare-outcome restatement expects a risk-ratio estimate");
  }
  return apply_bound(observed.estimate(), c, direction);
}

ObservedJoint forward_joint(const PopulationModel& p, const ExposureMisclassification& m) {
  const double pi = p.prevalence();
  const double p1 = p.outcome().p1();
  const double p0 = p.outcome().p0();
  // P(Y=y, A=a) for the four (y, a) cells.
  const double y1a1 = p1 * pi;
  const double y1a0 = p0 * (1.0 - pi);
  const double y0a1 = (1.0 - p1) * pi;
  const double y0a0 = (1.0 - p0) * (1.0 - pi);

  ObservedJoint j{};
  j.y1_astar1 = m.s1p() * y1a1 + m.f1p() * y1a0;
  j.y1_astar0 = (1.0 - m.s1p()) * y1a1 + (1.0 - m.f1p()) * y1a0;
  j.y0_astar1 = m.s0p() * y0a1 + m.f0p() * y0a0;
  j.y0_astar0 = (1.0 - m.s0p()) * y0a1 + (1.0 - m.f0p()) * y0a0;
  return j;
}

ObservedAssociation forward_observed_or(const PopulationModel& p,
                                        const ExposureMisclassification& m) {
  const ObservedJoint j = forward_joint(p, m);
  const double estimate = (j.y1_astar1 / j.y0_astar1) / (j.y1_astar0 / j.y0_astar0);
  return ObservedAssociation(estimate, RatioScale::odds_ratio);
}

}  // namespace dme
