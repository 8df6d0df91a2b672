#include "dme/continuous_dme.hpp"

#include <cmath>
#include <string>

#include "dme/errors.hpp"

namespace dme {

ContinuousOutcomeSpec::ContinuousOutcomeSpec(double beta1_star, double gamma1, double gamma2)
    : beta1_star_(beta1_star), gamma1_(gamma1), gamma2_(gamma2) {
  if (!std::isfinite(beta1_star) || !std::isfinite(gamma1)) {
    throw ValidationError(ErrorCode::InvalidEstimate, "beta1* and gamma1 must be finite");
  }
  if (!std::isfinite(gamma2) || gamma2 == 0.0) {
    throw ValidationError(ErrorCode::DegenerateGamma2, "gamma2 must be finite and non-zero");
  }
}

const char* to_string(ContinuousOutcomeKind kind) {
  return kind == ContinuousOutcomeKind::linear ? "linear" : "rare-binary-logistic";
}

ContinuousOutcomeKind parse_continuous_outcome_kind(const std::string& text) {
  if (text == "linear") return ContinuousOutcomeKind::linear;
  if (text == "rare-binary-logistic") return ContinuousOutcomeKind::rare_binary_logistic;
  throw ValidationError(ErrorCode::InvalidEstimate, "unknown outcome kind '" + text + "'");
}

ContinuousExposureSpec::ContinuousExposureSpec(double coeff_star, double gamma1, double sigma_a2,
                                               double sigma_u2, ContinuousOutcomeKind outcome_kind)
    : coeff_star_(coeff_star),
      gamma1_(gamma1),
      sigma_a2_(sigma_a2),
      sigma_u2_(sigma_u2),
      outcome_kind_(outcome_kind) {
  if (!std::isfinite(coeff_star) || !std::isfinite(gamma1)) {
    throw ValidationError(ErrorCode::InvalidEstimate, "coefficient and gamma1 must be finite");
  }
  if (!(std::isfinite(sigma_a2) && sigma_a2 > 0.0)) {
    throw ValidationError(ErrorCode::InvalidVariance, "sigma_a^2 must be positive");
  }
  if (!(std::isfinite(sigma_u2) && sigma_u2 >= 0.0)) {
    throw ValidationError(ErrorCode::InvalidVariance, "sigma_u^2 must be non-negative");
  }
}

double correct_beta_outcome(const ContinuousOutcomeSpec& s) {
  return (s.beta1_star() - s.gamma1()) / s.gamma2();
}

double correct_coeff_exposure(const ContinuousExposureSpec& s) {
  const double total_var = s.sigma_a2() + s.sigma_u2();
  return (s.coeff_star() - s.gamma1() / total_var) / s.lambda();
}

double forward_beta_star_outcome(double beta1, double gamma1, double gamma2) {
  return gamma1 + gamma2 * beta1;
}

}  // namespace dme
