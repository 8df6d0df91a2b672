#pragma once

// Corrected slopes under differential error of a continuous variable.
//
// Outcome error: with E[Y*|a,y] = g0 + g1 a + g2 y and E[Y|a] = b0 + b1 a,
// the slope of Y* on A is b1* = g1 + g2 b1, so b1 = (b1* - g1) / g2.
//
// Exposure error: with E[A*|a,y] = g0 + a + g1 y, residual variance
// sigma_u^2, Var(A) = sigma_a^2 and lambda = sigma_a^2 / (sigma_a^2 + sigma_u^2),
// the corrected slope is [b1* - g1 / (sigma_a^2 + sigma_u^2)] / lambda. Here
// b1* is the slope of Y regressed on A*. For a rare binary outcome fitted
// by logistic regression the same expression is only approximate.

#include <string>

namespace dme {

class ContinuousOutcomeSpec {
 public:
  // Throws DegenerateGamma2 when gamma2 == 0 or any input is not finite.
  ContinuousOutcomeSpec(double beta1_star, double gamma1, double gamma2);

  double beta1_star() const noexcept { return beta1_star_; }
  double gamma1() const noexcept { return gamma1_; }
  double gamma2() const noexcept { return gamma2_; }

 private:
  double beta1_star_, gamma1_, gamma2_;
};

enum class ContinuousOutcomeKind { linear, rare_binary_logistic };

const char* to_string(ContinuousOutcomeKind kind);
ContinuousOutcomeKind parse_continuous_outcome_kind(const std::string& text);

class ContinuousExposureSpec {
 public:
  // Throws InvalidVariance unless sigma_a2 > 0 and sigma_u2 >= 0.
  ContinuousExposureSpec(double coeff_star, double gamma1, double sigma_a2, double sigma_u2,
                         ContinuousOutcomeKind outcome_kind = ContinuousOutcomeKind::linear);

  double coeff_star() const noexcept { return coeff_star_; }
  double gamma1() const noexcept { return gamma1_; }
  double sigma_a2() const noexcept { return sigma_a2_; }
  double sigma_u2() const noexcept { return sigma_u2_; }
  ContinuousOutcomeKind outcome_kind() const noexcept { return outcome_kind_; }

  double lambda() const noexcept { return sigma_a2_ / (sigma_a2_ + sigma_u2_); }
  bool approximate() const noexcept {
    return outcome_kind_ == ContinuousOutcomeKind::rare_binary_logistic;
  }

 private:
  double coeff_star_, gamma1_, sigma_a2_, sigma_u2_;
  ContinuousOutcomeKind outcome_kind_;
};

double correct_beta_outcome(const ContinuousOutcomeSpec& s);

double correct_coeff_exposure(const ContinuousExposureSpec& s);

// b1* = g1 + g2 b1. Exact inverse of correct_beta_outcome.
double forward_beta_star_outcome(double beta1, double gamma1, double gamma2);

}  // namespace dme
