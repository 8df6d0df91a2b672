#pragma once

// Validated value types shared by every analysis, plus the 2x2 table
// estimators that turn raw counts into an observed association.
//
// Every result in this library is conditional on a single covariate
// stratum. Tables are never pooled; stratified analyses loop over
// strata on the caller's side.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dme/errors.hpp"

namespace dme {

enum class RatioScale { risk_ratio, odds_ratio };

enum class EffectDirection { causative, preventive, null };

const char* to_string(RatioScale scale);
const char* to_string(EffectDirection direction);
RatioScale parse_ratio_scale(const std::string& text);
EffectDirection parse_effect_direction(const std::string& text);

// Throws ValidationError(InvalidProbability) unless 0 < p < 1.
double require_open_probability(double p, const char* name);

/// A point estimate on a ratio scale with optional 95% limits.
class ObservedAssociation {
 public:
  ObservedAssociation(double estimate, RatioScale scale,
                      std::optional<double> ci_lower = std::nullopt,
                      std::optional<double> ci_upper = std::nullopt);

  double estimate() const noexcept { return estimate_; }
  RatioScale scale() const noexcept { return scale_; }
  std::optional<double> ci_lower() const noexcept { return ci_lower_; }
  std::optional<double> ci_upper() const noexcept { return ci_upper_; }
  bool has_interval() const noexcept { return ci_lower_ && ci_upper_; }

 private:
  double estimate_;
  RatioScale scale_;
  std::optional<double> ci_lower_;
  std::optional<double> ci_upper_;
};

/// True outcome risks p_a = P(Y=1 | A=a) in one stratum.
class TrueBinaryModel {
 public:
  TrueBinaryModel(double p1, double p0);

  double p1() const noexcept { return p1_; }
  double p0() const noexcept { return p0_; }
  double risk_ratio() const noexcept { return p1_ / p0_; }
  double odds_ratio() const noexcept;

 private:
  double p1_;
  double p0_;
};

/// Counts indexed (exposure, outcome): n10 is exposed without the outcome.
struct ContingencyTable {
  std::uint64_t n11 = 0;
  std::uint64_t n10 = 0;
  std::uint64_t n01 = 0;
  std::uint64_t n00 = 0;
  std::optional<std::string> stratum_label;

  std::uint64_t total() const noexcept { return n11 + n10 + n01 + n00; }
  bool has_zero_cell() const noexcept {
    return n11 == 0 || n10 == 0 || n01 == 0 || n00 == 0;
  }
};

// Two-sided 95% normal quantile used for every Wald interval.
inline constexpr double kWaldZ95 = 1.959964;

// Risk ratio of the exposed vs unexposed arm with a log-scale Wald interval.
// With `haldane` set, 0.5 is added to every cell when any cell is zero;
// otherwise a zero cell is a ZeroCell error.
ObservedAssociation estimate_risk_ratio(const ContingencyTable& table,
                                        bool haldane = false);

// Cross-product odds ratio, Wald interval with
// se = sqrt(1/n11 + 1/n10 + 1/n01 + 1/n00). Same zero-cell policy.
ObservedAssociation estimate_odds_ratio(const ContingencyTable& table,
                                        bool haldane = false);

EffectDirection null_direction(const ObservedAssociation& assoc);

/// Reads the long CSV format `exposure,outcome,count[,stratum]`.
///
/// Returns one table per distinct stratum in order of first appearance.
/// Without a stratum column a single table labelled "all" is produced.
/// Repeated (exposure, outcome) rows within a stratum are summed.
std::vector<ContingencyTable> read_contingency_csv(std::istream& in);
std::vector<ContingencyTable> read_contingency_csv_file(const std::string& path);

}  // namespace dme
