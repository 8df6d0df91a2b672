#pragma once

// Analysis reports and their two renderings: a fixed-width text block for
// people and a JSON document with top-level `mode`, `inputs`, `results`
// and `warnings` for pipelines. JSON carries full precision; only the text
// rendering rounds (to 2 decimals).

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dme/domain.hpp"
#include "dme/exposure_dme.hpp"
#include "dme/oracle.hpp"
#include "dme/outcome_dme.hpp"
#include "dme/thresholds.hpp"

namespace dme {

struct CurveRange {
  double min = 1.0;
  double max = 1.0;
  int steps = 1;
};

struct CurveRow {
  double assumed_dme;
  double implied_bound;
};

/// Bound as a function of an assumed DME factor k >= 1.
///
/// For an estimate >= 1 each row is (k, estimate / k): the lower bound on
/// the true ratio when the maximum DME is k. For an estimate < 1 the
/// factor is read as a minimum DME of 1/k and the row is (k, estimate * k),
/// an upper bound. Steps are evenly spaced from min to max inclusive.
/// Throws UsageError on an empty or inverted range, or min < 1.
std::vector<CurveRow> emit_curve(const ObservedAssociation& observed, const CurveRange& range);

void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows);

struct DmeBoundReport {
  std::string mode;
  nlohmann::json inputs = nlohmann::json::object();

  std::optional<ObservedAssociation> observed;
  std::optional<EffectDirection> direction;

  std::optional<OutcomeDmeComponents> outcome_components;
  std::optional<ExposureDmeComponents> exposure_components;

  // Lower bound for a causative effect, upper bound for a preventive one.
  std::optional<double> bound;
  std::optional<EffectDirection> bound_direction;

  std::optional<Threshold> explain_away;
  std::optional<double> shift_target;
  std::optional<Threshold> shift;
  std::optional<Threshold> ci_shift;

  // Exposure mode: r_c or r_i is the binding term of the bound.
  std::optional<bool> classification_ratio_advisory;

  // Continuous modes.
  std::optional<double> corrected_estimate;
  std::optional<double> lambda;
  bool approximate = false;

  std::vector<CurveRow> curve;
  std::vector<std::string> warnings;
};

nlohmann::json to_json(const DmeBoundReport& report);
DmeBoundReport report_from_json(const nlohmann::json& doc);
std::string render_text(const DmeBoundReport& report);

nlohmann::json to_json(const oracle::VerificationReport& report);
oracle::VerificationReport verification_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const oracle::Theorem4ExplorationRow& row);

// Verification run rendered in the same top-level shape as a bound report.
nlohmann::json verification_document(const oracle::GridSpec& spec,
                                     const std::vector<oracle::VerificationReport>& reports,
                                     const std::vector<oracle::Theorem4ExplorationRow>& exploration);
std::string render_verification_text(const std::vector<oracle::VerificationReport>& reports,
                                     const std::vector<oracle::Theorem4ExplorationRow>& exploration);

// Fixed two-decimal display rounding.
std::string display2(double x);

}  // namespace dme
