#include "dme/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace dme {

using nlohmann::json;

std::vector<CurveRow> emit_curve(const ObservedAssociation& observed, const CurveRange& range) {
  if (range.steps < 1) throw UsageError("curve needs at least one step");
  if (!(std::isfinite(range.min) && std::isfinite(range.max)) || range.min < 1.0) {
    throw UsageError("curve minimum must be at least 1");
  }
  if (range.max < range.min) throw UsageError("curve range is inverted");
  if (range.steps == 1 && range.max != range.min) {
    throw UsageError("a single-step curve needs min == max");
  }

  const double est = observed.estimate();
  std::vector<CurveRow> rows;
  rows.reserve(static_cast<std::size_t>(range.steps));
  for (int i = 0; i < range.steps; ++i) {
    const double k = range.steps == 1
                         ? range.min
                         : range.min + (range.max - range.min) * i / (range.steps - 1);
    rows.push_back({k, est >= 1.0 ? est / k : est * k});
  }
  return rows;
}

void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "assumed_dme,implied_bound\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : rows) out << r.assumed_dme << ',' << r.implied_bound << '\n';
  out.precision(old_precision);
}

std::string display2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

namespace {

json threshold_json(const Threshold& t) {
  return {{"factor", t.factor}, {"direction", to_string(t.direction)}};
}

Threshold threshold_from(const json& j) {
  return {j.at("factor").get<double>(),
          parse_threshold_direction(j.at("direction").get<std::string>())};
}

json observed_json(const ObservedAssociation& o) {
  json j = {{"estimate", o.estimate()}, {"scale", to_string(o.scale())}};
  j["ci_lower"] = o.ci_lower() ? json(*o.ci_lower()) : json(nullptr);
  j["ci_upper"] = o.ci_upper() ? json(*o.ci_upper()) : json(nullptr);
  return j;
}

ObservedAssociation observed_from(const json& j) {
  auto opt = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
  };
  return ObservedAssociation(j.at("estimate").get<double>(),
                             parse_ratio_scale(j.at("scale").get<std::string>()), opt("ci_lower"),
                             opt("ci_upper"));
}

template <typename T, typename F>
void put_optional(json& j, const char* key, const std::optional<T>& value, F&& convert) {
  if (value) j[key] = convert(*value);
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

json to_json(const DmeBoundReport& r) {
  json results = json::object();
  put_optional(results, "observed", r.observed, observed_json);
  put_optional(results, "direction", r.direction, [](auto d) { return to_string(d); });
  put_optional(results, "outcome_components", r.outcome_components, [](const auto& c) {
    return json{{"sensitivity_ratio", c.sensitivity_ratio},
                {"false_positive_ratio", c.false_positive_ratio},
                {"max_dme", c.max_dme},
                {"min_dme", c.min_dme}};
  });
  put_optional(results, "exposure_components", r.exposure_components, [](const auto& c) {
    return json{{"or_sensitivity", c.or_sensitivity},
                {"or_false_positive", c.or_false_positive},
                {"r_correct", c.r_correct},
                {"r_incorrect", c.r_incorrect},
                {"max_dme", c.max_dme},
                {"min_dme", c.min_dme}};
  });
  if (r.bound) {
    const auto dir = r.bound_direction.value_or(EffectDirection::causative);
    results["bound"] = {{"value", *r.bound},
                        {"kind", dir == EffectDirection::preventive ? "upper" : "lower"},
                        {"assumed_direction", to_string(dir)}};
  }
  put_optional(results, "explain_away", r.explain_away, threshold_json);
  if (r.shift) {
    results["shift"] = threshold_json(*r.shift);
    results["shift"]["target"] = r.shift_target.value_or(1.0);
  }
  put_optional(results, "ci_shift", r.ci_shift, threshold_json);
  put_optional(results, "classification_ratio_advisory", r.classification_ratio_advisory,
               [](bool b) { return b; });
  put_optional(results, "corrected_estimate", r.corrected_estimate, [](double x) { return x; });
  put_optional(results, "lambda", r.lambda, [](double x) { return x; });
  if (r.corrected_estimate) results["approximate"] = r.approximate;
  if (!r.curve.empty()) {
    json rows = json::array();
    for (const auto& row : r.curve) {
      rows.push_back({{"assumed_dme", row.assumed_dme}, {"implied_bound", row.implied_bound}});
    }
    results["curve"] = std::move(rows);
  }
  return {{"mode", r.mode}, {"inputs", r.inputs}, {"results", results}, {"warnings", r.warnings}};
}

DmeBoundReport report_from_json(const json& doc) {
  DmeBoundReport r;
  r.mode = doc.at("mode").get<std::string>();
  r.inputs = doc.at("inputs");
  r.warnings = doc.at("warnings").get<std::vector<std::string>>();
  const json& res = doc.at("results");

  if (res.contains("observed")) r.observed = observed_from(res.at("observed"));
  if (auto d = get_optional<std::string>(res, "direction")) r.direction = parse_effect_direction(*d);
  if (res.contains("outcome_components")) {
    const json& c = res.at("outcome_components");
    r.outcome_components = OutcomeDmeComponents{
        c.at("sensitivity_ratio").get<double>(), c.at("false_positive_ratio").get<double>(),
        c.at("max_dme").get<double>(), c.at("min_dme").get<double>()};
  }
  if (res.contains("exposure_components")) {
    const json& c = res.at("exposure_components");
    r.exposure_components = ExposureDmeComponents{
        c.at("or_sensitivity").get<double>(), c.at("or_false_positive").get<double>(),
        c.at("r_correct").get<double>(),      c.at("r_incorrect").get<double>(),
        c.at("max_dme").get<double>(),        c.at("min_dme").get<double>()};
  }
  if (res.contains("bound")) {
    r.bound = res.at("bound").at("value").get<double>();
    r.bound_direction =
        parse_effect_direction(res.at("bound").at("assumed_direction").get<std::string>());
  }
  if (res.contains("explain_away")) r.explain_away = threshold_from(res.at("explain_away"));
  if (res.contains("shift")) {
    r.shift = threshold_from(res.at("shift"));
    r.shift_target = res.at("shift").at("target").get<double>();
  }
  if (res.contains("ci_shift")) r.ci_shift = threshold_from(res.at("ci_shift"));
  r.classification_ratio_advisory = get_optional<bool>(res, "classification_ratio_advisory");
  r.corrected_estimate = get_optional<double>(res, "corrected_estimate");
  r.lambda = get_optional<double>(res, "lambda");
  r.approximate = get_optional<bool>(res, "approximate").value_or(false);
  if (res.contains("curve")) {
    for (const auto& row : res.at("curve")) {
      r.curve.push_back({row.at("assumed_dme").get<double>(), row.at("implied_bound").get<double>()});
    }
  }
  return r;
}

namespace {

void line(std::ostringstream& out, const std::string& label, const std::string& value) {
  out << "  " << std::left << std::setw(34) << label << value << '\n';
}

std::string threshold_text(const Threshold& t) {
  return display2(t.factor) + " (" + to_string(t.direction) + ")";
}

}  // namespace

std::string render_text(const DmeBoundReport& r) {
  std::ostringstream out;
  out << "mode: " << r.mode << '\n';
  if (r.observed) {
    const auto& o = *r.observed;
    std::string est = display2(o.estimate()) + " (" + to_string(o.scale()) + ")";
    if (o.has_interval()) {
      est += " 95% CI " + display2(*o.ci_lower()) + ", " + display2(*o.ci_upper());
    }
    line(out, "observed", est);
  }
  if (r.direction) line(out, "direction", to_string(*r.direction));
  if (r.outcome_components) {
    const auto& c = *r.outcome_components;
    line(out, "sensitivity ratio s1/s0", display2(c.sensitivity_ratio));
    line(out, "false-positive ratio f1/f0", display2(c.false_positive_ratio));
    line(out, "max / min DME", display2(c.max_dme) + " / " + display2(c.min_dme));
  }
  if (r.exposure_components) {
    const auto& c = *r.exposure_components;
    line(out, "sensitivity odds ratio", display2(c.or_sensitivity));
    line(out, "false-positive odds ratio", display2(c.or_false_positive));
    line(out, "correct classification ratio", display2(c.r_correct));
    line(out, "incorrect classification ratio", display2(c.r_incorrect));
    line(out, "max / min DME", display2(c.max_dme) + " / " + display2(c.min_dme));
  }
  if (r.bound) {
    const bool upper = r.bound_direction == EffectDirection::preventive;
    line(out, upper ? "upper bound on true ratio" : "lower bound on true ratio", display2(*r.bound));
  }
  if (r.explain_away) line(out, "explain-away threshold", threshold_text(*r.explain_away));
  if (r.shift) {
    line(out, "shift threshold (to " + display2(r.shift_target.value_or(1.0)) + ")",
         threshold_text(*r.shift));
  }
  if (r.ci_shift) line(out, "CI-shift threshold", threshold_text(*r.ci_shift));
  if (r.classification_ratio_advisory) {
    line(out, "classification ratio advisory", *r.classification_ratio_advisory ? "yes" : "no");
  }
  if (r.corrected_estimate) {
    line(out, r.approximate ? "corrected estimate (approx.)" : "corrected estimate",
         display2(*r.corrected_estimate));
  }
  if (r.lambda) line(out, "attenuation factor lambda", display2(*r.lambda));
  if (!r.curve.empty()) {
    out << "curve:\n";
    out << "  assumed_dme  implied_bound\n";
    for (const auto& row : r.curve) {
      out << "  " << std::left << std::setw(13) << display2(row.assumed_dme)
          << display2(row.implied_bound) << '\n';
    }
  }
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  return out.str();
}

json to_json(const oracle::VerificationReport& r) {
  json j = {{"theorem_id", r.theorem_id},
            {"cases_checked", r.cases_checked},
            {"violations", r.violations},
            {"worst_slack", r.worst_slack},
            {"max_abs_residual", r.max_abs_residual},
            {"tolerance", r.tolerance},
            {"grid_cells", r.grid_cells},
            {"random_draws", r.random_draws},
            {"seed", r.seed},
            {"generator", r.generator},
            {"passed", r.passed()}};
  if (r.first_counterexample) {
    json params = json::object();
    for (const auto& [name, value] : r.first_counterexample->parameters) params[name] = value;
    j["first_counterexample"] = {{"parameters", params}, {"slack", r.first_counterexample->slack}};
  } else {
    j["first_counterexample"] = nullptr;
  }
  return j;
}

oracle::VerificationReport verification_from_json(const json& j) {
  oracle::VerificationReport r;
  r.theorem_id = j.at("theorem_id").get<std::string>();
  r.cases_checked = j.at("cases_checked").get<std::uint64_t>();
  r.violations = j.at("violations").get<std::uint64_t>();
  r.worst_slack = j.at("worst_slack").get<double>();
  r.max_abs_residual = j.at("max_abs_residual").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.grid_cells = j.at("grid_cells").get<std::uint64_t>();
  r.random_draws = j.at("random_draws").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.generator = j.at("generator").get<std::string>();
  if (j.contains("first_counterexample") && !j.at("first_counterexample").is_null()) {
    const json& c = j.at("first_counterexample");
    oracle::Counterexample ce;
    ce.slack = c.at("slack").get<double>();
    for (const auto& [name, value] : c.at("parameters").items()) {
      ce.parameters.emplace_back(name, value.get<double>());
    }
    r.first_counterexample = std::move(ce);
  }
  return r;
}

json to_json(const oracle::Theorem4ExplorationRow& row) {
  return {{"beta1", row.beta1},
          {"gamma1", row.gamma1},
          {"sigma_a2", row.sigma_a2},
          {"sigma_u2", row.sigma_u2},
          {"sigma_e2", row.sigma_e2},
          {"population_slope", row.population_slope},
          {"simulated_slope", row.simulated_slope},
          {"corrected_population", row.corrected_population},
          {"corrected_simulated", row.corrected_simulated}};
}

json verification_document(const oracle::GridSpec& spec,
                           const std::vector<oracle::VerificationReport>& reports,
                           const std::vector<oracle::Theorem4ExplorationRow>& exploration) {
  json inputs = {{"points_per_axis", spec.points_per_axis},
                 {"lower", spec.lower},
                 {"upper", spec.upper},
                 {"random_draws", spec.random_draws},
                 {"seed", spec.seed}};
  json list = json::array();
  bool all_passed = true;
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    all_passed = all_passed && r.passed();
  }
  json results = {{"reports", list}, {"all_passed", all_passed}};
  json warnings = json::array();
  if (!exploration.empty()) {
    json rows = json::array();
    for (const auto& row : exploration) rows.push_back(to_json(row));
    results["theorem4_differential_exploration"] = rows;
    warnings.push_back(
        "continuous exposure exploration with gamma1 != 0 is informational and not part of pass/fail");
  }
  return {{"mode", "verify"}, {"inputs", inputs}, {"results", results}, {"warnings", warnings}};
}

std::string render_verification_text(const std::vector<oracle::VerificationReport>& reports,
                                     const std::vector<oracle::Theorem4ExplorationRow>& exploration) {
  std::ostringstream out;
  out << std::left << std::setw(46) << "check" << std::setw(12) << "cases" << std::setw(12)
      << "violations" << std::setw(16) << "worst_slack" << "max_residual\n";
  for (const auto& r : reports) {
    std::ostringstream slack, resid;
    slack << std::setprecision(4) << r.worst_slack;
    resid << std::setprecision(4) << r.max_abs_residual;
    out << std::setw(46) << r.theorem_id << std::setw(12) << r.cases_checked << std::setw(12)
        << r.violations << std::setw(16) << slack.str() << resid.str() << '\n';
  }
  for (const auto& r : reports) {
    if (r.first_counterexample) {
      out << "counterexample for " << r.theorem_id << ":";
      for (const auto& [name, value] : r.first_counterexample->parameters) {
        out << ' ' << name << '=' << std::setprecision(17) << value;
      }
      out << '\n';
    }
  }
  if (!exploration.empty()) {
    out << "\ncontinuous exposure, gamma1 != 0 (informational)\n";
    out << "  beta1  gamma1  sa2   su2   se2   slope_pop  slope_sim  corrected_pop  corrected_sim\n";
    for (const auto& row : exploration) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "  %5.2f  %6.2f  %4.2f  %4.2f  %4.2f  %9.4f  %9.4f  %13.4f  %13.4f\n",
                    row.beta1, row.gamma1, row.sigma_a2, row.sigma_u2, row.sigma_e2,
                    row.population_slope, row.simulated_slope, row.corrected_population,
                    row.corrected_simulated);
      out << buf;
    }
  }
  return out.str();
}

}  // namespace dme
