#include "dme/cli.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace dme::cli {

using nlohmann::json;

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::outcome_rr: return "outcome-rr";
    case Mode::exposure_or: return "exposure-or";
    case Mode::continuous_outcome: return "continuous-outcome";
    case Mode::continuous_exposure: return "continuous-exposure";
    case Mode::verify: return "verify";
  }
  return "unknown";
}

bool VerificationRun::passed() const {
  for (const auto& r : reports) {
    if (!r.passed()) return false;
  }
  return true;
}

namespace {

using CheckFn = std::function<oracle::VerificationReport(const oracle::GridSpec&)>;

const std::vector<std::pair<std::string, CheckFn>>& checks() {
  static const std::vector<std::pair<std::string, CheckFn>> table = {
      {"theorem1", [](const auto& g) { return oracle::check_theorem1(g); }},
      {"theorem2", [](const auto& g) { return oracle::check_theorem2(g); }},
      {"null-outcome", oracle::check_null_outcome},
      {"null-exposure", oracle::check_null_exposure},
      {"attenuation", oracle::check_nondifferential_attenuation},
      {"theorem3", oracle::check_theorem3},
      {"theorem4", oracle::check_theorem4_nondifferential},
  };
  return table;
}

ObservedAssociation observed_from_inputs(const BinaryInputs& in, RatioScale scale, json& echo) {
  if (in.table_path) {
    auto tables = read_contingency_csv_file(*in.table_path);
    const ContingencyTable* chosen = nullptr;
    if (in.stratum) {
      for (const auto& t : tables) {
        if (t.stratum_label == in.stratum) chosen = &t;
      }
      if (!chosen) throw UsageError("stratum '" + *in.stratum + "' not found in " + *in.table_path);
    } else if (tables.size() == 1) {
      chosen = &tables.front();
    } else {
      std::string names;
      for (const auto& t : tables) names += (names.empty() ? "" : ", ") + t.stratum_label.value_or("");
      throw UsageError("table has several strata (" + names + "); choose one with --stratum");
    }
    echo["table"] = {{"path", *in.table_path},
                     {"stratum", chosen->stratum_label.value_or("all")},
                     {"n11", chosen->n11},
                     {"n10", chosen->n10},
                     {"n01", chosen->n01},
                     {"n00", chosen->n00},
                     {"haldane", in.haldane}};
    return scale == RatioScale::risk_ratio ? estimate_risk_ratio(*chosen, in.haldane)
                                           : estimate_odds_ratio(*chosen, in.haldane);
  }
  if (!in.estimate) throw UsageError("either --estimate or --table is required");
  echo["estimate"] = *in.estimate;
  if (in.ci) echo["ci"] = {in.ci->first, in.ci->second};
  if (in.ci) return ObservedAssociation(*in.estimate, scale, in.ci->first, in.ci->second);
  return ObservedAssociation(*in.estimate, scale);
}

DmeBoundReport run_binary(Mode mode, const BinaryInputs& in, const std::optional<CurveRange>& curve) {
  const bool exposure = mode == Mode::exposure_or;
  if (in.estimate && in.table_path) throw UsageError("--estimate and --table are mutually exclusive");
  if (in.assume_rare_outcome && !exposure) {
    throw UsageError("--assume-rare-outcome only applies to exposure-or");
  }

  DmeBoundReport report;
  report.mode = to_string(mode);
  json& echo = report.inputs;
  const RatioScale scale = exposure && !in.assume_rare_outcome ? RatioScale::odds_ratio
                                                               : RatioScale::risk_ratio;
  const ObservedAssociation observed = observed_from_inputs(in, scale, echo);
  report.observed = observed;
  report.direction = null_direction(observed);
  if (exposure) echo["assume_rare_outcome"] = in.assume_rare_outcome;

  const EffectDirection bound_dir = *report.direction == EffectDirection::preventive
                                        ? EffectDirection::preventive
                                        : EffectDirection::causative;
  if (in.misclassification) {
    const auto& p = *in.misclassification;
    if (exposure) {
      echo["misclassification"] = {{"s1p", p[0]}, {"s0p", p[1]}, {"f1p", p[2]}, {"f0p", p[3]}};
      const auto c = dme_components_or(ExposureMisclassification(p[0], p[1], p[2], p[3]));
      report.exposure_components = c;
      report.bound = in.assume_rare_outcome ? bound_true_rr_rare_outcome(observed, c, bound_dir)
                                            : bound_true_or(observed, c, bound_dir);
      report.classification_ratio_advisory = classification_ratio_advisory(c, bound_dir);
      if (*report.classification_ratio_advisory) {
        report.warnings.push_back(
            "a classification ratio (r_c or r_i) is the binding term; thresholds stated in terms of "
            "the two DME odds ratios alone do not apply");
      }
    } else {
      echo["misclassification"] = {{"s1", p[0]}, {"s0", p[1]}, {"f1", p[2]}, {"f0", p[3]}};
      const auto c = dme_components_rr(OutcomeMisclassification(p[0], p[1], p[2], p[3]));
      report.outcome_components = c;
      report.bound = bound_true_rr(observed, c, bound_dir);
    }
    report.bound_direction = bound_dir;
    if (*report.direction == EffectDirection::null) {
      report.warnings.push_back("observed association is null; bound reported for a causative effect");
    }
  } else if (exposure) {
    report.warnings.push_back(
        "thresholds refer to the two DME odds ratios and assume r_c and r_i do not exceed them");
  }
  if (in.assume_rare_outcome) report.warnings.push_back(kRareOutcomeCaveat);

  try {
    report.explain_away = explain_away_threshold(observed);
  } catch (const ValidationError& e) {
    if (e.code() != ErrorCode::AlreadyNull) throw;
    report.warnings.push_back("observed association is already null; nothing to explain away");
  }
  if (in.target) {
    echo["target"] = *in.target;
    report.shift = shift_threshold(observed, *in.target);
    report.shift_target = *in.target;
  }
  if (observed.has_interval()) report.ci_shift = ci_shift_threshold(observed);
  if (curve) {
    echo["curve"] = {{"min", curve->min}, {"max", curve->max}, {"steps", curve->steps}};
    report.curve = emit_curve(observed, *curve);
  }
  return report;
}

DmeBoundReport run_continuous_outcome(const ContinuousOutcomeInputs& in) {
  DmeBoundReport report;
  report.mode = to_string(Mode::continuous_outcome);
  report.inputs = {{"beta1_star", in.beta1_star}, {"gamma1", in.gamma1}, {"gamma2", in.gamma2}};
  report.corrected_estimate = correct_beta_outcome(ContinuousOutcomeSpec(in.beta1_star, in.gamma1, in.gamma2));
  return report;
}

DmeBoundReport run_continuous_exposure(const ContinuousExposureInputs& in) {
  DmeBoundReport report;
  report.mode = to_string(Mode::continuous_exposure);
  report.inputs = {{"coeff_star", in.coeff_star},
                   {"gamma1", in.gamma1},
                   {"sigma_a2", in.sigma_a2},
                   {"sigma_u2", in.sigma_u2},
                   {"outcome", to_string(in.outcome_kind)}};
  const ContinuousExposureSpec spec(in.coeff_star, in.gamma1, in.sigma_a2, in.sigma_u2, in.outcome_kind);
  report.corrected_estimate = correct_coeff_exposure(spec);
  report.lambda = spec.lambda();
  report.approximate = spec.approximate();
  if (spec.approximate()) {
    report.warnings.push_back("rare binary outcome with logistic regression: correction is approximate");
  }
  return report;
}

VerificationRun run_verify(const VerifyInputs& in) {
  in.grid.validate();
  VerificationRun run;
  run.grid = in.grid;
  for (const auto& name : in.checks) {
    bool known = false;
    for (const auto& [id, fn] : checks()) known = known || id == name;
    if (!known) throw UsageError("unknown check '" + name + "'");
  }
  for (const auto& [id, fn] : checks()) {
    const bool wanted =
        in.checks.empty() || std::find(in.checks.begin(), in.checks.end(), id) != in.checks.end();
    if (wanted) run.reports.push_back(fn(in.grid));
  }
  if (in.explore_theorem4) {
    run.exploration = oracle::explore_theorem4_differential(in.grid.seed, in.explore_samples);
  }
  return run;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : checks()) v.push_back(id);
    return v;
  }();
  return names;
}

RunResult run(const AnalysisRequest& request) {
  switch (request.mode) {
    case Mode::outcome_rr:
    case Mode::exposure_or:
      return run_binary(request.mode, std::get<BinaryInputs>(request.inputs), request.curve);
    case Mode::continuous_outcome:
      return run_continuous_outcome(std::get<ContinuousOutcomeInputs>(request.inputs));
    case Mode::continuous_exposure:
      return run_continuous_exposure(std::get<ContinuousExposureInputs>(request.inputs));
    case Mode::verify:
      return run_verify(std::get<VerifyInputs>(request.inputs));
  }
  throw UsageError("unknown mode");
}

json to_json(const RunResult& result) {
  if (const auto* r = std::get_if<DmeBoundReport>(&result)) return dme::to_json(*r);
  const auto& v = std::get<VerificationRun>(result);
  return verification_document(v.grid, v.reports, v.exploration);
}

std::string render_text(const RunResult& result) {
  if (const auto* r = std::get_if<DmeBoundReport>(&result)) return dme::render_text(*r);
  const auto& v = std::get<VerificationRun>(result);
  return render_verification_text(v.reports, v.exploration);
}

namespace {

std::vector<double> split_numbers(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + " expects numbers, got '" + text + "'");
    }
  }
  if (values.size() != expected) {
    throw UsageError(std::string(flag) + " expects " + std::to_string(expected) +
                     " comma-separated values");
  }
  return values;
}

struct BinaryFlags {
  std::optional<double> estimate;
  std::string ci;
  std::optional<double> target;
  std::string table;
  std::string stratum;
  bool haldane = false;
  std::array<std::optional<double>, 4> mis;
  bool rare = false;
};

struct CommonFlags {
  std::string format = "text";
  std::string out;
  std::string curve;
  std::string curve_out;
};

BinaryInputs to_binary_inputs(const BinaryFlags& f) {
  BinaryInputs in;
  in.estimate = f.estimate;
  if (!f.ci.empty()) {
    const auto v = split_numbers(f.ci, 2, "--ci");
    in.ci = std::make_pair(v[0], v[1]);
  }
  in.target = f.target;
  if (!f.table.empty()) in.table_path = f.table;
  if (!f.stratum.empty()) in.stratum = f.stratum;
  in.haldane = f.haldane;
  int given = 0;
  for (const auto& m : f.mis) given += m.has_value();
  if (given != 0 && given != 4) {
    throw UsageError("misclassification parameters must be given all four or not at all");
  }
  if (given == 4) in.misclassification = std::array<double, 4>{*f.mis[0], *f.mis[1], *f.mis[2], *f.mis[3]};
  in.assume_rare_outcome = f.rare;
  return in;
}

void add_common(CLI::App* cmd, CommonFlags& c, bool with_curve) {
  cmd->add_option("--format", c.format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json", "json-shaped", "structured"}));
  cmd->add_option("--out", c.out, "Write the report to this file instead of stdout");
  if (with_curve) {
    cmd->add_option("--curve", c.curve, "Bound curve over assumed DME: MIN,MAX,STEPS");
    cmd->add_option("--curve-out", c.curve_out, "Also write the curve as CSV to this file");
  }
}

void add_binary(CLI::App* cmd, BinaryFlags& f, bool exposure) {
  cmd->add_option("--estimate", f.estimate, "Observed ratio estimate");
  cmd->add_option("--ci", f.ci, "95% confidence limits L,U");
  cmd->add_option("--target", f.target, "Value the estimate should be shifted to");
  cmd->add_option("--table", f.table, "Long-format CSV: exposure,outcome,count[,stratum]");
  cmd->add_option("--stratum", f.stratum, "Stratum to analyse when the CSV has several");
  cmd->add_flag("--haldane", f.haldane, "Add 0.5 to every cell when a cell is zero");
  const char* names[4] = {"--s1", "--s0", "--f1", "--f0"};
  const char* primed[4] = {"--s1p", "--s0p", "--f1p", "--f0p"};
  for (int i = 0; i < 4; ++i) {
    cmd->add_option(exposure ? primed[i] : names[i], f.mis[static_cast<std::size_t>(i)]);
  }
  if (exposure) {
    cmd->add_flag("--assume-rare-outcome", f.rare,
                  "Treat --estimate/--table as a risk ratio under a rare outcome");
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sensitivity analysis for differential measurement error", "dmesens"};
  app.require_subcommand(1);

  CommonFlags common;
  BinaryFlags outcome_flags, exposure_flags;
  ContinuousOutcomeInputs cont_out;
  ContinuousExposureInputs cont_exp;
  std::string outcome_kind = "linear";
  VerifyInputs verify;
  bool verify_all = false;

  auto* outcome_cmd = app.add_subcommand("outcome-rr", "Binary outcome error, risk-ratio scale");
  add_binary(outcome_cmd, outcome_flags, false);
  add_common(outcome_cmd, common, true);

  auto* exposure_cmd = app.add_subcommand("exposure-or", "Binary exposure error, odds-ratio scale");
  add_binary(exposure_cmd, exposure_flags, true);
  add_common(exposure_cmd, common, true);

  auto* cont_out_cmd = app.add_subcommand("continuous-outcome", "Corrected slope, continuous outcome error");
  cont_out_cmd->add_option("--beta-star", cont_out.beta1_star, "Slope of Y* on A")->required();
  cont_out_cmd->add_option("--gamma1", cont_out.gamma1, "Direct effect of A on Y*")->required();
  cont_out_cmd->add_option("--gamma2", cont_out.gamma2, "Effect of Y on Y*")->required();
  add_common(cont_out_cmd, common, false);

  auto* cont_exp_cmd = app.add_subcommand("continuous-exposure", "Corrected slope, continuous exposure error");
  cont_exp_cmd->add_option("--coeff-star", cont_exp.coeff_star, "Slope (or log-odds) of Y on A*")->required();
  cont_exp_cmd->add_option("--gamma1", cont_exp.gamma1, "Effect of Y on A*")->required();
  cont_exp_cmd->add_option("--sigma-a2", cont_exp.sigma_a2, "Var(A | C)")->required();
  cont_exp_cmd->add_option("--sigma-u2", cont_exp.sigma_u2, "Residual variance of A*")->required();
  cont_exp_cmd->add_option("--outcome", outcome_kind, "linear or rare-binary-logistic")
      ->check(CLI::IsMember({"linear", "rare-binary-logistic"}));
  add_common(cont_exp_cmd, common, false);

  auto* verify_cmd = app.add_subcommand("verify", "Certify the bounds against forward models");
  verify_cmd->add_flag("--all", verify_all, "Run every check (default when no --check is given)");
  verify_cmd->add_option("--check", verify.checks, "Check to run; repeatable")
      ->check(CLI::IsMember(check_names()));
  verify_cmd->add_option("--seed", verify.grid.seed, "Seed for the random draws");
  verify_cmd->add_option("--points", verify.grid.points_per_axis, "Grid points per axis");
  verify_cmd->add_option("--draws", verify.grid.random_draws, "Number of random draws");
  verify_cmd->add_option("--lower", verify.grid.lower, "Lower grid bound for probabilities");
  verify_cmd->add_option("--upper", verify.grid.upper, "Upper grid bound for probabilities");
  verify_cmd->add_flag("--explore-theorem4", verify.explore_theorem4,
                       "Add the informational gamma1 != 0 continuous-exposure comparison");
  verify_cmd->add_option("--explore-samples", verify.explore_samples, "Samples per exploration case");
  add_common(verify_cmd, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    AnalysisRequest request;
    if (*outcome_cmd) {
      request.mode = Mode::outcome_rr;
      request.inputs = to_binary_inputs(outcome_flags);
    } else if (*exposure_cmd) {
      request.mode = Mode::exposure_or;
      request.inputs = to_binary_inputs(exposure_flags);
    } else if (*cont_out_cmd) {
      request.mode = Mode::continuous_outcome;
      request.inputs = cont_out;
    } else if (*cont_exp_cmd) {
      request.mode = Mode::continuous_exposure;
      cont_exp.outcome_kind = parse_continuous_outcome_kind(outcome_kind);
      request.inputs = cont_exp;
    } else {
      request.mode = Mode::verify;
      if (verify_all) verify.checks.clear();
      request.inputs = verify;
    }
    request.format = common.format == "text" ? OutputFormat::text : OutputFormat::structured;
    if (!common.curve.empty()) {
      const auto v = split_numbers(common.curve, 3, "--curve");
      if (v[2] != static_cast<int>(v[2])) throw UsageError("--curve steps must be an integer");
      request.curve = CurveRange{v[0], v[1], static_cast<int>(v[2])};
    }

    const RunResult result = run(request);
    const std::string rendered =
        request.format == OutputFormat::text ? render_text(result) : to_json(result).dump(2) + "\n";
    emit(rendered, common.out, out);

    if (const auto* r = std::get_if<DmeBoundReport>(&result); r && !common.curve_out.empty()) {
      std::ostringstream csv;
      write_curve_csv(csv, r->curve);
      emit(csv.str(), common.curve_out, out);
    }
    if (const auto* v = std::get_if<VerificationRun>(&result); v && !v->passed()) {
      for (const auto& rep : v->reports) {
        if (!rep.passed()) err << "verification failed: " << oracle::VerificationFailure(rep).what() << '\n';
      }
      return kExitVerification;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "validation error (" << dme::to_string(e.code()) << "): " << e.what() << '\n';
    return kExitValidation;
  } catch (const oracle::VerificationFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  }
}

}  // namespace dme::cli
