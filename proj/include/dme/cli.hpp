#pragma once

// Request model and dispatcher behind the `dmesens` command-line tool.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dme/continuous_dme.hpp"
#include "dme/oracle.hpp"
#include "dme/report.hpp"

namespace dme::cli {

enum class Mode { outcome_rr, exposure_or, continuous_outcome, continuous_exposure, verify };
enum class OutputFormat { text, structured };

const char* to_string(Mode mode);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitVerification = 3;

struct BinaryInputs {
  std::optional<double> estimate;
  std::optional<std::pair<double, double>> ci;
  std::optional<double> target;
  std::optional<std::string> table_path;
  std::optional<std::string> stratum;
  bool haldane = false;
  // (s1, s0, f1, f0) for outcome error, (s'1, s'0, f'1, f'0) for exposure error.
  std::optional<std::array<double, 4>> misclassification;
  bool assume_rare_outcome = false;
};

struct ContinuousOutcomeInputs {
  double beta1_star = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 1.0;
};

struct ContinuousExposureInputs {
  double coeff_star = 0.0;
  double gamma1 = 0.0;
  double sigma_a2 = 1.0;
  double sigma_u2 = 0.0;
  ContinuousOutcomeKind outcome_kind = ContinuousOutcomeKind::linear;
};

struct VerifyInputs {
  oracle::GridSpec grid;
  // Empty means every check.
  std::vector<std::string> checks;
  bool explore_theorem4 = false;
  std::uint64_t explore_samples = 200'000;
};

using ModeInputs =
    std::variant<BinaryInputs, ContinuousOutcomeInputs, ContinuousExposureInputs, VerifyInputs>;

struct AnalysisRequest {
  Mode mode = Mode::outcome_rr;
  ModeInputs inputs;
  OutputFormat format = OutputFormat::text;
  std::optional<CurveRange> curve;
};

struct VerificationRun {
  oracle::GridSpec grid;
  std::vector<oracle::VerificationReport> reports;
  std::vector<oracle::Theorem4ExplorationRow> exploration;

  bool passed() const;
};

using RunResult = std::variant<DmeBoundReport, VerificationRun>;

// Names accepted by `verify --check`.
const std::vector<std::string>& check_names();

/// Dispatches a validated request. Throws ValidationError for bad
/// parameter values and UsageError for incomplete requests; verification
/// failures are returned in the run rather than thrown.
RunResult run(const AnalysisRequest& request);

nlohmann::json to_json(const RunResult& result);
std::string render_text(const RunResult& result);

/// Full command-line entry point; returns the process exit code.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dme::cli
