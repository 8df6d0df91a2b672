#pragma once

// Numerical certification of every implemented bound and correction.
//
// Each check enumerates a deterministic grid over the model parameters,
// then adds seeded random draws, generates the observed association with
// the forward model and compares it with the bound. The inequalities are
// exact in real arithmetic; the relative tolerance only absorbs rounding.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dme/domain.hpp"
#include "dme/exposure_dme.hpp"
#include "dme/outcome_dme.hpp"

namespace dme::oracle {

inline constexpr double kTolerance = 1e-12;
inline constexpr std::uint64_t kMaxGridCells = 1'000'000;
inline constexpr const char* kGeneratorId = "mt19937_64";

struct GridSpec {
  int points_per_axis = 7;
  double lower = 0.05;
  double upper = 0.95;
  std::uint64_t random_draws = 100'000;
  std::uint64_t seed = 42;

  // Throws ValidationError(InvalidGrid).
  void validate() const;
};

struct Counterexample {
  std::vector<std::pair<std::string, double>> parameters;
  double slack = 0.0;
};

struct VerificationReport {
  std::string theorem_id;
  std::uint64_t cases_checked = 0;
  std::uint64_t violations = 0;
  // Smallest (bound side - bounded side) seen; negative means the wrong side.
  double worst_slack = 0.0;
  // Largest |recovered - original| for round-trip checks, 0 otherwise.
  double max_abs_residual = 0.0;
  double tolerance = kTolerance;
  std::uint64_t grid_cells = 0;
  std::uint64_t random_draws = 0;
  std::uint64_t seed = 0;
  std::string generator = kGeneratorId;
  std::optional<Counterexample> first_counterexample;

  bool passed() const noexcept { return violations == 0; }
};

class VerificationFailure : public std::runtime_error {
 public:
  explicit VerificationFailure(VerificationReport report);

  const VerificationReport& report() const noexcept { return report_; }

 private:
  VerificationReport report_;
};

// Throws VerificationFailure if the report has violations.
const VerificationReport& certify(const VerificationReport& report);

using OutcomeBoundFn =
    std::function<double(const ObservedAssociation&, const OutcomeDmeComponents&, EffectDirection)>;
using ExposureBoundFn =
    std::function<double(const ObservedAssociation&, const ExposureDmeComponents&, EffectDirection)>;

// Risk-ratio bound over (p1, p0, s1, s0, f1, f0). The bound function is a
// seam for harness self-tests; callers normally keep the default.
VerificationReport check_theorem1(const GridSpec& spec, const OutcomeBoundFn& bound = bound_true_rr);
// Odds-ratio bound over (prevalence, p1, p0, s'1, s'0, f'1, f'0). Grids
// above kMaxGridCells are subsampled with a uniform stride.
VerificationReport check_theorem2(const GridSpec& spec, const ExposureBoundFn& bound = bound_true_or);
// p1 = p0: the observed ratio must lie in [min_dme, max_dme].
VerificationReport check_null_outcome(const GridSpec& spec);
VerificationReport check_null_exposure(const GridSpec& spec);
// s1 = s0, f1 = f0, p1 >= p0: the observed risk ratio is at most p1/p0.
VerificationReport check_nondifferential_attenuation(const GridSpec& spec);
// Continuous outcome round trip over b, gamma1 in [-2, 2], gamma2 in +-[1e-3, 4].
VerificationReport check_theorem3(const GridSpec& spec);
// Continuous exposure with gamma1 = 0: beta1 -> beta1 * lambda -> beta1.
VerificationReport check_theorem4_nondifferential(const GridSpec& spec);

// certify(check_*(spec)).
VerificationReport verify_theorem1(const GridSpec& spec, const OutcomeBoundFn& bound = bound_true_rr);
VerificationReport verify_theorem2(const GridSpec& spec, const ExposureBoundFn& bound = bound_true_or);
VerificationReport verify_null_outcome(const GridSpec& spec);
VerificationReport verify_null_exposure(const GridSpec& spec);
VerificationReport verify_nondifferential_attenuation(const GridSpec& spec);
VerificationReport verify_theorem3(const GridSpec& spec);
VerificationReport verify_theorem4_nondifferential(const GridSpec& spec);

// Every check above, in a fixed order. Never throws on violations.
std::vector<VerificationReport> check_all(const GridSpec& spec);

// Exploratory comparison for continuous exposure error with gamma1 != 0.
//
// Data model: A ~ N(0, sigma_a2), Y = beta1 A + e with e ~ N(0, sigma_e2),
// A* = A + gamma1 Y + U with U ~ N(0, sigma_u2). The slope of Y on A* is
// computed in closed form and by simulation, then passed through
// correct_coeff_exposure. No pass/fail is attached.
struct Theorem4ExplorationRow {
  double beta1;
  double gamma1;
  double sigma_a2;
  double sigma_u2;
  double sigma_e2;
  double population_slope;
  double simulated_slope;
  double corrected_population;
  double corrected_simulated;
};

std::vector<Theorem4ExplorationRow> explore_theorem4_differential(std::uint64_t seed,
                                                                  std::uint64_t samples = 200'000);

}  // namespace dme::oracle
