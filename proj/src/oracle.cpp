#include "dme/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dme/continuous_dme.hpp"

namespace dme::oracle {

void GridSpec::validate() const {
  if (points_per_axis < 2) {
    throw ValidationError(ErrorCode::InvalidGrid, "points_per_axis must be at least 2");
  }
  if (!(lower > 0.0 && lower < upper && upper < 1.0)) {
    throw ValidationError(ErrorCode::InvalidGrid, "grid bounds must satisfy 0 < lower < upper < 1");
  }
}

namespace {

std::string failure_message(const VerificationReport& r) {
  std::ostringstream msg;
  msg << r.theorem_id << ": " << r.violations << " violation(s) in " << r.cases_checked
      << " cases";
  if (r.first_counterexample) {
    msg << "; first counterexample:";
    for (const auto& [name, value] : r.first_counterexample->parameters) {
      msg << ' ' << name << '=' << value;
    }
    msg << " slack=" << r.first_counterexample->slack;
  }
  return msg.str();
}

using Params = std::vector<std::pair<std::string, double>>;

// Accumulates slack over cases in enumeration order.
class Tally {
 public:
  Tally(std::string id, const GridSpec& spec) {
    report_.theorem_id = std::move(id);
    report_.seed = spec.seed;
    report_.worst_slack = std::numeric_limits<double>::infinity();
  }

  // `slack` is bound side minus bounded side; `scale` sets the tolerance.
  template <typename MakeParams>
  void record(double slack, double scale, MakeParams&& make_params) {
    ++report_.cases_checked;
    report_.worst_slack = std::min(report_.worst_slack, slack);
    if (slack < -kTolerance * scale || !std::isfinite(slack)) {
      if (report_.violations++ == 0) {
        report_.first_counterexample = Counterexample{make_params(), slack};
      }
    }
  }

  void residual(double r) { report_.max_abs_residual = std::max(report_.max_abs_residual, r); }

  VerificationReport finish(std::uint64_t grid_cells, std::uint64_t draws) {
    report_.grid_cells = grid_cells;
    report_.random_draws = draws;
    return report_;
  }

 private:
  VerificationReport report_;
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  v.back() = hi;
  return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
  auto v = linspace(std::log(lo), std::log(hi), n);
  for (auto& x : v) x = std::exp(x);
  v.front() = lo;
  v.back() = hi;
  return v;
}

// Uniform doubles built from raw engine output so draws do not depend on
// the standard library's distribution implementations.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  double normal() {
    // Box-Muller; 1 - unit() lies in (0, 1].
    const double r = std::sqrt(-2.0 * std::log(1.0 - unit()));
    return r * std::cos(2.0 * 3.14159265358979323846 * unit());
  }

 private:
  std::mt19937_64 engine_;
};

template <std::size_t D>
struct GridWalk {
  int n;
  std::uint64_t total;
  std::uint64_t stride;

  GridWalk(int points, std::uint64_t cap) : n(points), total(1), stride(1) {
    for (std::size_t i = 0; i < D; ++i) total *= static_cast<std::uint64_t>(n);
    if (total > cap) stride = (total + cap - 1) / cap;
  }

  std::uint64_t cells() const { return (total + stride - 1) / stride; }

  template <typename Fn>
  void run(Fn&& fn) const {
    std::array<int, D> idx{};
    for (std::uint64_t flat = 0; flat < total; flat += stride) {
      std::uint64_t rest = flat;
      for (std::size_t d = D; d-- > 0;) {
        idx[d] = static_cast<int>(rest % static_cast<std::uint64_t>(n));
        rest /= static_cast<std::uint64_t>(n);
      }
      fn(idx);
    }
  }
};

double scale_of(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

void theorem1_case(Tally& tally, const OutcomeBoundFn& bound, double p1, double p0, double s1,
                   double s0, double f1, double f0) {
  const TrueBinaryModel truth(p1, p0);
  const OutcomeMisclassification m(s1, s0, f1, f0);
  const auto observed = forward_observed_rr(truth, m);
  const auto c = dme_components_rr(m);
  const double true_rr = truth.risk_ratio();
  auto params = [&] {
    return Params{{"p1", p1}, {"p0", p0}, {"s1", s1}, {"s0", s0}, {"f1", f1}, {"f0", f0}};
  };
  if (p1 >= p0) {
    const double b = bound(observed, c, EffectDirection::causative);
    tally.record(true_rr - b, scale_of(true_rr, b), params);
  }
  if (p1 <= p0) {
    const double b = bound(observed, c, EffectDirection::preventive);
    tally.record(b - true_rr, scale_of(true_rr, b), params);
  }
}

void theorem2_case(Tally& tally, const ExposureBoundFn& bound, double pi, double p1, double p0,
                   double s1, double s0, double f1, double f0) {
  const PopulationModel pop(pi, TrueBinaryModel(p1, p0));
  const ExposureMisclassification m(s1, s0, f1, f0);
  const auto observed = forward_observed_or(pop, m);
  const auto c = dme_components_or(m);
  const double true_or = pop.outcome().odds_ratio();
  auto params = [&] {
    return Params{{"prevalence", pi}, {"p1", p1}, {"p0", p0}, {"s1p", s1},
                  {"s0p", s0},        {"f1p", f1}, {"f0p", f0}};
  };
  if (p1 >= p0) {
    const double b = bound(observed, c, EffectDirection::causative);
    tally.record(true_or - b, scale_of(true_or, b), params);
  }
  if (p1 <= p0) {
    const double b = bound(observed, c, EffectDirection::preventive);
    tally.record(b - true_or, scale_of(true_or, b), params);
  }
}

template <typename Params_>
void bracket_case(Tally& tally, double observed, double min_dme, double max_dme,
                  Params_&& params) {
  tally.record(observed - min_dme, scale_of(observed, min_dme), params);
  tally.record(max_dme - observed, scale_of(observed, max_dme), params);
}

}  // namespace

VerificationFailure::VerificationFailure(VerificationReport report)
    : std::runtime_error(failure_message(report)), report_(std::move(report)) {}

const VerificationReport& certify(const VerificationReport& report) {
  if (!report.passed()) throw VerificationFailure(report);
  return report;
}

VerificationReport check_theorem1(const GridSpec& spec, const OutcomeBoundFn& bound) {
  spec.validate();
  Tally tally("theorem1-outcome-rr", spec);
  const auto axis = linspace(spec.lower, spec.upper, spec.points_per_axis);
  const GridWalk<6> walk(spec.points_per_axis, kMaxGridCells);
  walk.run([&](const auto& i) {
    theorem1_case(tally, bound, axis[i[0]], axis[i[1]], axis[i[2]], axis[i[3]], axis[i[4]],
                  axis[i[5]]);
  });
  Draws draws(spec.seed);
  for (std::uint64_t k = 0; k < spec.random_draws; ++k) {
    std::array<double, 6> v{};
    for (auto& x : v) x = draws.uniform(spec.lower, spec.upper);
    theorem1_case(tally, bound, v[0], v[1], v[2], v[3], v[4], v[5]);
  }
  return tally.finish(walk.cells(), spec.random_draws);
}

VerificationReport check_theorem2(const GridSpec& spec, const ExposureBoundFn& bound) {
  spec.validate();
  Tally tally("theorem2-exposure-or", spec);
  const auto axis = linspace(spec.lower, spec.upper, spec.points_per_axis);
  const GridWalk<7> walk(spec.points_per_axis, kMaxGridCells);
  walk.run([&](const auto& i) {
    theorem2_case(tally, bound, axis[i[0]], axis[i[1]], axis[i[2]], axis[i[3]], axis[i[4]],
                  axis[i[5]], axis[i[6]]);
  });
  Draws draws(spec.seed);
  for (std::uint64_t k = 0; k < spec.random_draws; ++k) {
    std::array<double, 7> v{};
    for (auto& x : v) x = draws.uniform(spec.lower, spec.upper);
    theorem2_case(tally, bound, v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
  }
  return tally.finish(walk.cells(), spec.random_draws);
}

VerificationReport check_null_outcome(const GridSpec& spec) {
  spec.validate();
  Tally tally("null-outcome-rr", spec);
  auto one = [&](double p, double s1, double s0, double f1, double f0) {
    const OutcomeMisclassification m(s1, s0, f1, f0);
    const auto c = dme_components_rr(m);
    const double observed = forward_observed_rr(TrueBinaryModel(p, p), m).estimate();
    bracket_case(tally, observed, c.min_dme, c.max_dme, [&] {
      return Params{{"p1", p}, {"p0", p}, {"s1", s1}, {"s0", s0}, {"f1", f1}, {"f0", f0}};
    });
  };
  const auto axis = linspace(spec.lower, spec.upper, spec.points_per_axis);
  const GridWalk<5> walk(spec.points_per_axis, kMaxGridCells);
  walk.run([&](const auto& i) { one(axis[i[0]], axis[i[1]], axis[i[2]], axis[i[3]], axis[i[4]]); });
  Draws draws(spec.seed);
  for (std::uint64_t k = 0; k < spec.random_draws; ++k) {
    std::array<double, 5> v{};
    for (auto& x : v) x = draws.uniform(spec.lower, spec.upper);
    one(v[0], v[1], v[2], v[3], v[4]);
  }
  return tally.finish(walk.cells(), spec.random_draws);
}

VerificationReport check_null_exposure(const GridSpec& spec) {
  spec.validate();
  Tally tally("null-exposure-or", spec);
  auto one = [&](double pi, double p, double s1, double s0, double f1, double f0) {
    const ExposureMisclassification m(s1, s0, f1, f0);
    const auto c = dme_components_or(m);
    const double observed =
        forward_observed_or(PopulationModel(pi, TrueBinaryModel(p, p)), m).estimate();
    bracket_case(tally, observed, c.min_dme, c.max_dme, [&] {
      return Params{{"prevalence", pi}, {"p1", p},   {"p0", p},  {"s1p", s1},
                    {"s0p", s0},        {"f1p", f1}, {"f0p", f0}};
    });
  };
  const auto axis = linspace(spec.lower, spec.upper, spec.points_per_axis);
  const GridWalk<6> walk(spec.points_per_axis, kMaxGridCells);
  walk.run([&](const auto& i) {
    one(axis[i[0]], axis[i[1]], axis[i[2]], axis[i[3]], axis[i[4]], axis[i[5]]);
  });
  Draws draws(spec.seed);
  for (std::uint64_t k = 0; k < spec.random_draws; ++k) {
    std::array<double, 6> v{};
    for (auto& x : v) x = draws.uniform(spec.lower, spec.upper);
    one(v[0], v[1], v[2], v[3], v[4], v[5]);
  }
  return tally.finish(walk.cells(), spec.random_draws);
}

VerificationReport check_nondifferential_attenuation(const GridSpec& spec) {
  spec.validate();
  Tally tally("nondifferential-attenuation-rr", spec);
  auto one = [&](double p1, double p0, double s, double f) {
    if (p1 < p0) std::swap(p1, p0);
    const TrueBinaryModel truth(p1, p0);
    const double observed = forward_observed_rr(truth, OutcomeMisclassification(s, s, f, f)).estimate();
    const double true_rr = truth.risk_ratio();
    tally.record(true_rr - observed, scale_of(true_rr, observed), [&] {
      return Params{{"p1", p1}, {"p0", p0}, {"s", s}, {"f", f}};
    });
  };
  const auto axis = linspace(spec.lower, spec.upper, spec.points_per_axis);
  const GridWalk<4> walk(spec.points_per_axis, kMaxGridCells);
  std::uint64_t cells = 0;
  walk.run([&](const auto& i) {
    if (i[0] < i[1]) return;  // p1 >= p0 half of the grid
    ++cells;
    one(axis[i[0]], axis[i[1]], axis[i[2]], axis[i[3]]);
  });
  Draws draws(spec.seed);
  for (std::uint64_t k = 0; k < spec.random_draws; ++k) {
    std::array<double, 4> v{};
    for (auto& x : v) x = draws.uniform(spec.lower, spec.upper);
    one(v[0], v[1], v[2], v[3]);
  }
  return tally.finish(cells, spec.random_draws);
}

VerificationReport check_theorem3(const GridSpec& spec) {
  spec.validate();
  Tally tally("theorem3-continuous-outcome", spec);
  auto one = [&](double b, double g1, double g2) {
    const double recovered =
        correct_beta_outcome(ContinuousOutcomeSpec(forward_beta_star_outcome(b, g1, g2), g1, g2));
    const double residual = std::abs(recovered - b);
    tally.residual(residual);
    const double allowed = kTolerance * std::max(1.0, std::abs(b));
    // Slack in units of the allowed residual so the tolerance test is exact.
    tally.record(allowed - residual, 0.0, [&] {
      return Params{{"beta1", b}, {"gamma1", g1}, {"gamma2", g2}};
    });
  };
  const int n = spec.points_per_axis;
  const auto signed_axis = linspace(-2.0, 2.0, n);
  auto g2_axis = logspace(1e-3, 4.0, n);
  for (std::size_t i = 0, m = g2_axis.size(); i < m; ++i) g2_axis.push_back(-g2_axis[i]);

  std::uint64_t cells = 0;
  for (double b : signed_axis)
    for (double g1 : signed_axis)
      for (double g2 : g2_axis) {
        one(b, g1, g2);
        ++cells;
      }
  Draws draws(spec.seed);
  const double log_lo = std::log(1e-3), log_hi = std::log(4.0);
  for (std::uint64_t k = 0; k < spec.random_draws; ++k) {
    const double b = draws.uniform(-2.0, 2.0);
    const double g1 = draws.uniform(-2.0, 2.0);
    const double mag = std::exp(draws.uniform(log_lo, log_hi));
    const double g2 = draws.unit() < 0.5 ? -mag : mag;
    one(b, g1, g2);
  }
  return tally.finish(cells, spec.random_draws);
}

VerificationReport check_theorem4_nondifferential(const GridSpec& spec) {
  spec.validate();
  Tally tally("theorem4-continuous-exposure-nondifferential", spec);
  auto one = [&](double beta1, double sa2, double su2) {
    const double lambda = sa2 / (sa2 + su2);
    const double recovered = correct_coeff_exposure(ContinuousExposureSpec(beta1 * lambda, 0.0, sa2, su2));
    const double residual = std::abs(recovered - beta1);
    tally.residual(residual);
    const double allowed = kTolerance * std::max(1.0, std::abs(beta1));
    tally.record(allowed - residual, 0.0, [&] {
      return Params{{"beta1", beta1}, {"sigma_a2", sa2}, {"sigma_u2", su2}};
    });
  };
  const int n = spec.points_per_axis;
  const auto beta_axis = linspace(-2.0, 2.0, n);
  const auto sa2_axis = logspace(0.1, 10.0, n);
  auto su2_axis = logspace(0.01, 10.0, n - 1);
  su2_axis.insert(su2_axis.begin(), 0.0);

  std::uint64_t cells = 0;
  for (double b : beta_axis)
    for (double sa2 : sa2_axis)
      for (double su2 : su2_axis) {
        one(b, sa2, su2);
        ++cells;
      }
  Draws draws(spec.seed);
  for (std::uint64_t k = 0; k < spec.random_draws; ++k) {
    const double b = draws.uniform(-2.0, 2.0);
    const double sa2 = std::exp(draws.uniform(std::log(0.1), std::log(10.0)));
    const double su2 = draws.uniform(0.0, 10.0);
    one(b, sa2, su2);
  }
  return tally.finish(cells, spec.random_draws);
}

VerificationReport verify_theorem1(const GridSpec& spec, const OutcomeBoundFn& bound) {
  return certify(check_theorem1(spec, bound));
}
VerificationReport verify_theorem2(const GridSpec& spec, const ExposureBoundFn& bound) {
  return certify(check_theorem2(spec, bound));
}
VerificationReport verify_null_outcome(const GridSpec& spec) {
  return certify(check_null_outcome(spec));
}
VerificationReport verify_null_exposure(const GridSpec& spec) {
  return certify(check_null_exposure(spec));
}
VerificationReport verify_nondifferential_attenuation(const GridSpec& spec) {
  return certify(check_nondifferential_attenuation(spec));
}
VerificationReport verify_theorem3(const GridSpec& spec) { return certify(check_theorem3(spec)); }
VerificationReport verify_theorem4_nondifferential(const GridSpec& spec) {
  return certify(check_theorem4_nondifferential(spec));
}

std::vector<VerificationReport> check_all(const GridSpec& spec) {
  return {check_theorem1(spec),
          check_theorem2(spec),
          check_null_outcome(spec),
          check_null_exposure(spec),
          check_nondifferential_attenuation(spec),
          check_theorem3(spec),
          check_theorem4_nondifferential(spec)};
}

std::vector<Theorem4ExplorationRow> explore_theorem4_differential(std::uint64_t seed,
                                                                  std::uint64_t samples) {
  struct Case {
    double beta1, gamma1, sigma_a2, sigma_u2, sigma_e2;
  };
  static constexpr std::array<Case, 6> cases{{
      {1.0, 0.0, 1.0, 1.0, 1.0},
      {1.0, 0.25, 1.0, 1.0, 1.0},
      {1.0, 0.5, 1.0, 1.0, 1.0},
      {0.5, 0.5, 2.0, 0.5, 1.0},
      {0.0, 0.5, 1.0, 1.0, 1.0},
      {-1.0, 0.3, 1.0, 0.25, 0.5},
  }};

  Draws draws(seed);
  std::vector<Theorem4ExplorationRow> rows;
  for (const auto& c : cases) {
    const double var_y = c.beta1 * c.beta1 * c.sigma_a2 + c.sigma_e2;
    const double cov_y_astar = c.beta1 * c.sigma_a2 + c.gamma1 * var_y;
    const double var_astar = c.sigma_a2 + c.gamma1 * c.gamma1 * var_y +
                             2.0 * c.gamma1 * c.beta1 * c.sigma_a2 + c.sigma_u2;
    const double population = cov_y_astar / var_astar;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::uint64_t k = 0; k < samples; ++k) {
      const double a = std::sqrt(c.sigma_a2) * draws.normal();
      const double y = c.beta1 * a + std::sqrt(c.sigma_e2) * draws.normal();
      const double a_star = a + c.gamma1 * y + std::sqrt(c.sigma_u2) * draws.normal();
      sx += a_star;
      sy += y;
      sxx += a_star * a_star;
      sxy += a_star * y;
    }
    const double n = static_cast<double>(samples);
    const double simulated = (sxy - sx * sy / n) / (sxx - sx * sx / n);

    auto correct = [&](double slope) {
      return correct_coeff_exposure(ContinuousExposureSpec(slope, c.gamma1, c.sigma_a2, c.sigma_u2));
    };
    rows.push_back({c.beta1, c.gamma1, c.sigma_a2, c.sigma_u2, c.sigma_e2, population, simulated,
                    correct(population), correct(simulated)});
  }
  return rows;
}

}  // namespace dme::oracle
