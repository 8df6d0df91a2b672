#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "dme/domain.hpp"

using namespace dme;

namespace {

ContingencyTable table(std::uint64_t n11, std::uint64_t n10, std::uint64_t n01, std::uint64_t n00) {
  ContingencyTable t;
  t.n11 = n11;
  t.n10 = n10;
  t.n01 = n01;
  t.n00 = n00;
  return t;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.code();
  }
  FAIL("expected ValidationError");
  return ErrorCode::InvalidGrid;
}

}  // namespace

TEST_CASE("risk ratio of the 30/70/20/80 table") {
  const auto rr = estimate_risk_ratio(table(30, 70, 20, 80));
  CHECK(rr.estimate() == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(rr.scale() == RatioScale::risk_ratio);
  // statsmodels Table2x2.riskratio_confint(0.05)
  CHECK(*rr.ci_lower() == doctest::Approx(0.9159608293223658).epsilon(1e-6));
  CHECK(*rr.ci_upper() == doctest::Approx(2.4564369217235686).epsilon(1e-6));
}

TEST_CASE("odds ratio of the 30/70/20/80 table") {
  const auto odds = estimate_odds_ratio(table(30, 70, 20, 80));
  CHECK(odds.estimate() == doctest::Approx(1.7142857142857142).epsilon(1e-14));
  CHECK(odds.scale() == RatioScale::odds_ratio);
  // statsmodels Table2x2.oddsratio_confint(0.05)
  CHECK(*odds.ci_lower() == doctest::Approx(0.8945793467266191).epsilon(1e-6));
  CHECK(*odds.ci_upper() == doctest::Approx(3.285092061377714).epsilon(1e-6));
}

TEST_CASE("symmetric tables give a null estimate") {
  const auto t = table(12, 40, 12, 40);
  CHECK(estimate_risk_ratio(t).estimate() == 1.0);
  CHECK(estimate_odds_ratio(t).estimate() == 1.0);
}

TEST_CASE("zero cells and empty margins") {
  const auto zero = table(0, 10, 5, 5);
  CHECK(code_of([&] { estimate_risk_ratio(zero); }) == ErrorCode::ZeroCell);
  CHECK(code_of([&] { estimate_odds_ratio(zero); }) == ErrorCode::ZeroCell);
  CHECK(code_of([&] { estimate_odds_ratio(table(0, 0, 5, 5), true); }) == ErrorCode::EmptyMargin);
  CHECK(code_of([&] { estimate_risk_ratio(table(3, 4, 0, 0), true); }) == ErrorCode::EmptyMargin);

  SUBCASE("haldane correction recomputes on counts + 0.5") {
    const auto rr = estimate_risk_ratio(zero, true);
    const auto odds = estimate_odds_ratio(zero, true);
    CHECK(rr.estimate() == doctest::Approx((0.5 / 11.0) / (5.5 / 11.0)));
    CHECK(odds.estimate() == doctest::Approx((0.5 * 5.5) / (10.5 * 5.5)));
    // statsmodels on the corrected counts [[0.5, 10.5], [5.5, 5.5]]
    CHECK(*rr.ci_lower() == doctest::Approx(0.0056862578332829376).epsilon(1e-6));
    CHECK(*rr.ci_upper() == doctest::Approx(1.4534097911536135).epsilon(1e-6));
    CHECK(*odds.ci_lower() == doctest::Approx(0.002203072073967128).epsilon(1e-6));
    CHECK(*odds.ci_upper() == doctest::Approx(1.029278035403467).epsilon(1e-6));
  }

  SUBCASE("haldane leaves tables without zero cells alone") {
    CHECK(estimate_odds_ratio(table(30, 70, 20, 80), true).estimate() ==
          estimate_odds_ratio(table(30, 70, 20, 80)).estimate());
  }
}

TEST_CASE("null_direction") {
  CHECK(null_direction(ObservedAssociation(1.51, RatioScale::odds_ratio)) == EffectDirection::causative);
  CHECK(null_direction(ObservedAssociation(1.0, RatioScale::odds_ratio)) == EffectDirection::null);
  CHECK(null_direction(ObservedAssociation(0.8, RatioScale::risk_ratio)) == EffectDirection::preventive);
}

TEST_CASE("observed association validation") {
  CHECK(code_of([] { ObservedAssociation(0.0, RatioScale::risk_ratio); }) == ErrorCode::InvalidEstimate);
  CHECK(code_of([] { ObservedAssociation(-2.0, RatioScale::risk_ratio); }) == ErrorCode::InvalidEstimate);
  CHECK(code_of([] { ObservedAssociation(1.5, RatioScale::risk_ratio, 1.6, 2.0); }) ==
        ErrorCode::InvalidInterval);
  CHECK(code_of([] { ObservedAssociation(1.5, RatioScale::risk_ratio, 0.0, 2.0); }) ==
        ErrorCode::InvalidInterval);
  CHECK_NOTHROW(ObservedAssociation(1.5, RatioScale::risk_ratio, 1.5, 1.5));
  CHECK(code_of([] { TrueBinaryModel(0.0, 0.5); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { TrueBinaryModel(0.5, 1.0); }) == ErrorCode::InvalidProbability);
}

TEST_CASE("estimator properties on random tables") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> cell(1, 400);
  std::uniform_int_distribution<int> factor(2, 9);
  for (int i = 0; i < 2000; ++i) {
    const auto t = table(cell(rng), cell(rng), cell(rng), cell(rng));
    const auto rr = estimate_risk_ratio(t);
    const auto odds = estimate_odds_ratio(t);

    // Common scaling leaves both point estimates unchanged.
    const std::uint64_t k = static_cast<std::uint64_t>(factor(rng));
    const auto scaled = table(t.n11 * k, t.n10 * k, t.n01 * k, t.n00 * k);
    CHECK(estimate_risk_ratio(scaled).estimate() == doctest::Approx(rr.estimate()).epsilon(1e-13));
    CHECK(estimate_odds_ratio(scaled).estimate() == doctest::Approx(odds.estimate()).epsilon(1e-13));

    // Odds ratios are further from the null than risk ratios.
    if (rr.estimate() >= 1.0) CHECK(odds.estimate() >= rr.estimate() * (1 - 1e-14));
    if (rr.estimate() <= 1.0) CHECK(odds.estimate() <= rr.estimate() * (1 + 1e-14));

    CHECK(*rr.ci_lower() <= rr.estimate());
    CHECK(rr.estimate() <= *rr.ci_upper());
    CHECK(*odds.ci_lower() <= odds.estimate());
    CHECK(odds.estimate() <= *odds.ci_upper());
  }
}

TEST_CASE("long-format CSV ingestion") {
  SUBCASE("single stratum") {
    std::istringstream in("exposure,outcome,count\n1,1,30\n1,0,70\n0,1,20\n0,0,80\n");
    const auto tables = read_contingency_csv(in);
    REQUIRE(tables.size() == 1);
    CHECK(tables[0].stratum_label == "all");
    CHECK(tables[0].n11 == 30);
    CHECK(tables[0].n10 == 70);
    CHECK(tables[0].n01 == 20);
    CHECK(tables[0].n00 == 80);
  }
  SUBCASE("strata keep first-appearance order and repeated rows add") {
    std::istringstream in(
        "exposure,outcome,count,stratum\r\n"
        "1,1,5,young\r\n0,0,7,old\r\n1,1,5,young\r\n1,0,3,young\r\n0,1,1,young\r\n0,0,2,young\r\n"
        "1,1,1,old\r\n1,0,1,old\r\n0,1,1,old\r\n");
    const auto tables = read_contingency_csv(in);
    REQUIRE(tables.size() == 2);
    CHECK(tables[0].stratum_label == "young");
    CHECK(tables[0].n11 == 10);
    CHECK(tables[1].stratum_label == "old");
    CHECK(tables[1].n00 == 7);
  }
  SUBCASE("malformed input") {
    auto fails = [](const std::string& text) {
      std::istringstream in(text);
      return code_of([&] { read_contingency_csv(in); });
    };
    CHECK(fails("") == ErrorCode::MalformedCsv);
    CHECK(fails("a,b,c\n1,1,1\n") == ErrorCode::MalformedCsv);
    CHECK(fails("exposure,outcome,count\n2,1,1\n") == ErrorCode::MalformedCsv);
    CHECK(fails("exposure,outcome,count\n1,1,-1\n") == ErrorCode::MalformedCsv);
    CHECK(fails("exposure,outcome,count\n1,1\n") == ErrorCode::MalformedCsv);
    CHECK(fails("exposure,outcome,count\n") == ErrorCode::EmptyTable);
    CHECK(fails("exposure,outcome,count\n1,1,0\n") == ErrorCode::EmptyTable);
  }
}
