#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dme/cli.hpp"

using namespace dme;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dmesens");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("dmesens_test_" + name)).string();
}

std::string write_table(const std::string& name, const std::string& body) {
  const auto path = temp_path(name);
  std::ofstream(path) << body;
  return path;
}

const char* kTable = "exposure,outcome,count\n1,1,30\n1,0,70\n0,1,20\n0,0,80\n";

}  // namespace

TEST_CASE("worked example through exposure-or") {
  const auto r = invoke({"exposure-or", "--estimate", "1.51", "--ci", "1.03,2.22", "--target", "1.1", "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["mode"] == "exposure-or");
  CHECK(j["results"]["explain_away"]["factor"] == 1.51);
  CHECK(j["results"]["shift"]["factor"].get<double>() == doctest::Approx(1.51 / 1.1).epsilon(1e-15));
  CHECK(j["results"]["ci_shift"]["factor"] == 1.03);
  CHECK(j["results"]["direction"] == "causative");
  CHECK(j["inputs"]["estimate"] == 1.51);
  CHECK_FALSE(j["warnings"].empty());

  const auto text = invoke({"exposure-or", "--estimate", "1.51", "--ci", "1.03,2.22", "--target", "1.1"});
  REQUIRE(text.code == 0);
  CHECK(text.out.find("1.51 (inflating)") != std::string::npos);
  CHECK(text.out.find("1.37 (inflating)") != std::string::npos);
  CHECK(text.out.find("1.03 (inflating)") != std::string::npos);
}

TEST_CASE("outcome-rr from a table") {
  const auto path = write_table("rr.csv", kTable);
  const auto r = invoke({"outcome-rr", "--table", path, "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["results"]["observed"]["estimate"].get<double>() == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(j["results"]["observed"]["scale"] == "risk-ratio");
  CHECK(j["results"]["explain_away"]["factor"].get<double>() == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(j["inputs"]["table"]["n11"] == 30);
  CHECK(j["results"]["ci_shift"]["factor"] == 1.0);
}

TEST_CASE("exposure-or from a table uses the odds ratio") {
  const auto path = write_table("or.csv", kTable);
  const auto r = invoke({"exposure-or", "--table", path, "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["results"]["observed"]["estimate"].get<double>() == doctest::Approx(12.0 / 7.0));

  const auto rare = invoke({"exposure-or", "--table", path, "--assume-rare-outcome", "--format", "json"});
  REQUIRE(rare.code == 0);
  const json j = json::parse(rare.out);
  CHECK(j["results"]["observed"]["scale"] == "risk-ratio");
  bool caveat = false;
  for (const auto& w : j["warnings"]) caveat = caveat || w.get<std::string>() == kRareOutcomeCaveat;
  CHECK(caveat);
}

TEST_CASE("bounds with misclassification parameters") {
  const auto r = invoke({"outcome-rr", "--estimate", "2.1", "--s1", "0.9", "--s0", "0.8", "--f1", "0.1", "--f0", "0.05",
                         "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["results"]["bound"]["value"].get<double>() == doctest::Approx(1.05));
  CHECK(j["results"]["bound"]["kind"] == "lower");
  CHECK(j["results"]["outcome_components"]["max_dme"].get<double>() == doctest::Approx(2.0));

  const auto e = invoke({"exposure-or", "--estimate", "3.2632", "--s1p", "0.9", "--s0p", "0.8", "--f1p", "0.2", "--f0p",
                         "0.1", "--format", "json"});
  REQUIRE(e.code == 0);
  const json k = json::parse(e.out);
  CHECK(k["results"]["bound"]["value"].get<double>() == doctest::Approx(0.8158).epsilon(1e-4));
  CHECK(k["results"]["classification_ratio_advisory"] == true);
  CHECK(k["results"]["exposure_components"]["r_incorrect"].get<double>() == doctest::Approx(4.0));

  const auto prev = invoke({"outcome-rr", "--estimate", "0.7", "--s1", "0.4", "--s0", "0.8", "--f1", "0.1", "--f0", "0.1",
                            "--format", "json"});
  REQUIRE(prev.code == 0);
  const json p = json::parse(prev.out);
  CHECK(p["results"]["bound"]["kind"] == "upper");
  CHECK(p["results"]["bound"]["value"].get<double>() == doctest::Approx(1.4));
  CHECK(p["results"]["explain_away"]["direction"] == "deflating");
}

TEST_CASE("curve output") {
  const auto csv = temp_path("curve.csv");
  const auto r = invoke({"exposure-or", "--estimate", "1.51", "--curve", "1,2,3", "--curve-out", csv, "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["results"]["curve"].size() == 3);
  CHECK(j["results"]["curve"][2]["implied_bound"].get<double>() == doctest::Approx(0.755));
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "assumed_dme,implied_bound");

  CHECK(invoke({"exposure-or", "--estimate", "1.51", "--curve", "2,1,3"}).code == cli::kExitUsage);
  CHECK(invoke({"exposure-or", "--estimate", "1.51", "--curve", "1,2"}).code == cli::kExitUsage);
}

TEST_CASE("continuous modes") {
  const auto a = invoke({"continuous-outcome", "--beta-star", "0.7", "--gamma1", "0.2", "--gamma2", "1", "--format", "json"});
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out)["results"]["corrected_estimate"].get<double>() == doctest::Approx(0.5));

  const auto b = invoke({"continuous-exposure", "--coeff-star", "0.6", "--gamma1", "0.3", "--sigma-a2", "2", "--sigma-u2",
                         "2", "--outcome", "rare-binary-logistic", "--format", "json"});
  REQUIRE(b.code == 0);
  const json j = json::parse(b.out);
  CHECK(j["results"]["corrected_estimate"].get<double>() == doctest::Approx(1.05));
  CHECK(j["results"]["approximate"] == true);
  CHECK(j["results"]["lambda"].get<double>() == doctest::Approx(0.5));

  CHECK(invoke({"continuous-outcome", "--beta-star", "0.7", "--gamma1", "0.2", "--gamma2", "0"}).code ==
        cli::kExitValidation);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"bogus"}).code == cli::kExitUsage);
  CHECK(invoke({"outcome-rr"}).code == cli::kExitUsage);
  CHECK(invoke({"outcome-rr", "--estimate", "1.5", "--s1", "0.9"}).code == cli::kExitUsage);
  CHECK(invoke({"outcome-rr", "--estimate", "-1"}).code == cli::kExitValidation);
  CHECK(invoke({"outcome-rr", "--estimate", "1.5", "--target", "2"}).code == cli::kExitValidation);
  CHECK(invoke({"outcome-rr", "--estimate", "1.5", "--ci", "1.6,2"}).code == cli::kExitValidation);
  CHECK(invoke({"outcome-rr", "--estimate", "1.5", "--s1", "1", "--s0", "0.5", "--f1", "0.1", "--f0", "0.1"}).code ==
        cli::kExitValidation);
  CHECK(invoke({"outcome-rr", "--estimate", "1.5", "--format", "xml"}).code == cli::kExitUsage);
  CHECK(invoke({"outcome-rr", "--help"}).code == cli::kExitOk);

  const auto zero = write_table("zero.csv", "exposure,outcome,count\n1,1,0\n1,0,10\n0,1,5\n0,0,5\n");
  const auto z = invoke({"outcome-rr", "--table", zero});
  CHECK(z.code == cli::kExitValidation);
  CHECK(z.err.find("ZeroCell") != std::string::npos);
  CHECK(invoke({"outcome-rr", "--table", zero, "--haldane"}).code == cli::kExitOk);
}

TEST_CASE("strata must be chosen explicitly") {
  const auto path = write_table("strata.csv",
                                "exposure,outcome,count,stratum\n1,1,30,a\n1,0,70,a\n0,1,20,a\n0,0,80,a\n"
                                "1,1,10,b\n1,0,10,b\n0,1,10,b\n0,0,10,b\n");
  CHECK(invoke({"outcome-rr", "--table", path}).code == cli::kExitUsage);
  const auto b = invoke({"outcome-rr", "--table", path, "--stratum", "b", "--format", "json"});
  REQUIRE(b.code == 0);
  CHECK(json::parse(b.out)["results"]["observed"]["estimate"] == 1.0);
  CHECK(invoke({"outcome-rr", "--table", path, "--stratum", "zzz"}).code == cli::kExitUsage);
}

TEST_CASE("already-null estimate is reported, not rejected") {
  const auto r = invoke({"outcome-rr", "--estimate", "1", "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["results"]["direction"] == "null");
  CHECK_FALSE(j["results"].contains("explain_away"));
}

TEST_CASE("reports are reproducible from their echoed inputs") {
  const auto r = invoke({"exposure-or", "--estimate", "1.51", "--ci", "1.03,2.22", "--target", "1.1", "--s1p", "0.7",
                         "--s0p", "0.6", "--f1p", "0.2", "--f0p", "0.15", "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  const json& in = j["inputs"];
  std::vector<std::string> args = {"exposure-or", "--format", "json"};
  auto num = [](const json& v) {
    std::ostringstream s;
    s.precision(17);
    s << v.get<double>();
    return s.str();
  };
  args.insert(args.end(), {"--estimate", num(in["estimate"]), "--ci", num(in["ci"][0]) + "," + num(in["ci"][1]),
                           "--target", num(in["target"])});
  for (const char* k : {"s1p", "s0p", "f1p", "f0p"}) {
    args.push_back(std::string("--") + k);
    args.push_back(num(in["misclassification"][k]));
  }
  const auto again = invoke(args);
  REQUIRE(again.code == 0);
  CHECK(again.out == r.out);
}

TEST_CASE("verify subcommand") {
  const auto a = invoke({"verify", "--all", "--seed", "5", "--points", "3", "--draws", "100", "--format", "json"});
  REQUIRE(a.code == 0);
  const json j = json::parse(a.out);
  CHECK(j["mode"] == "verify");
  CHECK(j["results"]["reports"].size() == cli::check_names().size());
  CHECK(j["results"]["all_passed"] == true);

  const auto b = invoke({"verify", "--all", "--seed", "5", "--points", "3", "--draws", "100", "--format", "json"});
  CHECK(a.out == b.out);

  const auto one = invoke({"verify", "--check", "theorem3", "--points", "3", "--draws", "10", "--format", "json"});
  REQUIRE(one.code == 0);
  CHECK(json::parse(one.out)["results"]["reports"].size() == 1);

  CHECK(invoke({"verify", "--check", "nope"}).code == cli::kExitUsage);
  CHECK(invoke({"verify", "--points", "1"}).code == cli::kExitValidation);

  const auto ex = invoke({"verify", "--check", "theorem4", "--points", "3", "--draws", "0", "--explore-theorem4",
                          "--explore-samples", "2000", "--format", "json"});
  REQUIRE(ex.code == 0);
  CHECK(json::parse(ex.out)["results"]["theorem4_differential_exploration"].size() == 6);
}

TEST_CASE("run() dispatches typed requests") {
  cli::AnalysisRequest req;
  req.mode = cli::Mode::exposure_or;
  cli::BinaryInputs in;
  in.estimate = 1.51;
  in.ci = std::make_pair(1.03, 2.22);
  in.target = 1.1;
  req.inputs = in;
  const auto result = cli::run(req);
  const auto& report = std::get<DmeBoundReport>(result);
  CHECK(report.explain_away->factor == 1.51);
  CHECK(report.ci_shift->factor == 1.03);
}
