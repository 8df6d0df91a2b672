#include "dme/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

namespace dme {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::InvalidEstimate: return "InvalidEstimate";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::ZeroCell: return "ZeroCell";
    case ErrorCode::EmptyMargin: return "EmptyMargin";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::ScaleMismatch: return "ScaleMismatch";
    case ErrorCode::NullDirection: return "NullDirection";
    case ErrorCode::AlreadyNull: return "AlreadyNull";
    case ErrorCode::TargetBeyondEstimate: return "TargetBeyondEstimate";
    case ErrorCode::MissingInterval: return "MissingInterval";
    case ErrorCode::DegenerateGamma2: return "DegenerateGamma2";
    case ErrorCode::InvalidVariance: return "InvalidVariance";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
  }
  return "Unknown";
}

const char* to_string(RatioScale scale) {
  return scale == RatioScale::risk_ratio ? "risk-ratio" : "odds-ratio";
}

const char* to_string(EffectDirection direction) {
  switch (direction) {
    case EffectDirection::causative: return "causative";
    case EffectDirection::preventive: return "preventive";
    case EffectDirection::null: return "null";
  }
  return "null";
}

RatioScale parse_ratio_scale(const std::string& text) {
  if (text == "risk-ratio") return RatioScale::risk_ratio;
  if (text == "odds-ratio") return RatioScale::odds_ratio;
  throw ValidationError(ErrorCode::ScaleMismatch, "unknown ratio scale '" + text + "'");
}

EffectDirection parse_effect_direction(const std::string& text) {
  if (text == "causative") return EffectDirection::causative;
  if (text == "preventive") return EffectDirection::preventive;
  if (text == "null") return EffectDirection::null;
  throw ValidationError(ErrorCode::NullDirection, "unknown direction '" + text + "'");
}

double require_open_probability(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << name << " must lie strictly inside (0, 1), got " << p;
    throw ValidationError(ErrorCode::InvalidProbability, msg.str());
  }
  return p;
}

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

ObservedAssociation::ObservedAssociation(double estimate, RatioScale scale,
                                         std::optional<double> ci_lower,
                                         std::optional<double> ci_upper)
    : estimate_(estimate), scale_(scale), ci_lower_(ci_lower), ci_upper_(ci_upper) {
  if (!positive_finite(estimate)) {
    std::ostringstream msg;
    msg << "estimate must be a positive finite ratio, got " << estimate;
    throw ValidationError(ErrorCode::InvalidEstimate, msg.str());
  }
  if ((ci_lower && !positive_finite(*ci_lower)) || (ci_upper && !positive_finite(*ci_upper))) {
    throw ValidationError(ErrorCode::InvalidInterval, "confidence limits must be positive and finite");
  }
  if (ci_lower && ci_upper && !(*ci_lower <= estimate && estimate <= *ci_upper)) {
    std::ostringstream msg;
    msg << "confidence interval (" << *ci_lower << ", " << *ci_upper
        << ") does not bracket the estimate " << estimate;
    throw ValidationError(ErrorCode::InvalidInterval, msg.str());
  }
}

TrueBinaryModel::TrueBinaryModel(double p1, double p0)
    : p1_(require_open_probability(p1, "p1")), p0_(require_open_probability(p0, "p0")) {}

double TrueBinaryModel::odds_ratio() const noexcept {
  return (p1_ / (1.0 - p1_)) / (p0_ / (1.0 - p0_));
}

namespace {

struct Cells {
  double n11, n10, n01, n00;
};

Cells prepare_cells(const ContingencyTable& t, bool haldane) {
  if (t.n11 + t.n10 == 0 || t.n01 + t.n00 == 0) {
    throw ValidationError(ErrorCode::EmptyMargin, "an exposure arm has zero total count");
  }
  Cells c{static_cast<double>(t.n11), static_cast<double>(t.n10),
          static_cast<double>(t.n01), static_cast<double>(t.n00)};
  if (t.has_zero_cell()) {
    if (!haldane) {
      throw ValidationError(ErrorCode::ZeroCell,
                            "table has a zero cell; enable the Haldane correction to proceed");
    }
    c.n11 += 0.5;
    c.n10 += 0.5;
    c.n01 += 0.5;
    c.n00 += 0.5;
  }
  return c;
}

ObservedAssociation wald(double estimate, double se, RatioScale scale) {
  const double log_est = std::log(estimate);
  return ObservedAssociation(estimate, scale, std::exp(log_est - kWaldZ95 * se),
                             std::exp(log_est + kWaldZ95 * se));
}

}  // namespace

ObservedAssociation estimate_risk_ratio(const ContingencyTable& table, bool haldane) {
  const Cells c = prepare_cells(table, haldane);
  const double exposed = c.n11 + c.n10;
  const double unexposed = c.n01 + c.n00;
  const double rr = (c.n11 / exposed) / (c.n01 / unexposed);
  const double se = std::sqrt(1.0 / c.n11 - 1.0 / exposed + 1.0 / c.n01 - 1.0 / unexposed);
  return wald(rr, se, RatioScale::risk_ratio);
}

ObservedAssociation estimate_odds_ratio(const ContingencyTable& table, bool haldane) {
  const Cells c = prepare_cells(table, haldane);
  const double odds_ratio = (c.n11 * c.n00) / (c.n10 * c.n01);
  const double se = std::sqrt(1.0 / c.n11 + 1.0 / c.n10 + 1.0 / c.n01 + 1.0 / c.n00);
  return wald(odds_ratio, se, RatioScale::odds_ratio);
}

EffectDirection null_direction(const ObservedAssociation& assoc) {
  if (assoc.estimate() > 1.0) return EffectDirection::causative;
  if (assoc.estimate() < 1.0) return EffectDirection::preventive;
  return EffectDirection::null;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void csv_error(std::size_t line_no, const std::string& what) {
  throw ValidationError(ErrorCode::MalformedCsv,
                        "line " + std::to_string(line_no) + ": " + what);
}

int parse_binary(const std::string& text, std::size_t line_no, const char* column) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  csv_error(line_no, std::string(column) + " must be 0 or 1, got '" + text + "'");
}

std::uint64_t parse_count(const std::string& text, std::size_t line_no) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    csv_error(line_no, "count must be a non-negative integer, got '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::out_of_range&) {
    csv_error(line_no, "count out of range");
  }
}

}  // namespace

std::vector<ContingencyTable> read_contingency_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_fields(trim(line));
      break;
    }
  }
  if (header.empty()) throw ValidationError(ErrorCode::MalformedCsv, "empty CSV input");

  const bool with_stratum = header.size() == 4;
  if (!(header.size() == 3 || with_stratum) || header[0] != "exposure" ||
      header[1] != "outcome" || header[2] != "count" || (with_stratum && header[3] != "stratum")) {
    csv_error(line_no, "header must be 'exposure,outcome,count[,stratum]'");
  }

  std::vector<ContingencyTable> tables;
  std::map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    const auto fields = split_fields(row);
    if (fields.size() != header.size()) {
      csv_error(line_no, "expected " + std::to_string(header.size()) + " fields");
    }
    const int exposure = parse_binary(fields[0], line_no, "exposure");
    const int outcome = parse_binary(fields[1], line_no, "outcome");
    const std::uint64_t count = parse_count(fields[2], line_no);
    const std::string label = with_stratum ? fields[3] : "all";

    auto [it, inserted] = index.try_emplace(label, tables.size());
    if (inserted) {
      ContingencyTable t;
      t.stratum_label = label;
      tables.push_back(t);
    }
    ContingencyTable& t = tables[it->second];
    std::uint64_t& cell = exposure ? (outcome ? t.n11 : t.n10) : (outcome ? t.n01 : t.n00);
    cell += count;
  }

  if (tables.empty()) throw ValidationError(ErrorCode::EmptyTable, "CSV contains no data rows");
  for (const auto& t : tables) {
    if (t.total() == 0) {
      throw ValidationError(ErrorCode::EmptyTable,
                            "stratum '" + t.stratum_label.value_or("all") + "' has zero total count");
    }
  }
  return tables;
}

std::vector<ContingencyTable> read_contingency_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(ErrorCode::MalformedCsv, "cannot open '" + path + "'");
  return read_contingency_csv(in);
}

}  // namespace dme
