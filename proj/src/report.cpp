#include "lrfim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace lrfim {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Violation: return "violation";
    case CheckStatus::HypothesisNotMet: return "hypothesis_not_met";
  }
  return "unknown";
}

CheckReport make_check(std::string id, double lhs, double rhs, bool hypothesis_met) {
  CheckReport r{std::move(id), lhs, rhs, CheckStatus::Pass};
  if (!hypothesis_met) r.status = CheckStatus::HypothesisNotMet;
  else if (std::isnan(lhs) || std::isnan(rhs) || lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs)))
    r.status = CheckStatus::Violation;
  return r;
}

void CampaignSummary::add(const CheckReport& r) {
  switch (r.status) {
    case CheckStatus::Pass: ++pass; break;
    case CheckStatus::Violation: ++violations; break;
    case CheckStatus::HypothesisNotMet: ++not_met; return;
  }
  min_margin = any ? std::min(min_margin, r.margin()) : r.margin();
  any = true;
}

void CampaignSummary::merge(const CampaignSummary& o) {
  pass += o.pass;
  violations += o.violations;
  not_met += o.not_met;
  if (o.any) {
    min_margin = any ? std::min(min_margin, o.min_margin) : o.min_margin;
    any = true;
  }
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) throw std::invalid_argument("CSV row width does not match the header");
  rows_.push_back(cells);
}

namespace {

std::string quoted(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void CsvWriter::write(std::ostream& os) const {
  for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << quoted(r[i]);
    os << '\n';
  }
}

std::string CsvWriter::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvWriter::num(std::int64_t v) { return std::to_string(v); }
std::string CsvWriter::num(std::uint64_t v) { return std::to_string(v); }

}  // namespace lrfim
