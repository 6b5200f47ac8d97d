#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace lrfim {

enum class CheckStatus { Pass, Violation, HypothesisNotMet };

std::string to_string(CheckStatus s);

/// One evaluated inequality lhs <= rhs.
struct CheckReport {
  std::string id;
  double lhs = 0;
  double rhs = 0;
  CheckStatus status = CheckStatus::Pass;

  double margin() const { return rhs - lhs; }
  bool violated() const { return status == CheckStatus::Violation; }
};

/// Pass iff lhs <= rhs up to a relative 1e-12 slack for rounding in the summations.
CheckReport make_check(std::string id, double lhs, double rhs, bool hypothesis_met = true);

struct CampaignSummary {
  std::size_t pass = 0;
  std::size_t violations = 0;
  std::size_t not_met = 0;
  double min_margin = 0;
  bool any = false;

  void add(const CheckReport& r);
  void merge(const CampaignSummary& o);
  bool ok() const { return violations == 0; }
};

/// CSV with '#'-prefixed header lines; numbers printed with %.17g so output is reproducible.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
  void row(const std::vector<std::string>& cells);
  void write(std::ostream& os) const;
  std::string str() const;

  static std::string num(double v);
  static std::string num(std::int64_t v);
  static std::string num(std::uint64_t v);

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace lrfim
