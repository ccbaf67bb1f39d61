// Plain-text analysis reports: one `name value unit [verdict]` line per entry.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sramwb {

enum class Verdict { None, Pass, Fail };

struct ReportEntry {
  std::string name;
  double value = 0.0;
  std::string unit;  // "" for dimensionless quantities and counts
  Verdict verdict = Verdict::None;
  std::string provenance;  // operation that produced the value

  bool operator==(const ReportEntry&) const = default;
};

// True for the unit strings reports may carry.
bool is_declared_unit(const std::string& unit);

class AnalysisReport {
 public:
  // Throws std::invalid_argument for an undeclared unit.
  void add(std::string name, double value, std::string unit, std::string provenance,
           Verdict verdict = Verdict::None);
  void note(std::string text);
  void header(std::string text);
  void merge(const AnalysisReport& other);

  const std::vector<ReportEntry>& entries() const { return entries_; }
  const std::vector<std::string>& notes() const { return notes_; }
  std::optional<ReportEntry> find(const std::string& name) const;
  double value(const std::string& name) const;  // throws std::out_of_range

  // Header lines and notes print as "# ..." comments around the entries.
  std::string to_text() const;

 private:
  std::vector<std::string> header_;
  std::vector<ReportEntry> entries_;
  std::vector<std::string> notes_;
};

}  // namespace sramwb
