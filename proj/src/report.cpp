#include "sramwb/report.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

#include "sramwb/units.hpp"

namespace sramwb {

bool is_declared_unit(const std::string& unit) {
  static const std::array<const char*, 13> kUnits{
      "", "V", "A", "W", "s", "F", "Ohm", "Hz", "m", "m^2", "lambda^2", "F/m^2", "V^0.5"};
  return std::any_of(kUnits.begin(), kUnits.end(), [&](const char* u) { return unit == u; });
}

void AnalysisReport::add(std::string name, double value, std::string unit, std::string provenance,
                         Verdict verdict) {
  if (!is_declared_unit(unit)) throw std::invalid_argument("undeclared unit '" + unit + "'");
  entries_.push_back({std::move(name), value, std::move(unit), verdict, std::move(provenance)});
}

void AnalysisReport::note(std::string text) { notes_.push_back(std::move(text)); }

void AnalysisReport::header(std::string text) { header_.push_back(std::move(text)); }

void AnalysisReport::merge(const AnalysisReport& other) {
  header_.insert(header_.end(), other.header_.begin(), other.header_.end());
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
  notes_.insert(notes_.end(), other.notes_.begin(), other.notes_.end());
}

std::optional<ReportEntry> AnalysisReport::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e;
  }
  return std::nullopt;
}

double AnalysisReport::value(const std::string& name) const {
  auto e = find(name);
  if (!e) throw std::out_of_range("no report entry '" + name + "'");
  return e->value;
}

std::string AnalysisReport::to_text() const {
  std::ostringstream out;
  for (const auto& h : header_) out << "# " << h << '\n';
  for (const auto& e : entries_) {
    out << e.name << ' ' << format_plain(e.value);
    if (!e.unit.empty()) out << ' ' << e.unit;
    if (e.verdict == Verdict::Pass) out << " PASS";
    if (e.verdict == Verdict::Fail) out << " FAIL";
    out << '\n';
  }
  for (const auto& n : notes_) out << "# " << n << '\n';
  return out.str();
}

}  // namespace sramwb
