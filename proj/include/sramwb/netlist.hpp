// Netlist model for the extracted-layout SPICE subset: M, C, R, V and I
// cards, "*" comments and .END.
#pragma once

#include <array>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sramwb/report.hpp"

namespace sramwb {

inline constexpr std::string_view kGroundName = "0";
inline constexpr std::string_view kPlaceholderName = "?";

struct Node {
  std::string name;

  bool is_ground() const { return name == kGroundName; }
  // Unresolved extractor node; never connected to anything else.
  bool is_placeholder() const { return name == kPlaceholderName; }

  bool operator==(const Node&) const = default;
};

enum class Polarity { Nmos, Pmos };

struct MosElement {
  std::string id;
  Node drain, gate, source, bulk;
  Polarity polarity = Polarity::Nmos;
  double length = 0.0;  // m
  double width = 0.0;   // m
  std::optional<double> drain_area, source_area;            // m^2
  std::optional<double> drain_perimeter, source_perimeter;  // m
  // Layout coordinates from the "* Mx DRAIN GATE SOURCE BULK (...)" comment.
  std::optional<std::array<double, 4>> bbox;

  // Zero geometry or any placeholder terminal; excluded from simulation.
  bool degenerate() const;
  std::array<const Node*, 4> terminals() const { return {&drain, &gate, &source, &bulk}; }

  bool operator==(const MosElement&) const = default;
};

struct CapElement {
  std::string id;
  Node a, b;
  double value = 0.0;  // F

  bool operator==(const CapElement&) const = default;
};

struct ResElement {
  std::string id;
  Node a, b;
  double value = 0.0;  // Ohm

  bool operator==(const ResElement&) const = default;
};

enum class SourceKind { Dc, Pulse, Pwl };

// Independent V or I source. Parameters by kind:
//   Dc:    {value}
//   Pulse: {v1, v2, delay, rise, fall, width, period}
//   Pwl:   {t0, v0, t1, v1, ...}
struct SourceElement {
  std::string id;
  Node pos, neg;
  bool is_current = false;
  SourceKind kind = SourceKind::Dc;
  std::vector<double> params;

  double value_at(double t) const;
  double dc_value() const { return value_at(0.0); }

  bool operator==(const SourceElement&) const = default;
};

struct Comment {
  std::string text;  // full line including the leading '*'

  bool operator==(const Comment&) const = default;
};

using Element = std::variant<MosElement, CapElement, ResElement, SourceElement>;
using Entry = std::variant<Comment, MosElement, CapElement, ResElement, SourceElement>;

const std::string& element_id(const Entry& e);
bool is_element(const Entry& e);

class Netlist {
 public:
  std::string title;  // first comment line, if the netlist starts with one
  std::vector<Entry> entries;
  std::optional<int> declared_nodes;     // "* Total Nodes: N"
  std::optional<int> declared_elements;  // "* Total Elements: N"
  std::vector<std::string> warnings;     // parse-time findings (count mismatches)

  std::size_t element_count() const;
  // Distinct named nodes, excluding ground and placeholders, in first-use order.
  std::vector<std::string> node_names() const;
  bool has_node(std::string_view name) const;

  const Entry* find(std::string_view id) const;
  Entry* find(std::string_view id);

  // Appends an element; throws SemanticError on a duplicate id.
  void add(Entry e);
  // Removes every element for which pred is true. Comments are kept.
  template <class Pred>
  void remove_if(Pred pred) {
    std::erase_if(entries, [&](const Entry& e) { return is_element(e) && pred(e); });
  }

  template <class T, class F>
  void for_each(F&& f) const {
    for (const auto& e : entries) {
      if (auto* p = std::get_if<T>(&e)) f(*p);
    }
  }

  bool operator==(const Netlist&) const = default;
};

Netlist parse_netlist(std::istream& in);
Netlist parse_netlist(std::string_view text);
Netlist parse_netlist_file(const std::string& path);  // throws Error with the path

std::string print_netlist(const Netlist& n);

// Degenerate elements, placeholder and floating nodes, count mismatches and
// extractor zero-capacitance warnings.
AnalysisReport validate(const Netlist& n);

// Nodes touched by fewer than two non-degenerate elements (ground exempt).
std::vector<std::string> floating_nodes(const Netlist& n);

}  // namespace sramwb
