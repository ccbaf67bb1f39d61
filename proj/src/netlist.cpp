#include "sramwb/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "sramwb/errors.hpp"
#include "sramwb/units.hpp"

namespace sramwb {

bool MosElement::degenerate() const {
  if (length <= 0.0 || width <= 0.0) return true;
  for (const Node* n : terminals()) {
    if (n->is_placeholder()) return true;
  }
  return false;
}

double SourceElement::value_at(double t) const {
  switch (kind) {
    case SourceKind::Dc:
      return params.empty() ? 0.0 : params[0];
    case SourceKind::Pulse: {
      const double v1 = params[0], v2 = params[1], delay = params[2], rise = params[3],
                   fall = params[4], width = params[5];
      const double period = params.size() > 6 ? params[6] : 0.0;
      if (t < delay) return v1;
      double tt = t - delay;
      if (period > 0.0) tt = std::fmod(tt, period);
      if (tt < rise) return v1 + (v2 - v1) * tt / rise;
      if (tt < rise + width) return v2;
      if (tt < rise + width + fall) return v2 + (v1 - v2) * (tt - rise - width) / fall;
      return v1;
    }
    case SourceKind::Pwl: {
      if (t <= params[0]) return params[1];
      for (std::size_t i = 2; i + 1 < params.size(); i += 2) {
        if (t <= params[i]) {
          const double t0 = params[i - 2], v0 = params[i - 1];
          return v0 + (params[i + 1] - v0) * (t - t0) / (params[i] - t0);
        }
      }
      return params.back();
    }
  }
  return 0.0;
}

const std::string& element_id(const Entry& e) {
  return std::visit(
      [](const auto& x) -> const std::string& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Comment>) {
          return x.text;
        } else {
          return x.id;
        }
      },
      e);
}

bool is_element(const Entry& e) { return !std::holds_alternative<Comment>(e); }

std::size_t Netlist::element_count() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), is_element));
}

namespace {

std::vector<const Node*> entry_nodes(const Entry& e) {
  return std::visit(
      [](const auto& x) -> std::vector<const Node*> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Comment>) {
          return {};
        } else if constexpr (std::is_same_v<T, MosElement>) {
          auto t = x.terminals();
          return {t.begin(), t.end()};
        } else if constexpr (std::is_same_v<T, SourceElement>) {
          return {&x.pos, &x.neg};
        } else {
          return {&x.a, &x.b};
        }
      },
      e);
}

bool entry_degenerate(const Entry& e) {
  if (auto* m = std::get_if<MosElement>(&e)) return m->degenerate();
  for (const Node* n : entry_nodes(e)) {
    if (n->is_placeholder()) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> Netlist::node_names() const {
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const auto& e : entries) {
    for (const Node* n : entry_nodes(e)) {
      if (n->is_ground() || n->is_placeholder()) continue;
      if (seen.insert(n->name).second) names.push_back(n->name);
    }
  }
  return names;
}

bool Netlist::has_node(std::string_view name) const {
  for (const auto& e : entries) {
    for (const Node* n : entry_nodes(e)) {
      if (n->name == name) return true;
    }
  }
  return false;
}

const Entry* Netlist::find(std::string_view id) const {
  for (const auto& e : entries) {
    if (is_element(e) && element_id(e) == id) return &e;
  }
  return nullptr;
}

Entry* Netlist::find(std::string_view id) {
  return const_cast<Entry*>(std::as_const(*this).find(id));
}

void Netlist::add(Entry e) {
  if (is_element(e) && find(element_id(e)))
    throw SemanticError("duplicate element id '" + element_id(e) + "'");
  entries.push_back(std::move(e));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string upper(std::string_view s) {
  std::string r(s);
  for (auto& c : r) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return r;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

class CardParser {
 public:
  CardParser(std::size_t line_no) : line_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(line_, what); }

  double number(const std::string& tok) const {
    auto v = try_parse_value(tok);
    if (!v) fail("unparseable number '" + tok + "'");
    return *v;
  }

  // Accepts "KEY=value" and returns (upper-case key, value).
  std::pair<std::string, double> assignment(const std::string& tok) const {
    auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) fail("expected KEY=value, got '" + tok + "'");
    return {upper(tok.substr(0, eq)), number(tok.substr(eq + 1))};
  }

  MosElement mos(const std::vector<std::string>& t) const {
    if (t.size() < 6) fail("MOSFET card needs id, 4 nodes and a model name");
    MosElement m;
    m.id = t[0];
    m.drain = {t[1]};
    m.gate = {t[2]};
    m.source = {t[3]};
    m.bulk = {t[4]};
    std::string model = upper(t[5]);
    if (model == "NMOS") {
      m.polarity = Polarity::Nmos;
    } else if (model == "PMOS") {
      m.polarity = Polarity::Pmos;
    } else {
      fail("unknown MOSFET model '" + t[5] + "' (expected NMOS or PMOS)");
    }
    bool have_l = false, have_w = false;
    for (std::size_t i = 6; i < t.size(); ++i) {
      auto [key, value] = assignment(t[i]);
      if (key == "L") {
        m.length = value;
        have_l = true;
      } else if (key == "W") {
        m.width = value;
        have_w = true;
      } else if (key == "AD") {
        m.drain_area = value;
      } else if (key == "AS") {
        m.source_area = value;
      } else if (key == "PD") {
        m.drain_perimeter = value;
      } else if (key == "PS") {
        m.source_perimeter = value;
      } else {
        fail("unknown MOSFET parameter '" + key + "'");
      }
    }
    if (!have_l || !have_w) fail("MOSFET card " + m.id + " requires L= and W=");
    if (m.length < 0.0 || m.width < 0.0) fail("negative MOSFET geometry on " + m.id);
    return m;
  }

  // Two-terminal element with "value" or "KEY=value".
  template <class T>
  T passive(const std::vector<std::string>& t, const char* key) const {
    if (t.size() != 4) fail(std::string("card ") + t[0] + " needs id, 2 nodes and a value");
    T x;
    x.id = t[0];
    x.a = {t[1]};
    x.b = {t[2]};
    if (t[3].find('=') != std::string::npos) {
      auto [k, v] = assignment(t[3]);
      if (k != key) fail("expected " + std::string(key) + "=, got '" + t[3] + "'");
      x.value = v;
    } else {
      x.value = number(t[3]);
    }
    if (x.value < 0.0) fail("negative value on " + x.id);
    return x;
  }

  SourceElement source(std::string line) const {
    for (auto& c : line) {
      if (c == '(' || c == ')' || c == ',') c = ' ';
    }
    auto t = split(line);
    if (t.size() < 4) fail("source card needs id, 2 nodes and a value");
    SourceElement s;
    s.id = t[0];
    s.is_current = std::toupper(static_cast<unsigned char>(t[0][0])) == 'I';
    s.pos = {t[1]};
    s.neg = {t[2]};
    std::size_t i = 3;
    std::string kind = upper(t[3]);
    if (kind == "DC") {
      s.kind = SourceKind::Dc;
      ++i;
    } else if (kind == "PULSE") {
      s.kind = SourceKind::Pulse;
      ++i;
    } else if (kind == "PWL") {
      s.kind = SourceKind::Pwl;
      ++i;
    }
    for (; i < t.size(); ++i) s.params.push_back(number(t[i]));

    switch (s.kind) {
      case SourceKind::Dc:
        if (s.params.size() != 1) fail("DC source " + s.id + " takes exactly one value");
        break;
      case SourceKind::Pulse:
        if (s.params.size() != 6 && s.params.size() != 7)
          fail("PULSE on " + s.id + " takes v1 v2 delay rise fall width [period]");
        if (s.params[3] <= 0.0 || s.params[4] <= 0.0)
          fail("PULSE rise and fall times must be positive on " + s.id);
        break;
      case SourceKind::Pwl:
        if (s.params.size() < 2 || s.params.size() % 2 != 0)
          fail("PWL on " + s.id + " takes time/value pairs");
        for (std::size_t k = 2; k < s.params.size(); k += 2) {
          if (s.params[k] <= s.params[k - 2]) fail("PWL times must increase on " + s.id);
        }
        break;
    }
    return s;
  }

 private:
  std::size_t line_;
};

const std::regex kBboxComment(
    R"(^\*\s*(\S+)\s+DRAIN\s+GATE\s+SOURCE\s+BULK\s*\(\s*(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s*\)\s*$)",
    std::regex::icase);
const std::regex kTotalNodes(R"(^\*\s*Total\s+Nodes:\s*(\d+))", std::regex::icase);
const std::regex kTotalElements(R"(^\*\s*Total\s+Elements:\s*(\d+))", std::regex::icase);
const std::regex kZeroCapWarning(R"(^\*\s*WARNING:\s*Node\s+(\S+)\s+has\s+zero\s+nodal)",
                                 std::regex::icase);

// Attaches a bbox comment to the MOSFET immediately before it.
bool attach_bbox(Netlist& n, const std::string& line) {
  std::smatch m;
  if (!std::regex_match(line, m, kBboxComment) || n.entries.empty()) return false;
  auto* mos = std::get_if<MosElement>(&n.entries.back());
  if (!mos || mos->id != m[1].str() || mos->bbox) return false;
  std::array<double, 4> box{};
  for (int i = 0; i < 4; ++i) {
    auto v = try_parse_value(m[i + 2].str());
    if (!v) return false;
    box[i] = *v;
  }
  mos->bbox = box;
  return true;
}

}  // namespace

Netlist parse_netlist(std::istream& in) {
  Netlist n;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '*') {
      if (attach_bbox(n, line)) continue;
      std::smatch m;
      if (std::regex_search(line, m, kTotalNodes)) n.declared_nodes = std::stoi(m[1].str());
      if (std::regex_search(line, m, kTotalElements)) n.declared_elements = std::stoi(m[1].str());
      n.entries.push_back(Comment{line});
      continue;
    }
    if (line[0] == '.') {
      if (upper(split(line)[0]) == ".END") break;
      throw SyntaxError(line_no, "unsupported control card '" + split(line)[0] + "'");
    }
    CardParser card(line_no);
    auto tokens = split(line);
    Entry entry;
    switch (std::toupper(static_cast<unsigned char>(line[0]))) {
      case 'M':
        entry = card.mos(tokens);
        break;
      case 'C':
        entry = card.passive<CapElement>(tokens, "C");
        break;
      case 'R': {
        auto r = card.passive<ResElement>(tokens, "R");
        if (r.value <= 0.0) card.fail("resistance must be positive on " + r.id);
        entry = r;
        break;
      }
      case 'V':
      case 'I':
        entry = card.source(line);
        break;
      default:
        card.fail("unsupported card '" + tokens[0] + "'");
    }
    try {
      n.add(std::move(entry));
    } catch (const SemanticError& e) {
      throw SemanticError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  if (!n.entries.empty()) {
    if (auto* c = std::get_if<Comment>(&n.entries.front())) n.title = trim(c->text.substr(1));
  }
  if (n.declared_nodes && *n.declared_nodes != static_cast<int>(n.node_names().size())) {
    n.warnings.push_back("count mismatch: trailer declares " + std::to_string(*n.declared_nodes) +
                         " nodes, parsed " + std::to_string(n.node_names().size()));
  }
  if (n.declared_elements && *n.declared_elements != static_cast<int>(n.element_count())) {
    n.warnings.push_back("count mismatch: trailer declares " +
                         std::to_string(*n.declared_elements) + " elements, parsed " +
                         std::to_string(n.element_count()));
  }
  return n;
}

Netlist parse_netlist(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_netlist(in);
}

Netlist parse_netlist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open netlist '" + path + "'");
  try {
    return parse_netlist(in);
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.line(), e.detail(), path);
  } catch (const SemanticError& e) {
    throw SemanticError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Printer

namespace {

void print_entry(std::ostream& out, const Entry& e) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Comment>) {
          out << x.text << '\n';
        } else if constexpr (std::is_same_v<T, MosElement>) {
          out << x.id << ' ' << x.drain.name << ' ' << x.gate.name << ' ' << x.source.name << ' '
              << x.bulk.name << ' ' << (x.polarity == Polarity::Nmos ? "NMOS" : "PMOS")
              << " L=" << format_value(x.length, "0u") << " W=" << format_value(x.width, "0u");
          if (x.drain_area) out << " AD=" << format_value(*x.drain_area, "0p");
          if (x.drain_perimeter) out << " PD=" << format_value(*x.drain_perimeter, "0u");
          if (x.source_area) out << " AS=" << format_value(*x.source_area, "0p");
          if (x.source_perimeter) out << " PS=" << format_value(*x.source_perimeter, "0u");
          out << '\n';
          if (x.bbox) {
            const auto& b = *x.bbox;
            out << "* " << x.id << " DRAIN GATE SOURCE BULK (" << format_plain(b[0]) << ' '
                << format_plain(b[1]) << ' ' << format_plain(b[2]) << ' ' << format_plain(b[3])
                << ")\n";
          }
        } else if constexpr (std::is_same_v<T, CapElement>) {
          out << x.id << ' ' << x.a.name << ' ' << x.b.name << " C=" << format_value(x.value)
              << '\n';
        } else if constexpr (std::is_same_v<T, ResElement>) {
          out << x.id << ' ' << x.a.name << ' ' << x.b.name << " R=" << format_value(x.value)
              << '\n';
        } else {
          out << x.id << ' ' << x.pos.name << ' ' << x.neg.name << ' ';
          if (x.kind == SourceKind::Dc) {
            out << "DC " << format_value(x.params.at(0));
          } else {
            out << (x.kind == SourceKind::Pulse ? "PULSE(" : "PWL(");
            for (std::size_t i = 0; i < x.params.size(); ++i)
              out << (i ? " " : "") << format_value(x.params[i]);
            out << ')';
          }
          out << '\n';
        }
      },
      e);
}

}  // namespace

std::string print_netlist(const Netlist& n) {
  std::ostringstream out;
  for (const auto& e : n.entries) print_entry(out, e);
  out << ".END\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation

std::vector<std::string> floating_nodes(const Netlist& n) {
  std::map<std::string, int> touches;
  for (const auto& name : n.node_names()) touches[name] = 0;
  for (const auto& e : n.entries) {
    if (!is_element(e) || entry_degenerate(e)) continue;
    std::set<std::string> mine;
    for (const Node* node : entry_nodes(e)) {
      if (!node->is_ground() && !node->is_placeholder()) mine.insert(node->name);
    }
    for (const auto& name : mine) ++touches[name];
  }
  std::vector<std::string> out;
  for (const auto& name : n.node_names()) {
    if (touches[name] < 2) out.push_back(name);
  }
  return out;
}

AnalysisReport validate(const Netlist& n) {
  AnalysisReport r;
  const std::string op = "validate";
  r.add("elements", static_cast<double>(n.element_count()), "", op);
  r.add("nodes", static_cast<double>(n.node_names().size()), "", op);

  std::vector<std::string> degenerate;
  int placeholders = 0;
  for (const auto& e : n.entries) {
    if (!is_element(e)) continue;
    if (entry_degenerate(e)) degenerate.push_back(element_id(e));
    for (const Node* node : entry_nodes(e)) placeholders += node->is_placeholder() ? 1 : 0;
  }
  r.add("degenerate_elements", static_cast<double>(degenerate.size()), "", op);
  r.add("placeholder_nodes", placeholders, "", op);

  auto floating = floating_nodes(n);
  r.add("floating_nodes", static_cast<double>(floating.size()), "", op);

  std::vector<std::string> zero_cap;
  for (const auto& e : n.entries) {
    if (auto* c = std::get_if<Comment>(&e)) {
      std::smatch m;
      if (std::regex_search(c->text, m, kZeroCapWarning)) zero_cap.push_back(m[1].str());
    }
  }
  r.add("zero_cap_warnings", static_cast<double>(zero_cap.size()), "", op);

  if (n.declared_nodes) {
    bool ok = *n.declared_nodes == static_cast<int>(n.node_names().size());
    r.add("declared_nodes", *n.declared_nodes, "", op, ok ? Verdict::Pass : Verdict::Fail);
  }
  if (n.declared_elements) {
    bool ok = *n.declared_elements == static_cast<int>(n.element_count());
    r.add("declared_elements", *n.declared_elements, "", op, ok ? Verdict::Pass : Verdict::Fail);
  }

  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s;
  };
  if (!degenerate.empty()) r.note("degenerate: " + join(degenerate));
  if (!floating.empty()) r.note("floating: " + join(floating));
  for (const auto& node : zero_cap) r.note("zero nodal parasitic capacitance on node " + node);
  for (const auto& w : n.warnings) r.note(w);
  return r;
}

}  // namespace sramwb
