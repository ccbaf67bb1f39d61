#include "sramwb/genlib.hpp"

#include <algorithm>
#include <cctype>

#include "sramwb/errors.hpp"

namespace sramwb {
namespace {

class Builder {
 public:
  explicit Builder(std::string title) {
    n_.title = title;
    n_.entries.push_back(Comment{"* " + title});
  }

  void mos(std::string id, const std::string& d, const std::string& g, const std::string& s,
           Polarity pol, DeviceSize size) {
    MosElement m;
    m.id = std::move(id);
    m.drain = {d};
    m.gate = {g};
    m.source = {s};
    m.bulk = {pol == Polarity::Pmos ? "VDD" : "0"};
    m.polarity = pol;
    m.length = size.l;
    m.width = size.w;
    n_.add(std::move(m));
  }
  void nmos(std::string id, const std::string& d, const std::string& g, const std::string& s,
            DeviceSize size) {
    mos(std::move(id), d, g, s, Polarity::Nmos, size);
  }
  void pmos(std::string id, const std::string& d, const std::string& g, const std::string& s,
            DeviceSize size) {
    mos(std::move(id), d, g, s, Polarity::Pmos, size);
  }
  void cap(std::string id, const std::string& node, double value) {
    n_.add(CapElement{std::move(id), {node}, {"0"}, value});
  }
  void vdc(std::string id, const std::string& node, double value) {
    SourceElement s;
    s.id = std::move(id);
    s.pos = {node};
    s.neg = {"0"};
    s.params = {value};
    n_.add(std::move(s));
  }

  Netlist take() { return std::move(n_); }

 private:
  Netlist n_;
};

void add_cell(Builder& b, const CellGeometry& g, const std::string& suffix, const std::string& wl,
              const std::string& bl, const std::string& blb) {
  const std::string q = "Q" + suffix, qb = "Qbar" + suffix;
  b.pmos("MPUL" + suffix, q, qb, "VDD", g.pu);
  b.nmos("MPDL" + suffix, q, qb, "0", g.pd);
  b.pmos("MPUR" + suffix, qb, q, "VDD", g.pu);
  b.nmos("MPDR" + suffix, qb, q, "0", g.pd);
  b.nmos("MPGL" + suffix, bl, wl, q, g.pg);
  b.nmos("MPGR" + suffix, blb, wl, qb, g.pg);
}

void check_supply(double v_dd) {
  if (!(v_dd > 0.0)) throw DomainError("supply voltage must be positive");
}

}  // namespace

void CellGeometry::check() const {
  for (const DeviceSize* d : {&pu, &pd, &pg}) {
    if (!(d->w > 0.0) || !(d->l > 0.0)) throw DomainError("cell geometry W and L must be positive");
  }
}

ParasiticMap extracted_cell_parasitics() {
  return {{"WL", 97.083e-15}, {"BL", 12.392e-15}, {"Q", 35.838e-15}, {"Qbar", 35.338e-15}};
}

Netlist build_6t_cell(const CellGeometry& g, const ParasiticMap& parasitics, double v_dd) {
  g.check();
  check_supply(v_dd);
  Builder b("6T SRAM cell");
  add_cell(b, g, "", "WL", "BL", "BLB");
  b.vdc("VVDD", "VDD", v_dd);
  b.vdc("VWL", "WL", 0.0);
  b.vdc("VBL", "BL", v_dd);
  b.vdc("VBLB", "BLB", v_dd);

  // Capacitors are numbered in a fixed node order so the extracted map
  // reproduces the layout's Cpar1..Cpar4 naming.
  static const std::vector<std::string> order = {"WL", "BL", "Q", "Qbar", "BLB", "VDD"};
  for (const auto& [node, value] : parasitics) {
    if (std::find(order.begin(), order.end(), node) == order.end())
      throw SemanticError("parasitic on unknown cell node '" + node + "'");
    if (value < 0.0) throw DomainError("negative parasitic capacitance on " + node);
  }
  int index = 0;
  for (const auto& node : order) {
    auto it = parasitics.find(node);
    if (it == parasitics.end() || it->second == 0.0) continue;
    b.cap("Cpar" + std::to_string(++index), node, it->second);
  }
  return b.take();
}

Netlist build_array(int rows, int cols, const CellGeometry& g, double v_dd) {
  if (rows < 1 || cols < 1) throw DomainError("array needs at least one row and one column");
  if (rows == 1 && cols == 1) return build_6t_cell(g, {}, v_dd);
  g.check();
  check_supply(v_dd);

  Builder b(std::to_string(rows) + "x" + std::to_string(cols) + " SRAM array");
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::string suffix = "_" + std::to_string(r) + "_" + std::to_string(c);
      add_cell(b, g, suffix, "WL_" + std::to_string(r), "BL_" + std::to_string(c),
               "BLB_" + std::to_string(c));
    }
  }
  b.vdc("VVDD", "VDD", v_dd);
  for (int r = 0; r < rows; ++r) b.vdc("VWL_" + std::to_string(r), "WL_" + std::to_string(r), 0.0);
  for (int c = 0; c < cols; ++c) {
    b.vdc("VBL_" + std::to_string(c), "BL_" + std::to_string(c), v_dd);
    b.vdc("VBLB_" + std::to_string(c), "BLB_" + std::to_string(c), v_dd);
  }
  return b.take();
}

std::optional<PeripheryKind> parse_periphery_kind(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '_', '-');
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "sense-amp") return PeripheryKind::SenseAmp;
  if (key == "precharge") return PeripheryKind::Precharge;
  if (key == "write-driver") return PeripheryKind::WriteDriver;
  if (key == "decoder" || key == "decoder-2to4") return PeripheryKind::Decoder2to4;
  return std::nullopt;
}

std::string_view to_string(PeripheryKind kind) {
  switch (kind) {
    case PeripheryKind::SenseAmp: return "sense-amp";
    case PeripheryKind::Precharge: return "precharge";
    case PeripheryKind::WriteDriver: return "write-driver";
    case PeripheryKind::Decoder2to4: return "decoder";
  }
  return "?";
}

Netlist build_periphery(PeripheryKind kind, const CellGeometry& g, double v_dd) {
  g.check();
  check_supply(v_dd);
  constexpr double kBitline = 100e-15;

  switch (kind) {
    case PeripheryKind::SenseAmp: {
      // The latch nodes are the bitlines themselves; SE fires the tail and
      // its complement SEB opens the header.
      Builder b("latch sense amplifier");
      b.pmos("MP1", "BL", "BLB", "TOP", g.pu);
      b.pmos("MP2", "BLB", "BL", "TOP", g.pu);
      b.pmos("MP3", "TOP", "SEB", "VDD", g.pu);
      b.nmos("MN1", "BL", "BLB", "TAIL", g.pd);
      b.nmos("MN2", "BLB", "BL", "TAIL", g.pd);
      b.nmos("MN3", "TAIL", "SE", "0", g.pd);
      b.cap("CBL", "BL", kBitline);
      b.cap("CBLB", "BLB", kBitline);
      b.vdc("VVDD", "VDD", v_dd);
      b.vdc("VSE", "SE", v_dd);
      b.vdc("VSEB", "SEB", 0.0);
      return b.take();
    }
    case PeripheryKind::Precharge: {
      Builder b("bitline precharge");
      b.pmos("MP1", "BL", "PC", "VDD", g.pu);
      b.pmos("MP2", "BLB", "PC", "VDD", g.pu);
      b.pmos("MP3", "BL", "PC", "BLB", g.pu);
      b.cap("CBL", "BL", kBitline);
      b.cap("CBLB", "BLB", kBitline);
      b.vdc("VVDD", "VDD", v_dd);
      b.vdc("VPC", "PC", 0.0);
      return b.take();
    }
    case PeripheryKind::WriteDriver: {
      Builder b("write driver");
      b.pmos("MP1", "DB", "D", "VDD", g.pu);
      b.nmos("MN1", "DB", "D", "0", g.pd);
      b.nmos("MN2", "BL", "WE", "DB", g.pg);
      b.cap("CBL", "BL", kBitline);
      b.vdc("VVDD", "VDD", v_dd);
      b.vdc("VD", "D", 0.0);
      b.vdc("VWE", "WE", v_dd);
      return b.take();
    }
    case PeripheryKind::Decoder2to4: {
      Builder b("2:4 NAND decoder");
      auto inverter = [&](const std::string& tag, const std::string& in, const std::string& out) {
        b.pmos("MP" + tag, out, in, "VDD", g.pu);
        b.nmos("MN" + tag, out, in, "0", g.pd);
      };
      inverter("A0", "A0", "A0B");
      inverter("A1", "A1", "A1B");
      for (int k = 0; k < 4; ++k) {
        const std::string ks = std::to_string(k);
        const std::string x0 = (k & 1) ? "A0" : "A0B";
        const std::string x1 = (k & 2) ? "A1" : "A1B";
        const std::string nand = "N" + ks, mid = "X" + ks;
        b.pmos("MPN" + ks + "A", nand, x0, "VDD", g.pu);
        b.pmos("MPN" + ks + "B", nand, x1, "VDD", g.pu);
        b.nmos("MNN" + ks + "A", nand, x0, mid, g.pd);
        b.nmos("MNN" + ks + "B", mid, x1, "0", g.pd);
        inverter("WL" + ks, nand, "WL" + ks);
      }
      b.vdc("VVDD", "VDD", v_dd);
      b.vdc("VA0", "A0", 0.0);
      b.vdc("VA1", "A1", 0.0);
      return b.take();
    }
  }
  throw DomainError("unknown periphery kind");
}

}  // namespace sramwb
