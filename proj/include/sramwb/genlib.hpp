// Netlist generators for the 6T cell, cell arrays and the periphery blocks
// (sense amplifier, precharge, write driver, 2:4 decoder).
//
// Every generated netlist carries its own DC sources so it can be solved and
// validated as-is: a supply on VDD and one source per control or data line.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "sramwb/netlist.hpp"

namespace sramwb {

struct DeviceSize {
  double w = 0.0;  // m
  double l = 0.0;  // m
};

struct CellGeometry {
  DeviceSize pu{10.5e-6, 2e-6};
  DeviceSize pd{6e-6, 2e-6};
  DeviceSize pg{10.5e-6, 2.5e-6};

  void check() const;  // throws DomainError unless every W and L is positive
};

inline constexpr double kDefaultSupply = 1.8;  // V

// Grounded node capacitances, node name -> F. Zero entries are ignored.
using ParasiticMap = std::map<std::string, double>;

// The four nodal capacitances of the extracted single-cell layout, mapped
// onto the generator's node names (WL, BL, Q, Qbar).
ParasiticMap extracted_cell_parasitics();

// Nodes Q, Qbar, BL, BLB, WL, VDD and ground. Devices MPUL/MPUR (PMOS
// pull-ups), MPDL/MPDR (pull-downs) and MPGL/MPGR (access). Sources VVDD,
// VWL (0 V, hold), VBL and VBLB (both at the supply).
Netlist build_6t_cell(const CellGeometry& g = {}, const ParasiticMap& parasitics = {},
                      double v_dd = kDefaultSupply);

// rows x cols cells; row r shares WL_r, column c shares BL_c and BLB_c, and
// cell (r, c) stores on Q_r_c / Qbar_r_c. A 1x1 array is build_6t_cell.
Netlist build_array(int rows, int cols, const CellGeometry& g = {},
                    double v_dd = kDefaultSupply);

enum class PeripheryKind { SenseAmp, Precharge, WriteDriver, Decoder2to4 };

// Accepts sense-amp, precharge, write-driver, decoder (underscores also allowed).
std::optional<PeripheryKind> parse_periphery_kind(std::string_view name);
std::string_view to_string(PeripheryKind kind);

// sense_amp:    cross-coupled latch on BL/BLB, PMOS header on SEB, NMOS tail on SE
// precharge:    two PMOS pull-ups and an equalizer, gated by active-low PC
// write_driver: inverter D -> DB and an NMOS pass device DB -> BL gated by WE
// decoder_2to4: input inverters, four static NAND2 gates, output inverters WL0..WL3
Netlist build_periphery(PeripheryKind kind, const CellGeometry& g = {},
                        double v_dd = kDefaultSupply);

}  // namespace sramwb
