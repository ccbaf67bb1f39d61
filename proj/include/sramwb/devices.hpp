// Compact MOSFET models: threshold voltage with body effect and DIBL,
// subthreshold conduction, and a level-1 square law blended into the
// subthreshold branch so the current stays continuous through V_th.
//
// Sign convention: every parameter and voltage is signed the way it appears
// on the device. PMOS carries negative V_th0 and gamma and a positive Fermi
// potential; currents are positive into the drain.
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sramwb/netlist.hpp"

namespace sramwb {

inline constexpr double kBoltzmann = 1.380649e-23;          // J/K
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C

enum class ModelKind {
  Blended,           // subthreshold below V_th, square law above V_th + 3 n v_T
  SubthresholdOnly,  // subthreshold expression at every bias
};

struct DeviceParams {
  double vth0 = 0.0;    // V
  double gamma = 0.0;   // V^0.5
  double phi_f = 0.0;   // V
  double alpha = 0.0;   // 1/m, DIBL length coefficient
  double kprime = 0.0;  // A/V^2
  double lambda = 0.0;  // 1/V
  double n = 1.0;       // subthreshold slope factor
  double i0 = 0.0;      // A, unit-device leakage
  double avth = 0.0;    // V*m, mismatch coefficient

  bool operator==(const DeviceParams&) const = default;
};

struct TechnologyParams {
  DeviceParams nmos;
  DeviceParams pmos;
  double t_ox = 20e-9;     // m
  double eps_ox = 3.5e-11;  // F/m
  double eps_si = 1.04e-10;  // F/m
  std::optional<double> doping;  // N_A, 1/m^3
  double temperature = 300.15;   // K
  double c_ox = 0.0;             // F/m^2, derived
  ModelKind model = ModelKind::Blended;

  const DeviceParams& device(Polarity p) const { return p == Polarity::Nmos ? nmos : pmos; }
  DeviceParams& device(Polarity p) { return p == Polarity::Nmos ? nmos : pmos; }
  double thermal_voltage() const { return kBoltzmann * temperature / kElementaryCharge; }

  // Documented defaults, already derived.
  static TechnologyParams defaults();

  bool operator==(const TechnologyParams&) const = default;
};

// Explicitly supplied `name = value` settings, SI units. Device keys apply to
// both polarities (vth0, gamma and phi_f mirrored in sign for PMOS) unless
// suffixed with _n or _p, in which case they are taken verbatim.
struct TechnologyInputs {
  std::map<std::string, double> values;
};

// Recognised config keys, including _n/_p variants.
const std::vector<std::string>& technology_keys();

// C_ox = eps_ox / t_ox; gamma from N_A and V_th0 from the charge terms when
// those are supplied and the value itself is not. Throws DomainError for a
// non-positive t_ox or temperature, n < 1 or k' <= 0.
TechnologyParams derive_tech_params(const TechnologyInputs& raw);

// One-line summaries suitable for report headers.
std::vector<std::string> describe(const TechnologyParams& p);

struct BiasPoint {
  double vgs = 0.0, vds = 0.0, vsb = 0.0;  // V
  double length = 0.0, width = 0.0;        // m
};

struct ThermalContext {
  double v_t = 0.0;  // V
  static ThermalContext at(double kelvin) { return {kBoltzmann * kelvin / kElementaryCharge}; }
};

// V_th0 + gamma (sqrt|-2 phi_F + V_SB| - sqrt|-2 phi_F|) - V_DS exp(-alpha L)
double threshold_voltage(const DeviceParams& p, const BiasPoint& b);

// I_off exp(V_GS / (n v_T)) (1 - exp(-V_DS / v_T)) with
// I_off = (W/L) I_0 exp(-V_th / (n v_T)). NMOS-frame voltages.
double subthreshold_current(const DeviceParams& p, const BiasPoint& b, const ThermalContext& th);

// Drain current for either polarity, source/drain swapped when V_DS reverses.
double mos_current(const DeviceParams& p, Polarity pol, const BiasPoint& b,
                   const ThermalContext& th, ModelKind model = ModelKind::Blended);

struct SmallSignal {
  double id = 0.0;   // A
  double gm = 0.0;   // dI/dV_GS
  double gds = 0.0;  // dI/dV_DS
  double gmb = 0.0;  // dI/dV_BS
};
SmallSignal small_signal(const DeviceParams& p, Polarity pol, const BiasPoint& b,
                         const ThermalContext& th, ModelKind model = ModelKind::Blended);

// Current into the drain and its partials with respect to the drain, gate,
// source and bulk node voltages. `vth_shift` is added to V_th0.
struct TerminalCurrent {
  double id = 0.0;
  std::array<double, 4> g{};  // d/dVd, d/dVg, d/dVs, d/dVb
};
TerminalCurrent terminal_current(const DeviceParams& p, Polarity pol, double length, double width,
                                 const std::array<double, 4>& v_dgsb, double v_t, ModelKind model,
                                 double vth_shift = 0.0);

}  // namespace sramwb
