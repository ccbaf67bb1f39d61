// SRAM stability analyses: butterfly curves and static noise margin, data
// retention voltage (closed form and brute force), write margin and
// threshold-mismatch Monte Carlo.
//
// Butterfly axes: x = V(Qbar), y = V(Q). Curve A is inverter A's VTC
// Q = f_A(Qbar). Curve B is inverter B's VTC Qbar = f_B(Q), drawn mirrored,
// i.e. as the points (f_B(q), q).
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sramwb/devices.hpp"
#include "sramwb/engine.hpp"
#include "sramwb/netlist.hpp"

namespace sramwb {

enum class StabilityMode { Hold, Read };

struct SquareAnchor {
  double x_a = 0.0, y_a = 0.0;  // corner on curve A
  double x_b = 0.0, y_b = 0.0;  // opposite corner on curve B
};

struct ButterflyData {
  TransferCurve curve_a;  // input V(Qbar), output V(Q)
  TransferCurve curve_b;  // input V(Q), output V(Qbar); plot as (output, input)
  double snm_high = 0.0;  // V, lobe holding Q high (upper left)
  double snm_low = 0.0;   // V, lobe holding Q low (lower right)
  double snm = 0.0;       // min(snm_high, snm_low)
  SquareAnchor square_high, square_low;
  int crossings = 0;  // intersections of the two curves: 3 when bistable, 1 when not
};

// Largest axis-aligned squares inscribed in each lobe. Both curves are
// decreasing VTCs given as (input, output) samples, curve_b unmirrored.
ButterflyData snm_from_curves(const TransferCurve& curve_a, const TransferCurve& curve_b);

// Opens the cell's feedback loop and sweeps each inverter input over
// [0, v_dd] in steps of grid. The cell's own sources are replaced: VDD at
// v_dd, WL at 0 (hold) or v_dd (read), BL and BLB at v_dd.
ButterflyData butterfly(const Netlist& cell, const TechnologyParams& p, StabilityMode mode,
                        double v_dd, double grid = 1e-3,
                        const std::map<std::string, double>& vth_shifts = {});

// Columns V1, Vout_A, Vout_B_mirrored (f_B sampled at V1), then
// "# snm_high=..." style summary comments.
void write_butterfly_csv(std::ostream& out, const ButterflyData& b);

// Linear macro-model: 2/(3+n) * (v_dd - drv).
double snm_macro(double v_dd, double drv, double n);

// Index i (1-based, as in the DRV formula) -> transistor role.
enum class CellRole { LeftPullDown, LeftPullUp, RightPullDown, RightPullUp, LeftAccess, RightAccess };
inline constexpr std::array<CellRole, 6> kDrvIndexMap = {
    CellRole::LeftPullDown, CellRole::LeftPullUp,  CellRole::RightPullDown,
    CellRole::RightPullUp,  CellRole::LeftAccess, CellRole::RightAccess};

struct DrvInputs {
  std::array<double, 6> i_off{};  // A, index 0 holds transistor 1
  std::array<double, 6> n{};
  double v_t = 0.026;  // V

  static DrvInputs uniform(double i_off, double n, double v_t);
};

struct DrvTerms {
  double drv0 = 0.0, v1 = 0.0, v2 = 0.0, drv = 0.0;  // V
};

// The retention formula evaluated as written, with its intermediate terms.
// Throws DomainError naming the first non-finite or invalid term.
DrvTerms drv_terms(const DrvInputs& d);
double drv_closed_form(const DrvInputs& d);

// 2 v_T ln(1 + n), the ideal-technology shortcut.
double drv_ideal(double n, double v_t);

// Leakages at V_GS = 0, V_SB = 0 from the technology model; the left
// inverter is the one driving Q.
DrvInputs drv_inputs_from_cell(const Netlist& cell, const TechnologyParams& p);

// Lowest supply (1 mV bisection) with a hold-mode butterfly snm above
// snm_floor. The butterfly grid scales with the supply (v_dd / 1000).
double drv_bruteforce(const Netlist& cell, const TechnologyParams& p, double snm_floor = 1e-6);

struct WriteMarginResult {
  bool writable = false;
  double margin = 0.0;  // V, highest BL voltage that flips the cell
  std::string diagnostic;
};

// Cell starts with Q = v_dd; BL is lowered until Q falls below Qbar.
WriteMarginResult write_margin(const Netlist& cell, const TechnologyParams& p, double v_dd,
                               std::optional<double> wordline = std::nullopt,
                               double resolution = 1e-3);

// Mismatch sigma: a_vth * sqrt(1 / (w * l)).
double sigma_vth(double a_vth, double w, double l);

struct VariationModel {
  std::optional<double> a_vth;  // V*m, per-polarity technology value if unset
  int samples = 200;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<int> counts;
};

struct MonteCarloSummary {
  int samples = 0;
  int failures = 0;
  double nominal = 0.0;  // V
  double mean = 0.0, stddev = 0.0, min = 0.0, max = 0.0;
  Histogram histogram;
  std::vector<double> values;  // per successful sample, in sample order
};

MonteCarloSummary monte_carlo_snm(const Netlist& cell, const TechnologyParams& p,
                                  const VariationModel& vm, StabilityMode mode, double v_dd,
                                  double grid = 1e-3);

}  // namespace sramwb
