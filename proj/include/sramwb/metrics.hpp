// Closed-form figures of merit and waveform measurements.
#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sramwb/engine.hpp"

namespace sramwb {

// C * V^2 * f, in watts. Throws DomainError on negative inputs.
double dynamic_power(double c_load, double v_dd, double f_sw);

struct DelayMeasurement {
  double t_plh = 0.0;  // s
  double t_phl = 0.0;  // s
  double t_p = 0.0;    // s, (t_plh + t_phl) / 2
  double threshold = 0.0;  // V, crossing level used on both signals

  static DelayMeasurement from_edges(double t_plh, double t_phl);
};

// Input-to-output delays at the fraction crossing of [v_low, v_high],
// linearly interpolated between samples. Each output crossing is paired with
// the latest input crossing before it; the first rising and first falling
// output crossings are used. Throws MeasurementError naming the node when
// either output transition (or its preceding input edge) is missing.
DelayMeasurement propagation_delay(const Waveform& w, std::string_view input,
                                   std::string_view output, double v_low, double v_high,
                                   double fraction = 0.5);

struct TransitionTimes {
  double rise = 0.0;  // s
  double fall = 0.0;  // s
};

// First rise and fall between the lo and hi fractions (10/90 by default).
TransitionTimes transition_time(const Waveform& w, std::string_view node, double v_low,
                                double v_high, double lo_fraction = 0.1, double hi_fraction = 0.9);

// Time for a cell current to move the bitline by dv: C_B * dV / I.
double bitline_delay(double c_bitline, double dv, double i_cell);

struct DeviceRatio {
  double w = 0.0, l = 0.0;  // m (any consistent unit)
};

struct SidePair {
  DeviceRatio left, right;
};

struct RatioReport {
  double cr_left = 0.0, cr_right = 0.0;  // (W/L)_PD / (W/L)_PG
  double pr_left = 0.0, pr_right = 0.0;  // (W/L)_PU / (W/L)_PG
  bool read_stable = false;   // both CR > 1 and equal
  bool write_stable = false;  // both PR < 1 and equal
};

inline constexpr double kRatioSideTolerance = 1e-9;

RatioReport check_ratios(const SidePair& pd, const SidePair& pu, const SidePair& pg);

struct AreaReport {
  std::vector<double> areas;  // lambda^2, one per rectangle
  double total = 0.0;
};

// Rectangles as (W, H) in lambda.
AreaReport area_report(const std::vector<std::pair<double, double>>& rects);

}  // namespace sramwb
