#include "sramwb/metrics.hpp"

#include <cmath>
#include <optional>

#include "sramwb/errors.hpp"

namespace sramwb {
namespace {

struct Crossing {
  double t;
  bool rising;
};

std::vector<Crossing> crossings(const std::vector<double>& t, const std::vector<double>& v,
                                double level) {
  std::vector<Crossing> out;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double a = v[i - 1] - level, b = v[i] - level;
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
      const double frac = a / (a - b);
      out.push_back({t[i - 1] + frac * (t[i] - t[i - 1]), b > a});
    }
  }
  return out;
}

std::optional<double> first_crossing(const std::vector<Crossing>& c, bool rising, double after) {
  for (const auto& x : c) {
    if (x.rising == rising && x.t >= after) return x.t;
  }
  return std::nullopt;
}

}  // namespace

double dynamic_power(double c_load, double v_dd, double f_sw) {
  if (c_load < 0.0 || v_dd < 0.0 || f_sw < 0.0)
    throw DomainError("dynamic power inputs must be non-negative");
  return c_load * v_dd * v_dd * f_sw;
}

DelayMeasurement DelayMeasurement::from_edges(double t_plh, double t_phl) {
  DelayMeasurement d;
  d.t_plh = t_plh;
  d.t_phl = t_phl;
  d.t_p = (t_plh + t_phl) / 2.0;
  return d;
}

DelayMeasurement propagation_delay(const Waveform& w, std::string_view input,
                                   std::string_view output, double v_low, double v_high,
                                   double fraction) {
  const double level = v_low + fraction * (v_high - v_low);
  const auto in = crossings(w.times, w.node(input), level);
  const auto out = crossings(w.times, w.node(output), level);

  auto delay_for = [&](bool rising) -> double {
    for (const auto& o : out) {
      if (o.rising != rising) continue;
      const Crossing* cause = nullptr;
      for (const auto& i : in) {
        if (i.t <= o.t) cause = &i;
      }
      if (cause) return o.t - cause->t;
    }
    throw MeasurementError("no " + std::string(rising ? "rising" : "falling") +
                           " transition of node " + std::string(output) +
                           " after an edge on " + std::string(input));
  };
  auto d = DelayMeasurement::from_edges(delay_for(true), delay_for(false));
  d.threshold = level;
  return d;
}

TransitionTimes transition_time(const Waveform& w, std::string_view node, double v_low,
                                double v_high, double lo_fraction, double hi_fraction) {
  const auto& v = w.node(node);
  const double lo = v_low + lo_fraction * (v_high - v_low);
  const double hi = v_low + hi_fraction * (v_high - v_low);
  const auto c_lo = crossings(w.times, v, lo), c_hi = crossings(w.times, v, hi);
  auto measure = [&](bool rising) {
    const auto& start = rising ? c_lo : c_hi;
    const auto& stop = rising ? c_hi : c_lo;
    for (const auto& s : start) {
      if (s.rising != rising) continue;
      if (auto e = first_crossing(stop, rising, s.t)) return *e - s.t;
    }
    throw MeasurementError("no complete " + std::string(rising ? "rising" : "falling") +
                           " transition on node " + std::string(node));
  };
  return {measure(true), measure(false)};
}

double bitline_delay(double c_bitline, double dv, double i_cell) {
  if (!(i_cell > 0.0)) throw DomainError("cell read current must be positive");
  return c_bitline * dv / i_cell;
}

RatioReport check_ratios(const SidePair& pd, const SidePair& pu, const SidePair& pg) {
  for (const SidePair* s : {&pd, &pu, &pg}) {
    for (const DeviceRatio* d : {&s->left, &s->right}) {
      if (!(d->w > 0.0) || !(d->l > 0.0)) throw DomainError("device W and L must be positive");
    }
  }
  auto beta = [](const DeviceRatio& d) { return d.w / d.l; };
  RatioReport r;
  r.cr_left = beta(pd.left) / beta(pg.left);
  r.cr_right = beta(pd.right) / beta(pg.right);
  r.pr_left = beta(pu.left) / beta(pg.left);
  r.pr_right = beta(pu.right) / beta(pg.right);
  auto equal = [](double a, double b) { return std::abs(a - b) <= kRatioSideTolerance; };
  r.read_stable = r.cr_left > 1.0 && r.cr_right > 1.0 && equal(r.cr_left, r.cr_right);
  r.write_stable = r.pr_left < 1.0 && r.pr_right < 1.0 && equal(r.pr_left, r.pr_right);
  return r;
}

AreaReport area_report(const std::vector<std::pair<double, double>>& rects) {
  AreaReport r;
  for (const auto& [w, h] : rects) {
    if (w < 0.0 || h < 0.0) throw DomainError("rectangle sides must be non-negative");
    r.areas.push_back(w * h);
    r.total += w * h;
  }
  return r;
}

}  // namespace sramwb
