#include "sramwb/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "sramwb/errors.hpp"
#include "sramwb/units.hpp"

namespace sramwb {
namespace {

constexpr const char* kSweepSource = "V__sweep";

struct CurvePoint {
  double a, x, y;  // a = x - y
};

std::vector<CurvePoint> rotated(const TransferCurve& c, bool mirror) {
  if (c.input.size() != c.output.size() || c.input.size() < 2)
    throw DomainError("transfer curve needs at least two (input, output) samples");
  std::vector<CurvePoint> pts;
  pts.reserve(c.input.size());
  for (std::size_t i = 0; i < c.input.size(); ++i) {
    const double x = mirror ? c.output[i] : c.input[i];
    const double y = mirror ? c.input[i] : c.output[i];
    pts.push_back({x - y, x, y});
  }
  std::stable_sort(pts.begin(), pts.end(),
                   [](const CurvePoint& l, const CurvePoint& r) { return l.a < r.a; });
  return pts;
}

CurvePoint at(const std::vector<CurvePoint>& pts, double a) {
  auto hi = std::lower_bound(pts.begin(), pts.end(), a,
                             [](const CurvePoint& p, double v) { return p.a < v; });
  if (hi == pts.end()) return pts.back();
  if (hi->a == a || hi == pts.begin()) return *hi;
  auto lo = hi - 1;
  const double t = (a - lo->a) / (hi->a - lo->a);
  return {a, lo->x + t * (hi->x - lo->x), lo->y + t * (hi->y - lo->y)};
}

bool has_node(const Netlist& n, const char* name) { return n.has_node(name); }

// The cell with its own sources replaced by the bias of the analysis and a
// sweep source on `forced` (if given).
Netlist biased_cell(const Netlist& cell, double v_dd, double wordline, const char* forced) {
  if (!has_node(cell, "Q") || !has_node(cell, "Qbar"))
    throw ConfigError("cell netlist must name its storage nodes Q and Qbar");
  Netlist n = cell;
  n.remove_if([](const Entry& e) { return std::holds_alternative<SourceElement>(e); });
  auto source = [&](const std::string& id, const char* node, double value) {
    SourceElement s;
    s.id = id;
    s.pos = {node};
    s.neg = {std::string(kGroundName)};
    s.params = {value};
    n.add(std::move(s));
  };
  if (has_node(cell, "VDD")) source("V__vdd", "VDD", v_dd);
  if (has_node(cell, "WL")) source("V__wl", "WL", wordline);
  if (has_node(cell, "BL")) source("V__bl", "BL", v_dd);
  if (has_node(cell, "BLB")) source("V__blb", "BLB", v_dd);
  if (forced) source(kSweepSource, forced, 0.0);
  return n;
}

TransferCurve open_loop_vtc(const Netlist& cell, const TechnologyParams& p, double v_dd,
                            double wordline, const char* input, const char* output,
                            const std::vector<double>& values,
                            const std::map<std::string, double>& shifts) {
  Engine engine(biased_cell(cell, v_dd, wordline, input), p);
  engine.set_vth_shifts(shifts);
  auto solutions = engine.sweep(kSweepSource, values, {{output, v_dd}});
  TransferCurve c;
  c.input = values;
  c.output.reserve(values.size());
  for (const auto& s : solutions) c.output.push_back(s.voltage(output));
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Static noise margin

ButterflyData snm_from_curves(const TransferCurve& curve_a, const TransferCurve& curve_b) {
  ButterflyData out;
  out.curve_a = curve_a;
  out.curve_b = curve_b;
  const auto a = rotated(curve_a, false);
  const auto b = rotated(curve_b, true);

  // Along every 45-degree line x - y = const the two curves bound the
  // diagonal of a square of side x_A - x_B. Both are piecewise linear in
  // that coordinate, so evaluating at the union of breakpoints is exact.
  const double lo = std::max(a.front().a, b.front().a);
  const double hi = std::min(a.back().a, b.back().a);
  if (lo > hi) return out;
  std::vector<double> grid = {lo, hi};
  for (const auto* pts : {&a, &b}) {
    for (const auto& pt : *pts) {
      if (pt.a >= lo && pt.a <= hi) grid.push_back(pt.a);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<CurvePoint> pa, pb;
  std::vector<double> delta;
  double scale = 0.0;
  for (double g : grid) {
    pa.push_back(at(a, g));
    pb.push_back(at(b, g));
    delta.push_back(pa.back().x - pb.back().x);
    scale = std::max({scale, std::abs(pa.back().x), std::abs(pb.back().x)});
  }

  // Runs of constant sign; zeros (within rounding) belong to no run.
  const double tol = 1e-12 * scale;
  struct Run {
    int sign;
    std::size_t best;  // index of the largest |delta| in the run
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const int sign = delta[i] > tol ? 1 : (delta[i] < -tol ? -1 : 0);
    if (sign == 0) continue;
    if (runs.empty() || runs.back().sign != sign) {
      runs.push_back({sign, i});
    } else if (std::abs(delta[i]) > std::abs(delta[runs.back().best])) {
      runs.back().best = i;
    }
  }
  // Interior sign changes are intersections. A lobe still open at either end
  // of the sweep is closed by a stable point on the rail, one more.
  if (!runs.empty()) {
    out.crossings = static_cast<int>(runs.size()) - 1 + (runs.front().sign == 1 ? 1 : 0) +
                    (runs.back().sign == -1 ? 1 : 0);
  }

  // A + to - change is the metastable point; its neighbouring runs are the
  // two lobes. Several such changes (noisy curves) keep the widest pair.
  double best = -1.0;
  for (std::size_t r = 0; r + 1 < runs.size(); ++r) {
    if (runs[r].sign != 1 || runs[r + 1].sign != -1) continue;
    const std::size_t ih = runs[r].best, il = runs[r + 1].best;
    const double high = delta[ih], low = -delta[il];
    if (std::min(high, low) <= best) continue;
    best = std::min(high, low);
    out.snm_high = high;
    out.snm_low = low;
    out.square_high = {pa[ih].x, pa[ih].y, pb[ih].x, pb[ih].y};
    out.square_low = {pa[il].x, pa[il].y, pb[il].x, pb[il].y};
  }
  out.snm = std::min(out.snm_high, out.snm_low);
  return out;
}

ButterflyData butterfly(const Netlist& cell, const TechnologyParams& p, StabilityMode mode,
                        double v_dd, double grid, const std::map<std::string, double>& vth_shifts) {
  if (!(grid > 0.0)) throw DomainError("butterfly grid must be positive");
  if (!(v_dd > 0.0)) throw DomainError("butterfly supply must be positive");
  const double wordline = mode == StabilityMode::Read ? v_dd : 0.0;
  const auto values = sweep_values(0.0, v_dd, grid);
  auto a = open_loop_vtc(cell, p, v_dd, wordline, "Qbar", "Q", values, vth_shifts);
  auto b = open_loop_vtc(cell, p, v_dd, wordline, "Q", "Qbar", values, vth_shifts);
  return snm_from_curves(a, b);
}

void write_butterfly_csv(std::ostream& out, const ButterflyData& b) {
  out << "V1,Vout_A,Vout_B_mirrored\n";
  for (std::size_t i = 0; i < b.curve_a.input.size(); ++i) {
    out << format_plain(b.curve_a.input[i]) << ',' << format_plain(b.curve_a.output[i]) << ','
        << (i < b.curve_b.output.size() ? format_plain(b.curve_b.output[i]) : std::string())
        << '\n';
  }
  out << "# snm_high=" << format_plain(b.snm_high) << '\n'
      << "# snm_low=" << format_plain(b.snm_low) << '\n'
      << "# snm=" << format_plain(b.snm) << '\n';
}

double snm_macro(double v_dd, double drv, double n) {
  if (v_dd < drv) throw DomainError("supply below the data retention voltage");
  if (!(n > -3.0)) throw DomainError("noise tolerance factor must exceed -3");
  return 2.0 / (3.0 + n) * (v_dd - drv);
}

// ---------------------------------------------------------------------------
// Data retention voltage

DrvInputs DrvInputs::uniform(double i_off, double n, double v_t) {
  DrvInputs d;
  d.i_off.fill(i_off);
  d.n.fill(n);
  d.v_t = v_t;
  return d;
}

DrvTerms drv_terms(const DrvInputs& d) {
  for (int i = 0; i < 6; ++i) {
    const std::string idx = std::to_string(i + 1);
    if (!(d.i_off[i] > 0.0) || !std::isfinite(d.i_off[i]))
      throw DomainError("I_off," + idx + " must be positive and finite");
    if (!(d.n[i] >= 1.0) || !std::isfinite(d.n[i]))
      throw DomainError("n_" + idx + " must be >= 1");
  }
  if (!(d.v_t > 0.0)) throw DomainError("thermal voltage must be positive");

  const auto& I = d.i_off;
  const auto& n = d.n;
  const double v_t = d.v_t;
  auto finite = [](double v, const char* term) {
    if (!std::isfinite(v)) throw DomainError(std::string(term) + " is not finite");
    return v;
  };

  const double arg = (1.0 / n[2] + 1.0 / n[3]) * I[3] / (I[1] * I[2]) *
                     (I[4] / n[1] + I[0] * (1.0 / n[0] + 1.0 / n[1]));
  if (!(arg > 0.0) || !std::isfinite(arg))
    throw DomainError("DRV0 logarithm argument is not positive and finite");

  DrvTerms t;
  t.drv0 = finite(v_t / (1.0 / n[1] + 1.0 / n[2]) * std::log(arg), "DRV0");
  t.v1 = finite(v_t * (I[0] + I[4]) / I[1] * std::exp(-t.drv0 / (n[1] * v_t)), "V1");
  t.v2 = finite(t.drv0 - v_t * I[3] / I[2] * std::exp(-t.drv0 / (n[2] * v_t)), "V2");
  t.drv = finite(t.drv0 + (t.v1 / 2.0 + (t.drv0 - t.v2) * n[1] / 2.0), "DRV");
  return t;
}

double drv_closed_form(const DrvInputs& d) { return drv_terms(d).drv; }

double drv_ideal(double n, double v_t) {
  if (!(n > -1.0)) throw DomainError("n must exceed -1");
  return 2.0 * v_t * std::log(1.0 + n);
}

DrvInputs drv_inputs_from_cell(const Netlist& cell, const TechnologyParams& p) {
  if (!cell.has_node("Q") || !cell.has_node("Qbar"))
    throw ConfigError("cell netlist must name its storage nodes Q and Qbar");
  std::array<const MosElement*, 6> role{};
  auto assign = [&](CellRole r, const MosElement& m) {
    for (std::size_t i = 0; i < kDrvIndexMap.size(); ++i) {
      if (kDrvIndexMap[i] != r) continue;
      if (role[i]) throw ConfigError("cell has two candidates for transistor " + std::to_string(i + 1));
      role[i] = &m;
    }
  };
  cell.for_each<MosElement>([&](const MosElement& m) {
    if (m.degenerate()) return;
    const bool on_q = m.drain.name == "Q" || m.source.name == "Q";
    const bool on_qb = m.drain.name == "Qbar" || m.source.name == "Qbar";
    const bool pmos = m.polarity == Polarity::Pmos;
    if (on_q && m.gate.name == "Qbar") {
      assign(pmos ? CellRole::LeftPullUp : CellRole::LeftPullDown, m);
    } else if (on_qb && m.gate.name == "Q") {
      assign(pmos ? CellRole::RightPullUp : CellRole::RightPullDown, m);
    } else if (on_q) {
      assign(CellRole::LeftAccess, m);
    } else if (on_qb) {
      assign(CellRole::RightAccess, m);
    }
  });

  DrvInputs d;
  d.v_t = p.thermal_voltage();
  for (std::size_t i = 0; i < 6; ++i) {
    if (!role[i]) throw ConfigError("cannot identify transistor " + std::to_string(i + 1) + " of the cell");
    const auto& m = *role[i];
    const auto& dev = p.device(m.polarity);
    const double vth = std::abs(dev.vth0);
    d.i_off[i] = m.width / m.length * dev.i0 * std::exp(-vth / (dev.n * d.v_t));
    d.n[i] = dev.n;
  }
  return d;
}

double drv_bruteforce(const Netlist& cell, const TechnologyParams& p, double snm_floor) {
  auto retains = [&](double v_dd) {
    return butterfly(cell, p, StabilityMode::Hold, v_dd, v_dd / 1000.0).snm > snm_floor;
  };
  double lo = 0.005, hi = 0.6;
  if (retains(lo)) return lo;
  while (!retains(hi)) {
    lo = hi;
    if (hi >= 1.8) throw MeasurementError("cell does not retain data at any supply up to 1.8 V");
    hi = std::min(2.0 * hi, 1.8);
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (retains(mid) ? hi : lo) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Write margin

WriteMarginResult write_margin(const Netlist& cell, const TechnologyParams& p, double v_dd,
                               std::optional<double> wordline, double resolution) {
  if (!(v_dd > 0.0)) throw DomainError("supply must be positive");
  if (!(resolution > 0.0)) throw DomainError("resolution must be positive");
  const double wl = wordline.value_or(v_dd);
  Netlist n = biased_cell(cell, v_dd, wl, nullptr);
  if (!n.has_node("BL")) throw ConfigError("cell netlist has no BL node");
  Engine engine(n, p);
  auto flipped = [](const DcSolution& s) { return s.voltage("Q") < s.voltage("Qbar"); };
  auto solve_at = [&](double bl, const DcSolution& seed) {
    engine.set_source_value("V__bl", bl);
    return engine.solve_dc(engine.pack(seed));
  };

  WriteMarginResult r;
  engine.set_source_value("V__bl", v_dd);
  DcSolution held = engine.solve_dc({{"Q", v_dd}, {"Qbar", 0.0}});
  if (flipped(held)) {
    r.diagnostic = "cell does not hold Q high with both bitlines at the supply";
    return r;
  }

  // Coarse continuation down to 0 V, then bisection inside the flip step.
  constexpr double kCoarse = 0.05;
  double hi = v_dd, lo = -1.0;
  for (double bl : sweep_values(v_dd, 0.0, kCoarse)) {
    if (bl == v_dd) continue;
    DcSolution s = solve_at(bl, held);
    if (flipped(s)) {
      lo = bl;
      break;
    }
    held = std::move(s);
    hi = bl;
  }
  if (lo < 0.0) {
    r.diagnostic = "no flip with BL driven to 0 V (WL = " + format_value(wl) + "V)";
    return r;
  }
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    DcSolution s = solve_at(mid, held);
    if (flipped(s)) {
      lo = mid;
    } else {
      hi = mid;
      held = std::move(s);
    }
  }
  r.writable = true;
  r.margin = lo;
  return r;
}

// ---------------------------------------------------------------------------
// Monte Carlo

double sigma_vth(double a_vth, double w, double l) {
  if (!(w * l > 0.0)) throw DomainError("device area W*L must be positive");
  return a_vth * std::sqrt(1.0 / (w * l));
}

MonteCarloSummary monte_carlo_snm(const Netlist& cell, const TechnologyParams& p,
                                  const VariationModel& vm, StabilityMode mode, double v_dd,
                                  double grid) {
  if (vm.samples < 1) throw DomainError("Monte Carlo needs at least one sample");

  std::vector<const MosElement*> devices;
  cell.for_each<MosElement>([&](const MosElement& m) {
    if (!m.degenerate()) devices.push_back(&m);
  });
  std::vector<double> sigma;
  for (const auto* m : devices) {
    sigma.push_back(sigma_vth(vm.a_vth.value_or(p.device(m->polarity).avth), m->width, m->length));
  }

  // All random draws happen up front in sample order, so results do not
  // depend on the number of workers.
  std::mt19937_64 rng(vm.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::map<std::string, double>> shifts(static_cast<std::size_t>(vm.samples));
  for (auto& s : shifts) {
    for (std::size_t i = 0; i < devices.size(); ++i) s[devices[i]->id] = sigma[i] * normal(rng);
  }

  MonteCarloSummary out;
  out.samples = vm.samples;
  out.nominal = butterfly(cell, p, mode, v_dd, grid).snm;

  std::vector<std::optional<double>> results(shifts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < shifts.size();) {
      try {
        results[i] = butterfly(cell, p, mode, v_dd, grid, shifts[i]).snm;
      } catch (const Error&) {
        results[i].reset();
      }
    }
  };
  unsigned workers = vm.threads > 0 ? static_cast<unsigned>(vm.threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(shifts.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (const auto& r : results) {
    if (r) {
      out.values.push_back(*r);
    } else {
      ++out.failures;
    }
  }
  if (out.failures * 10 > out.samples)
    throw MeasurementError("Monte Carlo: " + std::to_string(out.failures) + " of " +
                           std::to_string(out.samples) + " samples failed to solve");

  // Moments about the first value, so identical samples give exactly zero spread.
  const auto& v = out.values;
  const double count = static_cast<double>(v.size());
  const double origin = v.front();
  double sum = 0.0, sum_sq = 0.0;
  for (double x : v) {
    sum += x - origin;
    sum_sq += (x - origin) * (x - origin);
  }
  out.mean = origin + sum / count;
  const double ss = std::max(0.0, sum_sq - sum * sum / count);
  out.stddev = v.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  out.min = *std::min_element(v.begin(), v.end());
  out.max = *std::max_element(v.begin(), v.end());

  constexpr int kBins = 10;
  const double width = (out.max - out.min) / kBins;
  for (int i = 0; i <= kBins; ++i) out.histogram.edges.push_back(out.min + i * width);
  out.histogram.edges.back() = out.max;
  out.histogram.counts.assign(kBins, 0);
  for (double x : v) {
    int bin = width > 0.0 ? static_cast<int>((x - out.min) / width) : 0;
    ++out.histogram.counts[std::clamp(bin, 0, kBins - 1)];
  }
  return out;
}

}  // namespace sramwb
