#include "sramwb/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>

#include "CLI11.hpp"
#include "sramwb/config.hpp"
#include "sramwb/engine.hpp"
#include "sramwb/errors.hpp"
#include "sramwb/genlib.hpp"
#include "sramwb/metrics.hpp"
#include "sramwb/netlist.hpp"
#include "sramwb/report.hpp"
#include "sramwb/stability.hpp"
#include "sramwb/units.hpp"

namespace sramwb::cli {
namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

double number(const std::string& flag, const std::string& text) {
  auto v = try_parse_value(text);
  if (!v) throw UsageError("bad number for " + flag + ": '" + text + "'");
  return *v;
}

std::optional<double> optional_number(const std::string& flag, const std::string& text) {
  if (text.empty()) return std::nullopt;
  return number(flag, text);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  return f;
}

Verdict verdict(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

StabilityMode parse_mode(const std::string& s) {
  if (s == "hold") return StabilityMode::Hold;
  if (s == "read") return StabilityMode::Read;
  throw UsageError("mode must be hold or read, got '" + s + "'");
}

// "W/L" with optional suffixes on either side.
DeviceRatio parse_ratio(const std::string& flag, const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) throw UsageError(flag + " expects W/L, got '" + text + "'");
  return {number(flag, text.substr(0, slash)), number(flag, text.substr(slash + 1))};
}

// "WxH" in lambda.
std::pair<double, double> parse_rect(const std::string& text) {
  auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw UsageError("--rect expects WxH, got '" + text + "'");
  return {number("--rect", text.substr(0, x)), number("--rect", text.substr(x + 1))};
}

struct Globals {
  std::string config;
  std::string model = "blended";
};

TechnologyParams technology(const Globals& g) {
  TechnologyParams p = g.config.empty() ? TechnologyParams::defaults() : load_config(g.config);
  if (g.model == "subthreshold") {
    p.model = ModelKind::SubthresholdOnly;
  } else if (g.model != "blended") {
    throw UsageError("--model must be blended or subthreshold");
  }
  return p;
}

AnalysisReport start_report(const std::string& command, const TechnologyParams& p) {
  AnalysisReport r;
  r.header("sramwb " + command);
  for (const auto& line : describe(p)) r.header(line);
  return r;
}

Netlist cell_or_default(const std::string& path) {
  return path.empty() ? build_6t_cell() : parse_netlist_file(path);
}

// Everything a subcommand needs after CLI11 has filled the option strings.
struct Context {
  const Globals& globals;
  std::ostream& out;
  std::ostream& err;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SRAM analysis workbench", "sramwb"};
  app.require_subcommand(1);
  app.fallthrough();  // --config and --model may follow the subcommand
  Globals globals;
  app.add_option("--config", globals.config, "technology config file");
  app.add_option("--model", globals.model, "device model: blended or subthreshold");

  std::map<std::string, std::function<int()>> handlers;
  Context ctx{globals, out, err};
  auto emit = [&](const AnalysisReport& r) { out << r.to_text(); };

  // parse ---------------------------------------------------------------
  std::string parse_file, parse_out;
  auto* parse = app.add_subcommand("parse", "parse a netlist and report its contents");
  parse->add_option("netlist", parse_file, "netlist file")->required();
  parse->add_option("--out", parse_out, "write the re-printed netlist here");
  handlers["parse"] = [&] {
    const auto p = technology(ctx.globals);
    Netlist n = parse_netlist_file(parse_file);
    auto r = start_report("parse " + parse_file, p);
    r.add("elements", static_cast<double>(n.element_count()), "", "parse_netlist");
    r.add("nodes", static_cast<double>(n.node_names().size()), "", "parse_netlist");
    const std::string printed = print_netlist(n);
    const bool stable = parse_netlist(printed) == n;
    r.add("round_trip", stable ? 1 : 0, "", "print_netlist", verdict(stable));
    if (!n.title.empty()) r.note("title: " + n.title);
    for (const auto& w : n.warnings) r.note("warning: " + w);
    if (!parse_out.empty()) open_output(parse_out) << printed;
    emit(r);
    return kExitOk;
  };

  // validate ------------------------------------------------------------
  std::string validate_file;
  auto* validate_cmd = app.add_subcommand("validate", "structural checks on a netlist");
  validate_cmd->add_option("netlist", validate_file, "netlist file")->required();
  handlers["validate"] = [&] {
    const auto p = technology(ctx.globals);
    Netlist n = parse_netlist_file(validate_file);
    auto r = start_report("validate " + validate_file, p);
    r.merge(validate(n));
    emit(r);
    const auto& e = r.entries();
    return std::any_of(e.begin(), e.end(), [](const ReportEntry& x) { return x.verdict == Verdict::Fail; })
               ? kExitAnalysis
               : kExitOk;
  };

  // generate ------------------------------------------------------------
  std::string gen_kind = "cell", gen_out, gen_vdd = "1.8";
  int gen_rows = 1, gen_cols = 1;
  bool gen_parasitics = false;
  auto* generate = app.add_subcommand("generate", "write a generated netlist");
  generate->add_option("--kind", gen_kind,
                       "cell, array, sense-amp, precharge, write-driver or decoder");
  generate->add_option("--rows", gen_rows, "array rows");
  generate->add_option("--cols", gen_cols, "array columns");
  generate->add_option("--vdd", gen_vdd, "supply voltage");
  generate->add_flag("--parasitics", gen_parasitics, "attach the extracted cell capacitances");
  generate->add_option("--out", gen_out, "output netlist file (default stdout)");
  handlers["generate"] = [&] {
    const double v_dd = number("--vdd", gen_vdd);
    Netlist n;
    if (gen_kind == "cell") {
      n = build_6t_cell({}, gen_parasitics ? extracted_cell_parasitics() : ParasiticMap{}, v_dd);
    } else if (gen_kind == "array") {
      n = build_array(gen_rows, gen_cols, {}, v_dd);
    } else if (auto kind = parse_periphery_kind(gen_kind)) {
      n = build_periphery(*kind, {}, v_dd);
    } else {
      throw UsageError("unknown --kind '" + gen_kind + "'");
    }
    const std::string text = print_netlist(n);
    if (gen_out.empty()) {
      out << text;
    } else {
      open_output(gen_out) << text;
      auto r = start_report("generate " + gen_kind, technology(ctx.globals));
      r.add("elements", static_cast<double>(n.element_count()), "", "genlib");
      r.add("nodes", static_cast<double>(n.node_names().size()), "", "genlib");
      emit(r);
    }
    return kExitOk;
  };

  // dc ------------------------------------------------------------------
  std::string dc_file, dc_out;
  auto* dc = app.add_subcommand("dc", "DC operating point");
  dc->add_option("--netlist", dc_file, "netlist file")->required();
  dc->add_option("--out", dc_out, "CSV of node voltages and source currents");
  handlers["dc"] = [&] {
    const auto p = technology(ctx.globals);
    Netlist n = parse_netlist_file(dc_file);
    auto s = solve_dc(n, p);
    auto r = start_report("dc " + dc_file, p);
    for (std::size_t i = 0; i < s.node_names.size(); ++i)
      r.add("V(" + s.node_names[i] + ")", s.voltages[i], "V", "solve_dc");
    for (std::size_t i = 0; i < s.source_ids.size(); ++i)
      r.add("I(" + s.source_ids[i] + ")", s.source_currents[i], "A", "solve_dc");
    r.add("iterations", s.iterations, "", "solve_dc");
    if (s.source_stepping) r.note("operating point reached by source stepping");
    if (!dc_out.empty()) {
      auto f = open_output(dc_out);
      f << "signal,value\n";
      for (const auto& e : r.entries()) {
        if (e.unit == "V" || e.unit == "A") f << e.name << ',' << format_plain(e.value) << '\n';
      }
    }
    emit(r);
    return kExitOk;
  };

  // sweep ---------------------------------------------------------------
  std::string sw_file, sw_source, sw_probe, sw_from, sw_to, sw_step, sw_out;
  auto* sweep = app.add_subcommand("sweep", "DC transfer curve");
  sweep->add_option("--netlist", sw_file, "netlist file")->required();
  sweep->add_option("--source", sw_source, "independent source to sweep")->required();
  sweep->add_option("--probe", sw_probe, "node to record")->required();
  sweep->add_option("--from", sw_from, "start value")->required();
  sweep->add_option("--to", sw_to, "stop value")->required();
  sweep->add_option("--step", sw_step, "increment")->required();
  sweep->add_option("--out", sw_out, "CSV of the curve");
  handlers["sweep"] = [&] {
    const auto p = technology(ctx.globals);
    Netlist n = parse_netlist_file(sw_file);
    auto c = dc_sweep(n, p, sw_source, sw_probe, number("--from", sw_from), number("--to", sw_to),
                      number("--step", sw_step));
    auto r = start_report("sweep " + sw_file, p);
    r.add("points", static_cast<double>(c.input.size()), "", "dc_sweep");
    r.add("output_min", *std::min_element(c.output.begin(), c.output.end()), "V", "dc_sweep");
    r.add("output_max", *std::max_element(c.output.begin(), c.output.end()), "V", "dc_sweep");
    if (!sw_out.empty()) {
      auto f = open_output(sw_out);
      write_csv(f, sw_source, c.input, {sw_probe}, {&c.output});
    }
    emit(r);
    return kExitOk;
  };

  // tran ----------------------------------------------------------------
  std::string tr_file, tr_stop, tr_dt, tr_method = "be", tr_out;
  std::vector<std::string> tr_ics, tr_probes;
  auto* tran = app.add_subcommand("tran", "fixed-step transient analysis");
  tran->add_option("--netlist", tr_file, "netlist file")->required();
  tran->add_option("--tstop", tr_stop, "stop time")->required();
  tran->add_option("--dt", tr_dt, "time step")->required();
  tran->add_option("--method", tr_method, "be (backward Euler) or trap");
  tran->add_option("--ic", tr_ics, "initial condition NODE=VALUE (repeatable)");
  tran->add_option("--probe", tr_probes, "node to report and export (repeatable)");
  tran->add_option("--out", tr_out, "CSV waveform");
  handlers["tran"] = [&] {
    const auto p = technology(ctx.globals);
    Netlist n = parse_netlist_file(tr_file);
    TransientOptions o;
    o.t_stop = number("--tstop", tr_stop);
    o.dt = number("--dt", tr_dt);
    if (tr_method == "trap") {
      o.method = Integrator::Trapezoidal;
    } else if (tr_method != "be") {
      throw UsageError("--method must be be or trap");
    }
    for (const auto& ic : tr_ics) {
      auto eq = ic.find('=');
      if (eq == std::string::npos) throw UsageError("--ic expects NODE=VALUE, got '" + ic + "'");
      o.initial_conditions[ic.substr(0, eq)] = number("--ic", ic.substr(eq + 1));
    }
    auto w = transient(n, p, o);
    auto r = start_report("tran " + tr_file, p);
    r.add("samples", static_cast<double>(w.samples()), "", "transient");
    for (const auto& name : tr_probes.empty() ? w.node_names : tr_probes)
      r.add("V(" + name + ")@tstop", w.node(name).back(), "V", "transient");
    for (const auto& warning : w.warnings) r.note("warning: " + warning);
    if (!tr_out.empty()) {
      auto f = open_output(tr_out);
      write_waveform_csv(f, w, tr_probes);
    }
    emit(r);
    return kExitOk;
  };

  // snm -----------------------------------------------------------------
  std::string snm_file, snm_mode = "hold", snm_vdd = "1.8", snm_grid = "1m", snm_out;
  auto* snm = app.add_subcommand("snm", "butterfly curves and static noise margin");
  snm->add_option("--netlist", snm_file, "cell netlist (default: generated 6T cell)");
  snm->add_option("--mode", snm_mode, "hold or read");
  snm->add_option("--vdd", snm_vdd, "supply voltage");
  snm->add_option("--grid", snm_grid, "sweep resolution");
  snm->add_option("--out", snm_out, "butterfly CSV");
  handlers["snm"] = [&] {
    const auto p = technology(ctx.globals);
    Netlist cell = cell_or_default(snm_file);
    auto b = butterfly(cell, p, parse_mode(snm_mode), number("--vdd", snm_vdd),
                       number("--grid", snm_grid));
    auto r = start_report("snm " + snm_mode, p);
    r.add("snm_high", b.snm_high, "V", "butterfly");
    r.add("snm_low", b.snm_low, "V", "butterfly");
    r.add("snm", b.snm, "V", "butterfly", verdict(b.snm > 0.0));
    if (!snm_out.empty()) {
      auto f = open_output(snm_out);
      write_butterfly_csv(f, b);
    }
    emit(r);
    return kExitOk;
  };

  // drv -----------------------------------------------------------------
  std::string drv_file, drv_vdd = "1.8", drv_tol = "20m";
  bool drv_skip_brute = false;
  auto* drv = app.add_subcommand("drv", "data retention voltage");
  drv->add_option("--netlist", drv_file, "cell netlist (default: generated 6T cell)");
  drv->add_option("--vdd", drv_vdd, "supply for the SNM macro-model");
  drv->add_option("--tolerance", drv_tol, "allowed closed-form vs brute-force gap");
  drv->add_flag("--no-bruteforce", drv_skip_brute, "skip the bisection oracle");
  handlers["drv"] = [&] {
    const auto p = technology(ctx.globals);
    Netlist cell = cell_or_default(drv_file);
    const auto inputs = drv_inputs_from_cell(cell, p);
    const auto t = drv_terms(inputs);
    auto r = start_report("drv", p);
    r.add("drv0", t.drv0, "V", "drv_closed_form");
    r.add("v1", t.v1, "V", "drv_closed_form");
    r.add("v2", t.v2, "V", "drv_closed_form");
    r.add("drv_closed_form", t.drv, "V", "drv_closed_form");
    r.add("drv_ideal", drv_ideal(inputs.n[0], inputs.v_t), "V", "drv_ideal");
    const double v_dd = number("--vdd", drv_vdd);
    if (v_dd >= t.drv) r.add("snm_macro", snm_macro(v_dd, t.drv, inputs.n[0]), "V", "snm_macro");
    if (!drv_skip_brute) {
      const double brute = drv_bruteforce(cell, p);
      const double gap = std::abs(brute - t.drv);
      r.add("drv_bruteforce", brute, "V", "drv_bruteforce");
      r.add("drv_gap", gap, "V", "drv_bruteforce", verdict(gap <= number("--tolerance", drv_tol)));
    }
    emit(r);
    return kExitOk;
  };

  // write-margin --------------------------------------------------------
  std::string wm_file, wm_vdd = "1.8", wm_wl, wm_res = "1m";
  auto* wm = app.add_subcommand("write-margin", "highest bitline voltage that flips the cell");
  wm->add_option("--netlist", wm_file, "cell netlist (default: generated 6T cell)");
  wm->add_option("--vdd", wm_vdd, "supply voltage");
  wm->add_option("--wl", wm_wl, "wordline voltage (default: supply)");
  wm->add_option("--resolution", wm_res, "bisection resolution");
  handlers["write-margin"] = [&] {
    const auto p = technology(ctx.globals);
    Netlist cell = cell_or_default(wm_file);
    auto m = write_margin(cell, p, number("--vdd", wm_vdd), optional_number("--wl", wm_wl),
                          number("--resolution", wm_res));
    auto r = start_report("write-margin", p);
    r.add("writable", m.writable ? 1 : 0, "", "write_margin", verdict(m.writable));
    if (m.writable) r.add("write_margin", m.margin, "V", "write_margin");
    if (!m.diagnostic.empty()) r.note(m.diagnostic);
    emit(r);
    return m.writable ? kExitOk : kExitAnalysis;
  };

  // power ---------------------------------------------------------------
  std::string pw_cl, pw_vdd, pw_fsw;
  auto* power = app.add_subcommand("power", "dynamic switching power C V^2 f");
  power->add_option("--cl", pw_cl, "load capacitance")->required();
  power->add_option("--vdd", pw_vdd, "supply voltage")->required();
  power->add_option("--fsw", pw_fsw, "switching frequency")->required();
  handlers["power"] = [&] {
    const auto p = technology(ctx.globals);
    auto r = start_report("power", p);
    r.add("dynamic_power",
          dynamic_power(number("--cl", pw_cl), number("--vdd", pw_vdd), number("--fsw", pw_fsw)),
          "W", "dynamic_power");
    emit(r);
    return kExitOk;
  };

  // delay ---------------------------------------------------------------
  std::string dl_plh, dl_phl, dl_wave, dl_in, dl_outnode, dl_low = "0", dl_high, dl_frac = "0.5";
  auto* delay = app.add_subcommand("delay", "propagation delay from edges or a waveform CSV");
  delay->add_option("--tplh", dl_plh, "low-to-high delay");
  delay->add_option("--tphl", dl_phl, "high-to-low delay");
  delay->add_option("--waveform", dl_wave, "waveform CSV (time first)");
  delay->add_option("--input", dl_in, "input signal column");
  delay->add_option("--output", dl_outnode, "output signal column");
  delay->add_option("--vlow", dl_low, "logic low level");
  delay->add_option("--vhigh", dl_high, "logic high level");
  delay->add_option("--fraction", dl_frac, "crossing fraction");
  handlers["delay"] = [&] {
    const auto p = technology(ctx.globals);
    DelayMeasurement d;
    if (!dl_wave.empty()) {
      if (dl_in.empty() || dl_outnode.empty() || dl_high.empty())
        throw UsageError("--waveform needs --input, --output and --vhigh");
      std::ifstream f(dl_wave);
      if (!f) throw Error("cannot open waveform '" + dl_wave + "'");
      auto w = read_waveform_csv(f);
      d = propagation_delay(w, dl_in, dl_outnode, number("--vlow", dl_low),
                            number("--vhigh", dl_high), number("--fraction", dl_frac));
    } else if (!dl_plh.empty() && !dl_phl.empty()) {
      d = DelayMeasurement::from_edges(number("--tplh", dl_plh), number("--tphl", dl_phl));
    } else {
      throw UsageError("delay needs --tplh and --tphl, or --waveform");
    }
    auto r = start_report("delay", p);
    r.add("t_plh", d.t_plh, "s", "propagation_delay");
    r.add("t_phl", d.t_phl, "s", "propagation_delay");
    r.add("t_p", d.t_p, "s", "propagation_delay");
    emit(r);
    return kExitOk;
  };

  // ratios --------------------------------------------------------------
  const CellGeometry geometry;
  auto ratio_text = [](DeviceSize d) { return format_value(d.w) + "/" + format_value(d.l); };
  std::string rt_pd = ratio_text(geometry.pd), rt_pu = ratio_text(geometry.pu),
              rt_pg = ratio_text(geometry.pg);
  std::string rt_pd_r, rt_pu_r, rt_pg_r;
  auto* ratios = app.add_subcommand("ratios", "cell ratio and pull-up ratio checks");
  ratios->add_option("--pd", rt_pd, "pull-down W/L (both sides)");
  ratios->add_option("--pu", rt_pu, "pull-up W/L (both sides)");
  ratios->add_option("--pg", rt_pg, "access W/L (both sides)");
  ratios->add_option("--pd-right", rt_pd_r, "right pull-down W/L");
  ratios->add_option("--pu-right", rt_pu_r, "right pull-up W/L");
  ratios->add_option("--pg-right", rt_pg_r, "right access W/L");
  handlers["ratios"] = [&] {
    const auto p = technology(ctx.globals);
    auto pair = [](const char* flag, const std::string& both, const std::string& right) {
      SidePair s;
      s.left = parse_ratio(flag, both);
      s.right = right.empty() ? s.left : parse_ratio(flag, right);
      return s;
    };
    auto rr = check_ratios(pair("--pd", rt_pd, rt_pd_r), pair("--pu", rt_pu, rt_pu_r),
                           pair("--pg", rt_pg, rt_pg_r));
    auto r = start_report("ratios", p);
    r.add("cr_left", rr.cr_left, "", "check_ratios");
    r.add("cr_right", rr.cr_right, "", "check_ratios");
    r.add("pr_left", rr.pr_left, "", "check_ratios");
    r.add("pr_right", rr.pr_right, "", "check_ratios");
    r.add("read_stable", rr.read_stable ? 1 : 0, "", "check_ratios", verdict(rr.read_stable));
    r.add("write_stable", rr.write_stable ? 1 : 0, "", "check_ratios", verdict(rr.write_stable));
    emit(r);
    return kExitOk;
  };

  // area ----------------------------------------------------------------
  std::vector<std::string> ar_rects;
  auto* area = app.add_subcommand("area", "rectangle areas in lambda^2");
  area->add_option("--rect", ar_rects, "rectangle WxH in lambda (repeatable)")->required();
  handlers["area"] = [&] {
    const auto p = technology(ctx.globals);
    std::vector<std::pair<double, double>> rects;
    for (const auto& s : ar_rects) rects.push_back(parse_rect(s));
    auto a = area_report(rects);
    auto r = start_report("area", p);
    for (std::size_t i = 0; i < a.areas.size(); ++i)
      r.add("area_" + std::to_string(i + 1), a.areas[i], "lambda^2", "area_report");
    r.add("total_area", a.total, "lambda^2", "area_report");
    emit(r);
    return kExitOk;
  };

  // montecarlo ----------------------------------------------------------
  std::string mc_file, mc_mode = "hold", mc_vdd = "1.8", mc_grid = "1m", mc_avth, mc_out;
  int mc_samples = 200, mc_threads = 0;
  std::uint64_t mc_seed = 1;
  auto* mc = app.add_subcommand("montecarlo", "threshold-mismatch Monte Carlo of the SNM");
  mc->add_option("--netlist", mc_file, "cell netlist (default: generated 6T cell)");
  mc->add_option("--samples", mc_samples, "sample count");
  mc->add_option("--seed", mc_seed, "random seed");
  mc->add_option("--avth", mc_avth, "mismatch coefficient in V*m (default: technology)");
  mc->add_option("--threads", mc_threads, "worker threads (0 = all cores)");
  mc->add_option("--mode", mc_mode, "hold or read");
  mc->add_option("--vdd", mc_vdd, "supply voltage");
  mc->add_option("--grid", mc_grid, "sweep resolution");
  mc->add_option("--out", mc_out, "CSV of per-sample SNM");
  handlers["montecarlo"] = [&] {
    const auto p = technology(ctx.globals);
    Netlist cell = cell_or_default(mc_file);
    VariationModel vm;
    vm.samples = mc_samples;
    vm.seed = mc_seed;
    vm.threads = mc_threads;
    vm.a_vth = optional_number("--avth", mc_avth);
    auto s = monte_carlo_snm(cell, p, vm, parse_mode(mc_mode), number("--vdd", mc_vdd),
                             number("--grid", mc_grid));
    auto r = start_report("montecarlo " + mc_mode + " seed=" + std::to_string(mc_seed), p);
    r.add("samples", s.samples, "", "monte_carlo_snm");
    r.add("failures", s.failures, "", "monte_carlo_snm");
    r.add("snm_nominal", s.nominal, "V", "butterfly");
    r.add("snm_mean", s.mean, "V", "monte_carlo_snm");
    r.add("snm_stddev", s.stddev, "V", "monte_carlo_snm");
    r.add("snm_min", s.min, "V", "monte_carlo_snm");
    r.add("snm_max", s.max, "V", "monte_carlo_snm");
    for (std::size_t i = 0; i < s.histogram.counts.size(); ++i) {
      r.note("bin [" + format_plain(s.histogram.edges[i]) + ", " +
             format_plain(s.histogram.edges[i + 1]) + "] " +
             std::to_string(s.histogram.counts[i]));
    }
    if (!mc_out.empty()) {
      auto f = open_output(mc_out);
      f << "sample,snm\n";
      for (std::size_t i = 0; i < s.values.size(); ++i)
        f << i << ',' << format_plain(s.values[i]) << '\n';
    }
    emit(r);
    return kExitOk;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return handlers.at(name)();
  } catch (const ConvergenceError& e) {
    err << "sramwb " << name << ": " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const FloatingCircuitError& e) {
    err << "sramwb " << name << ": " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const MeasurementError& e) {
    err << "sramwb " << name << ": " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const DomainError& e) {
    err << "sramwb " << name << ": " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const Error& e) {
    // Parse, config, usage and file errors.
    err << "sramwb " << name << ": " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace sramwb::cli
