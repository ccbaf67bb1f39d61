#include "sramwb/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sramwb/errors.hpp"
#include "sramwb/units.hpp"

namespace sramwb {

double DcSolution::voltage(std::string_view node) const {
  if (node == kGroundName) return 0.0;
  for (std::size_t i = 0; i < node_names.size(); ++i) {
    if (node_names[i] == node) return voltages[i];
  }
  throw Error("no node '" + std::string(node) + "' in solution");
}

double DcSolution::current(std::string_view source) const {
  for (std::size_t i = 0; i < source_ids.size(); ++i) {
    if (source_ids[i] == source) return source_currents[i];
  }
  throw Error("no voltage source '" + std::string(source) + "' in solution");
}

const std::vector<double>& Waveform::node(std::string_view name) const {
  for (std::size_t i = 0; i < node_names.size(); ++i) {
    if (node_names[i] == name) return voltages[i];
  }
  throw Error("no node '" + std::string(name) + "' in waveform");
}

// ---------------------------------------------------------------------------

Engine::Engine(const Netlist& netlist, TechnologyParams tech, SolverOptions options)
    : netlist_(netlist), tech_(std::move(tech)), options_(options), v_t_(tech_.thermal_voltage()) {
  auto index = [&](const Node& node) -> int {
    if (node.is_ground()) return -1;
    auto it = node_index_.find(node.name);
    if (it != node_index_.end()) return it->second;
    int i = static_cast<int>(node_names_.size());
    node_names_.push_back(node.name);
    node_index_.emplace(node.name, i);
    return i;
  };
  auto has_placeholder = [](std::initializer_list<const Node*> nodes) {
    return std::any_of(nodes.begin(), nodes.end(), [](const Node* n) { return n->is_placeholder(); });
  };

  for (const auto& e : netlist.entries) {
    if (auto* m = std::get_if<MosElement>(&e)) {
      if (m->degenerate()) continue;
      mos_.push_back({m->id, index(m->drain), index(m->gate), index(m->source), index(m->bulk),
                      m->polarity, m->length, m->width});
    } else if (auto* r = std::get_if<ResElement>(&e)) {
      if (has_placeholder({&r->a, &r->b})) continue;
      resistors_.push_back({r->id, index(r->a), index(r->b), r->value});
    } else if (auto* c = std::get_if<CapElement>(&e)) {
      if (has_placeholder({&c->a, &c->b})) continue;
      capacitors_.push_back({c->id, index(c->a), index(c->b), c->value});
    } else if (auto* s = std::get_if<SourceElement>(&e)) {
      if (has_placeholder({&s->pos, &s->neg})) continue;
      sources_.push_back({*s, index(s->pos), index(s->neg), -1, std::nullopt});
    }
  }
  const int n_nodes = static_cast<int>(node_names_.size());
  for (auto& s : sources_) {
    if (s.element.is_current) continue;
    s.branch = n_nodes + static_cast<int>(source_ids_.size());
    source_ids_.push_back(s.element.id);
  }
}

void Engine::set_vth_shifts(const std::map<std::string, double>& shifts) {
  for (auto& m : mos_) {
    auto it = shifts.find(m.id);
    m.vth_shift = it == shifts.end() ? 0.0 : it->second;
  }
}

void Engine::set_source_value(std::string_view id, std::optional<double> value) {
  for (auto& s : sources_) {
    if (s.element.id == id) {
      s.fixed = value;
      return;
    }
  }
  throw Error("no source '" + std::string(id) + "' in netlist");
}

double Engine::source_value(const Source& s, const Context& ctx) const {
  return ctx.scale * (s.fixed ? *s.fixed : s.element.value_at(ctx.time));
}

double Engine::cap_voltage(const TwoTerminal& c, const Eigen::VectorXd& x) const {
  return (c.a < 0 ? 0.0 : x[c.a]) - (c.b < 0 ? 0.0 : x[c.b]);
}

void Engine::assemble(const Eigen::VectorXd& x, const Context& ctx, Eigen::VectorXd& f,
                      Eigen::MatrixXd* jac) const {
  const int n = static_cast<int>(unknowns());
  f.setZero(n);
  if (jac) jac->setZero(n, n);
  auto v = [&](int i) { return i < 0 ? 0.0 : x[i]; };
  auto add_f = [&](int i, double value) {
    if (i >= 0) f[i] += value;
  };
  auto add_j = [&](int i, int j, double value) {
    if (jac && i >= 0 && j >= 0) (*jac)(i, j) += value;
  };
  auto stamp_conductance = [&](int a, int b, double g) {
    add_j(a, a, g);
    add_j(a, b, -g);
    add_j(b, a, -g);
    add_j(b, b, g);
  };

  if (options_.gmin > 0.0) {
    for (int i = 0; i < static_cast<int>(node_names_.size()); ++i) {
      f[i] += options_.gmin * x[i];
      add_j(i, i, options_.gmin);
    }
  }

  for (const auto& r : resistors_) {
    const double g = 1.0 / r.value;
    const double i = g * (v(r.a) - v(r.b));
    add_f(r.a, i);
    add_f(r.b, -i);
    stamp_conductance(r.a, r.b, g);
  }

  if (ctx.transient) {
    const bool trap = ctx.method == Integrator::Trapezoidal;
    for (std::size_t k = 0; k < capacitors_.size(); ++k) {
      const auto& c = capacitors_[k];
      const double geq = (trap ? 2.0 : 1.0) * c.value / ctx.h;
      double i = geq * (cap_voltage(c, x) - (*ctx.cap_v_prev)[k]);
      if (trap) i -= (*ctx.cap_i_prev)[k];
      add_f(c.a, i);
      add_f(c.b, -i);
      stamp_conductance(c.a, c.b, geq);
    }
  }

  for (const auto& s : sources_) {
    const double value = source_value(s, ctx);
    if (s.branch < 0) {
      add_f(s.pos, value);
      add_f(s.neg, -value);
      continue;
    }
    const double i = x[s.branch];
    add_f(s.pos, i);
    add_f(s.neg, -i);
    add_j(s.pos, s.branch, 1.0);
    add_j(s.neg, s.branch, -1.0);
    f[s.branch] = v(s.pos) - v(s.neg) - value;
    add_j(s.branch, s.pos, 1.0);
    add_j(s.branch, s.neg, -1.0);
  }

  for (const auto& m : mos_) {
    const auto& params = tech_.device(m.polarity);
    const auto tc = terminal_current(params, m.polarity, m.length, m.width,
                                     {v(m.d), v(m.g), v(m.s), v(m.b)}, v_t_, tech_.model,
                                     m.vth_shift);
    add_f(m.d, tc.id);
    add_f(m.s, -tc.id);
    const int terms[4] = {m.d, m.g, m.s, m.b};
    for (int j = 0; j < 4; ++j) {
      add_j(m.d, terms[j], tc.g[j]);
      add_j(m.s, terms[j], -tc.g[j]);
    }
  }
}

void Engine::residual(const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd* jac) const {
  assemble(x, Context{}, f, jac);
}

std::string Engine::worst_node(const Eigen::VectorXd& x, const Context& ctx) const {
  if (node_names_.empty()) return {};
  Eigen::VectorXd f;
  assemble(x, ctx, f, nullptr);
  int worst = 0;
  for (int i = 0; i < static_cast<int>(node_names_.size()); ++i) {
    if (!(std::abs(f[i]) <= std::abs(f[worst]))) worst = i;
  }
  return node_names_[worst];
}

void Engine::check_connectivity(bool include_capacitors) const {
  // Union-find over DC-conducting branches; index n_nodes stands for ground.
  const int ground = static_cast<int>(node_names_.size());
  std::vector<int> parent(ground + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto join = [&](int a, int b) {
    parent[find(a < 0 ? ground : a)] = find(b < 0 ? ground : b);
  };
  for (const auto& r : resistors_) join(r.a, r.b);
  for (const auto& s : sources_) {
    if (s.branch >= 0) join(s.pos, s.neg);
  }
  for (const auto& m : mos_) join(m.d, m.s);
  if (include_capacitors) {
    for (const auto& c : capacitors_) join(c.a, c.b);
  }
  std::string floating;
  for (int i = 0; i < ground; ++i) {
    if (find(i) != find(ground)) floating += (floating.empty() ? "" : " ") + node_names_[i];
  }
  if (!floating.empty())
    throw FloatingCircuitError("floating subcircuit: no DC path to ground from node(s) " +
                               floating);
}

bool Engine::newton(Eigen::VectorXd& x, const Context& ctx, int& iterations,
                    double& residual) const {
  const int n = static_cast<int>(unknowns());
  const int n_nodes = static_cast<int>(node_names_.size());
  Eigen::VectorXd f(n), dx(n);
  Eigen::MatrixXd jac(n, n);
  bool step_small = false;

  for (int it = 1; it <= options_.max_iterations; ++it) {
    assemble(x, ctx, f, &jac);
    if (!f.allFinite()) return false;
    residual = n_nodes ? f.head(n_nodes).cwiseAbs().maxCoeff() : 0.0;
    const double branch_residual = n > n_nodes ? f.tail(n - n_nodes).cwiseAbs().maxCoeff() : 0.0;
    if (step_small && residual < options_.abstol && branch_residual < options_.vntol) {
      iterations = it - 1;
      return true;
    }

    // Row equilibration; node rows mix pA-scale device conductances with the
    // unit entries of the source branch columns.
    for (int i = 0; i < n; ++i) {
      const double scale = jac.row(i).cwiseAbs().maxCoeff();
      if (scale == 0.0) {
        throw FloatingCircuitError(
            "singular MNA matrix: no conductance at " +
            (i < n_nodes ? "node " + node_names_[i] : "source " + source_ids_[i - n_nodes]));
      }
      jac.row(i) /= scale;
      f[i] /= scale;
    }
    dx = jac.partialPivLu().solve(-f);
    if (!dx.allFinite()) throw FloatingCircuitError("singular MNA matrix (floating subcircuit)");

    step_small = true;
    for (int i = 0; i < n; ++i) {
      if (i < n_nodes && std::abs(dx[i]) > options_.max_step) {
        dx[i] = std::copysign(options_.max_step, dx[i]);
        step_small = false;
      }
      const double next = x[i] + dx[i];
      const double tol = i < n_nodes
                             ? options_.reltol * std::max(std::abs(x[i]), std::abs(next)) + options_.vntol
                             : options_.reltol * std::max(std::abs(x[i]), std::abs(next)) + options_.abstol;
      if (std::abs(dx[i]) > tol) step_small = false;
    }
    x += dx;
  }
  iterations = options_.max_iterations;
  return false;
}

DcSolution Engine::solve_with_fallback(const Eigen::VectorXd& guess, const Context& ctx) const {
  check_connectivity(false);
  Eigen::VectorXd x = guess;
  int iterations = 0;
  double residual = 0.0;
  if (newton(x, ctx, iterations, residual)) return unpack(x, iterations, residual);

  // Source stepping: ramp every independent source from 0 to 100 %.
  Context ramp = ctx;
  x.setZero(static_cast<Eigen::Index>(unknowns()));
  int total = iterations;
  for (int k = 1; k <= options_.source_steps; ++k) {
    ramp.scale = ctx.scale * static_cast<double>(k) / options_.source_steps;
    if (!newton(x, ramp, iterations, residual)) {
      const std::string node = worst_node(x, ramp);
      throw ConvergenceError("DC operating point did not converge (source stepping stalled at " +
                                 std::to_string(100 * k / options_.source_steps) +
                                 "%); worst residual at node " + node,
                             node);
    }
    total += iterations;
  }
  auto s = unpack(x, total, residual);
  s.source_stepping = true;
  return s;
}

Eigen::VectorXd Engine::pack(const DcSolution& s) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns()));
  for (std::size_t i = 0; i < s.node_names.size(); ++i) {
    auto it = node_index_.find(s.node_names[i]);
    if (it != node_index_.end()) x[it->second] = s.voltages[i];
  }
  for (std::size_t i = 0; i < s.source_ids.size(); ++i) {
    auto it = std::find(source_ids_.begin(), source_ids_.end(), s.source_ids[i]);
    if (it != source_ids_.end())
      x[static_cast<Eigen::Index>(node_names_.size() + (it - source_ids_.begin()))] =
          s.source_currents[i];
  }
  return x;
}

DcSolution Engine::unpack(const Eigen::VectorXd& x, int iterations, double residual) const {
  DcSolution s;
  s.node_names = node_names_;
  s.source_ids = source_ids_;
  const auto n_nodes = static_cast<Eigen::Index>(node_names_.size());
  s.voltages.assign(x.data(), x.data() + n_nodes);
  s.source_currents.assign(x.data() + n_nodes, x.data() + x.size());
  s.iterations = iterations;
  s.max_residual = residual;
  return s;
}

DcSolution Engine::solve_dc(const std::map<std::string, double>& guess) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns()));
  for (const auto& [name, value] : guess) {
    auto it = node_index_.find(name);
    if (it != node_index_.end()) x[it->second] = value;
  }
  return solve_with_fallback(x, Context{});
}

DcSolution Engine::solve_dc(const Eigen::VectorXd& guess) const {
  return solve_with_fallback(guess, Context{});
}

std::vector<DcSolution> Engine::sweep(std::string_view source, const std::vector<double>& values,
                                      const std::map<std::string, double>& guess) {
  auto it = std::find_if(sources_.begin(), sources_.end(),
                         [&](const Source& s) { return s.element.id == source; });
  if (it == sources_.end()) throw Error("no source '" + std::string(source) + "' to sweep");
  const auto saved = it->fixed;

  std::vector<DcSolution> out;
  out.reserve(values.size());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns()));
  for (const auto& [name, value] : guess) {
    auto n = node_index_.find(name);
    if (n != node_index_.end()) x[n->second] = value;
  }
  try {
    for (double value : values) {
      set_source_value(source, value);
      try {
        out.push_back(solve_with_fallback(x, Context{}));
      } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string(e.what()) + " at " + std::string(source) + " = " +
                                   format_plain(value),
                               e.node());
      }
      x = pack(out.back());
    }
  } catch (...) {
    set_source_value(source, saved);
    throw;
  }
  set_source_value(source, saved);
  return out;
}

Waveform Engine::transient(const TransientOptions& opts) const {
  if (!(opts.t_stop > 0.0) || !(opts.dt > 0.0))
    throw DomainError("transient needs t_stop > 0 and dt > 0");

  Waveform w;
  for (const auto& s : sources_) {
    const auto& p = s.element.params;
    if (!s.fixed && s.element.kind == SourceKind::Pulse && (opts.dt >= p[3] || opts.dt >= p[4]))
      w.warnings.push_back("dt >= pulse rise/fall time on " + s.element.id);
  }

  // Operating point at t = 0, with any initial conditions forced by sources.
  DcSolution op;
  if (opts.initial_conditions.empty()) {
    op = solve_dc();
  } else {
    Netlist forced = netlist_;
    for (const auto& [node, value] : opts.initial_conditions) {
      if (!node_index_.count(node)) throw Error("initial condition on unknown node '" + node + "'");
      SourceElement ic;
      ic.id = "V__ic_" + node;
      ic.pos = {node};
      ic.neg = {std::string(kGroundName)};
      ic.params = {value};
      forced.add(ic);
    }
    Engine init(forced, tech_, options_);
    std::map<std::string, double> shifts;
    for (const auto& m : mos_) shifts[m.id] = m.vth_shift;
    init.set_vth_shifts(shifts);
    for (const auto& s : sources_) init.set_source_value(s.element.id, s.fixed);
    op = init.solve_dc();
  }
  Eigen::VectorXd x = pack(op);

  check_connectivity(true);
  std::vector<double> v_prev(capacitors_.size()), i_prev(capacitors_.size(), 0.0);
  for (std::size_t k = 0; k < capacitors_.size(); ++k) v_prev[k] = cap_voltage(capacitors_[k], x);

  const auto n_nodes = node_names_.size();
  w.node_names = node_names_;
  w.source_ids = source_ids_;
  w.voltages.assign(n_nodes, {});
  w.currents.assign(source_ids_.size(), {});
  auto record = [&](double t) {
    w.times.push_back(t);
    for (std::size_t i = 0; i < n_nodes; ++i) w.voltages[i].push_back(x[static_cast<Eigen::Index>(i)]);
    for (std::size_t i = 0; i < source_ids_.size(); ++i)
      w.currents[i].push_back(x[static_cast<Eigen::Index>(n_nodes + i)]);
  };
  record(0.0);

  const auto steps = static_cast<long>(std::ceil(opts.t_stop / opts.dt - 1e-9));
  double t_prev = 0.0;
  for (long k = 1; k <= steps; ++k) {
    const double t = std::min(static_cast<double>(k) * opts.dt, opts.t_stop);
    Context ctx;
    ctx.time = t;
    ctx.transient = true;
    ctx.h = t - t_prev;
    // Capacitor currents at t = 0 are not known after a DC or IC solve, so the
    // trapezoidal rule starts from one backward-Euler step.
    const Integrator method = k == 1 ? Integrator::BackwardEuler : opts.method;
    ctx.method = method;
    ctx.cap_v_prev = &v_prev;
    ctx.cap_i_prev = &i_prev;
    int iterations = 0;
    double residual = 0.0;
    Eigen::VectorXd next = x;
    if (!newton(next, ctx, iterations, residual)) {
      const std::string node = worst_node(next, ctx);
      throw ConvergenceError("transient Newton failure at t = " + format_plain(t) +
                                 " s; worst residual at node " + node,
                             node);
    }
    x = next;
    for (std::size_t c = 0; c < capacitors_.size(); ++c) {
      const auto& cap = capacitors_[c];
      const double v = cap_voltage(cap, x);
      const double geq = (method == Integrator::Trapezoidal ? 2.0 : 1.0) * cap.value / ctx.h;
      double i = geq * (v - v_prev[c]);
      if (method == Integrator::Trapezoidal) i -= i_prev[c];
      v_prev[c] = v;
      i_prev[c] = i;
    }
    record(t);
    t_prev = t;
  }
  return w;
}

// ---------------------------------------------------------------------------

DcSolution solve_dc(const Netlist& n, const TechnologyParams& p,
                    const std::map<std::string, double>& guess, const SolverOptions& options) {
  return Engine(n, p, options).solve_dc(guess);
}

std::vector<double> sweep_values(double from, double to, double step) {
  if (!(step > 0.0)) throw DomainError("sweep step must be positive");
  const double span = to - from;
  const auto count = static_cast<long>(std::floor(std::abs(span) / step + 1e-9));
  const double dir = span < 0.0 ? -1.0 : 1.0;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count) + 2);
  for (long i = 0; i <= count; ++i) values.push_back(from + dir * static_cast<double>(i) * step);
  if (std::abs(values.back() - to) > 1e-12 * std::max(1.0, std::abs(to))) {
    values.push_back(to);
  } else {
    values.back() = to;
  }
  return values;
}

TransferCurve dc_sweep(const Netlist& n, const TechnologyParams& p, std::string_view source,
                       std::string_view probe, double from, double to, double step,
                       const SolverOptions& options) {
  Engine engine(n, p, options);
  auto values = sweep_values(from, to, step);
  auto solutions = engine.sweep(source, values);
  TransferCurve curve;
  curve.input = values;
  for (const auto& s : solutions) curve.output.push_back(s.voltage(probe));
  return curve;
}

Waveform transient(const Netlist& n, const TechnologyParams& p, const TransientOptions& opts,
                   const SolverOptions& options) {
  return Engine(n, p, options).transient(opts);
}

// ---------------------------------------------------------------------------
// CSV

void write_csv(std::ostream& out, const std::string& x_name, const std::vector<double>& x,
               const std::vector<std::string>& names,
               const std::vector<const std::vector<double>*>& columns) {
  out << x_name;
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << format_plain(x[i]);
    for (const auto* c : columns) out << ',' << format_plain((*c)[i]);
    out << '\n';
  }
}

void write_waveform_csv(std::ostream& out, const Waveform& w,
                        const std::vector<std::string>& probes) {
  const auto& names = probes.empty() ? w.node_names : probes;
  std::vector<const std::vector<double>*> cols;
  for (const auto& n : names) cols.push_back(&w.node(n));
  write_csv(out, "time", w.times, names, cols);
}

Waveform read_waveform_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    return cells;
  };
  Waveform w;
  std::string line;
  if (!std::getline(in, line)) throw Error("empty waveform CSV");
  auto header = split(line);
  if (header.size() < 2) throw Error("waveform CSV needs a time column and at least one signal");
  w.node_names.assign(header.begin() + 1, header.end());
  w.voltages.assign(w.node_names.size(), {});
  for (std::size_t row = 2; std::getline(in, line); ++row) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line);
    if (cells.size() != header.size())
      throw Error("waveform CSV row " + std::to_string(row) + " has the wrong column count");
    try {
      w.times.push_back(parse_value(cells[0]));
      for (std::size_t i = 1; i < cells.size(); ++i) w.voltages[i - 1].push_back(parse_value(cells[i]));
    } catch (const std::invalid_argument&) {
      throw Error("waveform CSV row " + std::to_string(row) + " has a bad number");
    }
  }
  return w;
}

}  // namespace sramwb
