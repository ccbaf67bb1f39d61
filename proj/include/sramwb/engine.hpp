// Modified nodal analysis: DC operating point (damped Newton with a
// source-stepping fallback), DC sweeps and fixed-step transient analysis.
//
// Unknowns are the non-ground node voltages followed by the branch currents
// of the independent voltage sources. A source's branch current flows from
// its positive terminal through the source to its negative terminal.
#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sramwb/devices.hpp"
#include "sramwb/netlist.hpp"

namespace sramwb {

struct SolverOptions {
  double abstol = 1e-9;   // A, KCL residual
  double reltol = 1e-3;
  double vntol = 1e-6;    // V
  double max_step = 0.3;  // V per node per Newton iteration
  int max_iterations = 150;
  int source_steps = 100;
  double gmin = 0.0;  // S from every node to ground
};

struct DcSolution {
  std::vector<std::string> node_names;
  std::vector<double> voltages;
  std::vector<std::string> source_ids;
  std::vector<double> source_currents;
  int iterations = 0;
  double max_residual = 0.0;  // A
  bool source_stepping = false;

  double voltage(std::string_view node) const;  // ground reads 0
  double current(std::string_view source) const;
};

struct Waveform {
  std::vector<double> times;
  std::vector<std::string> node_names;
  std::vector<std::vector<double>> voltages;  // [node][sample]
  std::vector<std::string> source_ids;
  std::vector<std::vector<double>> currents;  // [source][sample]
  std::vector<std::string> warnings;

  const std::vector<double>& node(std::string_view name) const;
  std::size_t samples() const { return times.size(); }
};

struct TransferCurve {
  std::vector<double> input;
  std::vector<double> output;
};

enum class Integrator { BackwardEuler, Trapezoidal };

struct TransientOptions {
  double t_stop = 0.0;
  double dt = 0.0;
  Integrator method = Integrator::BackwardEuler;
  // Node voltages forced while computing the t = 0 operating point.
  std::map<std::string, double> initial_conditions;
};

class Engine {
 public:
  Engine(const Netlist& netlist, TechnologyParams tech, SolverOptions options = {});

  const std::vector<std::string>& node_names() const { return node_names_; }
  const std::vector<std::string>& source_ids() const { return source_ids_; }
  std::size_t unknowns() const { return node_names_.size() + source_ids_.size(); }
  const TechnologyParams& tech() const { return tech_; }

  // Per-element threshold shifts (element id -> volts added to V_th0).
  void set_vth_shifts(const std::map<std::string, double>& shifts);
  // Replaces a source's waveform by a constant; nullopt restores it.
  void set_source_value(std::string_view id, std::optional<double> value);

  // DC residual (capacitors open) and, optionally, its Jacobian.
  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd* jacobian) const;

  DcSolution solve_dc(const std::map<std::string, double>& guess = {}) const;
  DcSolution solve_dc(const Eigen::VectorXd& guess) const;

  // One solve per value, each seeded with the previous solution.
  std::vector<DcSolution> sweep(std::string_view source, const std::vector<double>& values,
                                const std::map<std::string, double>& guess = {});

  Waveform transient(const TransientOptions& opts) const;

  Eigen::VectorXd pack(const DcSolution& s) const;
  DcSolution unpack(const Eigen::VectorXd& x, int iterations, double residual) const;

 private:
  struct Mos {
    std::string id;
    int d, g, s, b;
    Polarity polarity;
    double length, width;
    double vth_shift = 0.0;
  };
  struct TwoTerminal {
    std::string id;
    int a, b;
    double value;
  };
  struct Source {
    SourceElement element;
    int pos, neg;
    int branch;  // -1 for current sources
    std::optional<double> fixed;
  };
  struct Context {
    double time = 0.0;
    double scale = 1.0;
    bool transient = false;
    double h = 0.0;
    Integrator method = Integrator::BackwardEuler;
    const std::vector<double>* cap_v_prev = nullptr;
    const std::vector<double>* cap_i_prev = nullptr;
  };

  void assemble(const Eigen::VectorXd& x, const Context& ctx, Eigen::VectorXd& f,
                Eigen::MatrixXd* jacobian) const;
  bool newton(Eigen::VectorXd& x, const Context& ctx, int& iterations, double& residual) const;
  DcSolution solve_with_fallback(const Eigen::VectorXd& guess, const Context& ctx) const;
  void check_connectivity(bool include_capacitors) const;
  std::string worst_node(const Eigen::VectorXd& x, const Context& ctx) const;
  double source_value(const Source& s, const Context& ctx) const;
  double cap_voltage(const TwoTerminal& c, const Eigen::VectorXd& x) const;

  Netlist netlist_;
  TechnologyParams tech_;
  SolverOptions options_;
  double v_t_;
  std::vector<std::string> node_names_;
  std::map<std::string, int, std::less<>> node_index_;
  std::vector<std::string> source_ids_;
  std::vector<Mos> mos_;
  std::vector<TwoTerminal> resistors_;
  std::vector<TwoTerminal> capacitors_;
  std::vector<Source> sources_;
};

// Convenience wrappers over a fresh Engine.
DcSolution solve_dc(const Netlist& n, const TechnologyParams& p,
                    const std::map<std::string, double>& guess = {},
                    const SolverOptions& options = {});

// from -> to inclusive in increments of step (sign taken from to - from).
std::vector<double> sweep_values(double from, double to, double step);

TransferCurve dc_sweep(const Netlist& n, const TechnologyParams& p, std::string_view source,
                       std::string_view probe, double from, double to, double step,
                       const SolverOptions& options = {});

Waveform transient(const Netlist& n, const TechnologyParams& p, const TransientOptions& opts,
                   const SolverOptions& options = {});

// CSV: header row, first column x, one column per signal.
void write_csv(std::ostream& out, const std::string& x_name, const std::vector<double>& x,
               const std::vector<std::string>& names,
               const std::vector<const std::vector<double>*>& columns);
void write_waveform_csv(std::ostream& out, const Waveform& w,
                        const std::vector<std::string>& probes = {});
// Reads a CSV written by write_waveform_csv (first column time).
Waveform read_waveform_csv(std::istream& in);

}  // namespace sramwb
