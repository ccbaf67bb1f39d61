#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "sramwb/engine.hpp"
#include "sramwb/errors.hpp"
#include "sramwb/metrics.hpp"

using namespace sramwb;

namespace {

const TechnologyParams kTech = TechnologyParams::defaults();

// PMOS W/L chosen so k'p (W/L)p equals k'n (W/L)n.
const char* kInverter =
    "VDD vdd 0 DC 1.8\n"
    "VIN in 0 DC 0.9\n"
    "MP out in vdd vdd PMOS L=2u W=5u\n"
    "MN out in 0 0 NMOS L=2u W=2u\n";

}  // namespace

TEST(DcSolve, SingleSource) {
  auto s = solve_dc(parse_netlist("V1 a 0 DC 1.8\nR1 a 0 1k\n"), kTech);
  EXPECT_NEAR(s.voltage("a"), 1.8, 1e-12);
  EXPECT_NEAR(s.current("V1"), -1.8e-3, 1e-12);  // branch current flows p -> n inside
  EXPECT_EQ(s.voltage("0"), 0.0);
}

TEST(DcSolve, ResistorDivider) {
  auto s = solve_dc(parse_netlist("V1 top 0 DC 1.8\nR1 top mid 10k\nR2 mid 0 10k\n"), kTech);
  EXPECT_NEAR(s.voltage("mid"), 0.9, 1e-12);
  EXPECT_LT(s.max_residual, 1e-9);
}

TEST(DcSolve, CurrentSource) {
  auto s = solve_dc(parse_netlist("I1 0 a DC 1m\nR1 a 0 1k\n"), kTech);
  EXPECT_NEAR(s.voltage("a"), 1.0, 1e-12);
}

TEST(DcSolve, SymmetricInverterMidpoint) {
  auto s = solve_dc(parse_netlist(kInverter), kTech);
  EXPECT_NEAR(s.voltage("out"), 0.9, 1e-5);
  EXPECT_LT(s.max_residual, 1e-9);
}

TEST(DcSolve, DiodeLoadMatchesBisection) {
  auto s = solve_dc(parse_netlist("V1 vdd 0 DC 1.8\nR1 vdd a 10k\nM1 a a 0 0 NMOS L=2u W=6u\n"),
                    kTech);
  const auto th = ThermalContext::at(kTech.temperature);
  auto imbalance = [&](double v) {
    return (1.8 - v) / 10e3 - mos_current(kTech.nmos, Polarity::Nmos, {v, v, 0.0, 2e-6, 6e-6}, th);
  };
  double lo = 0.0, hi = 1.8;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (imbalance(mid) > 0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(s.voltage("a"), 0.5 * (lo + hi), 1e-6);
}

TEST(DcSolve, GuessSelectsLatchState) {
  const char* latch =
      "VDD vdd 0 DC 1.8\n"
      "MP1 q qb vdd vdd PMOS L=2u W=10.5u\nMN1 q qb 0 0 NMOS L=2u W=6u\n"
      "MP2 qb q vdd vdd PMOS L=2u W=10.5u\nMN2 qb q 0 0 NMOS L=2u W=6u\n";
  auto n = parse_netlist(latch);
  auto high = solve_dc(n, kTech, {{"q", 1.8}, {"qb", 0.0}});
  auto low = solve_dc(n, kTech, {{"q", 0.0}, {"qb", 1.8}});
  EXPECT_GT(high.voltage("q"), 1.7);
  EXPECT_LT(low.voltage("q"), 0.1);
}

TEST(DcSolve, FloatingSubcircuitIsReported) {
  EXPECT_THROW(solve_dc(parse_netlist("V1 a 0 DC 1\nR1 a 0 1k\nR2 b c 1k\n"), kTech),
               FloatingCircuitError);
  // A node reached only through a capacitor has no DC path.
  EXPECT_THROW(solve_dc(parse_netlist("V1 a 0 DC 1\nC1 a b 1p\nR1 b c 1k\n"), kTech),
               FloatingCircuitError);
}

TEST(DcSolve, NonConvergenceNamesNode) {
  SolverOptions o;
  o.max_iterations = 1;
  o.source_steps = 1;
  try {
    solve_dc(parse_netlist(kInverter), kTech, {}, o);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_FALSE(e.node().empty());
    EXPECT_NE(std::string(e.what()).find(e.node()), std::string::npos);
  }
}

TEST(DcSolve, DegenerateElementsAreIgnored) {
  auto s = solve_dc(parse_netlist("V1 a 0 DC 1\nR1 a 0 1k\nM9 ? a ? 0 NMOS L=0u W=0u\n"), kTech);
  EXPECT_NEAR(s.voltage("a"), 1.0, 1e-12);
}

TEST(Jacobian, MatchesFiniteDifferencesOnRandomCircuits) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> node_pick(0, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int c = 0; c < 20; ++c) {
    std::ostringstream net;
    net << "V1 n1 0 DC " << 0.5 + u(rng) << "\n";
    net << "R0 n1 n2 " << 1e3 + 1e4 * u(rng) << "\n";
    for (int k = 0; k < 4; ++k) {
      auto nd = [&] {
        int i = node_pick(rng);
        return i == 0 ? std::string("0") : "n" + std::to_string(i);
      };
      net << "R" << k + 1 << ' ' << "n" << k + 2 << ' ' << nd() << ' ' << 1e3 + 1e5 * u(rng) << "\n";
      net << "M" << k << ' ' << nd() << ' ' << nd() << ' ' << nd() << ' ' << nd() << ' '
          << (u(rng) < 0.5 ? "NMOS" : "PMOS") << " L=2u W=" << 2 + 8 * u(rng) << "u\n";
    }
    Engine e(parse_netlist(net.str()), kTech);
    const auto n = static_cast<Eigen::Index>(e.unknowns());
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.8 * u(rng);
    Eigen::VectorXd f, fp, fm;
    Eigen::MatrixXd jac;
    e.residual(x, f, &jac);
    Eigen::MatrixXd fd(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      Eigen::VectorXd xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      e.residual(xp, fp, nullptr);
      e.residual(xm, fm, nullptr);
      fd.col(j) = (fp - fm) / (2 * h);
    }
    const double scale = jac.cwiseAbs().maxCoeff();
    EXPECT_LE((jac - fd).cwiseAbs().maxCoeff(), 1e-5 * scale) << net.str();
  }
}

TEST(Sweep, InverterIsMonotone) {
  auto c = dc_sweep(parse_netlist(kInverter), kTech, "VIN", "out", 0.0, 1.8, 0.01);
  ASSERT_EQ(c.input.size(), 181u);
  EXPECT_EQ(c.input.front(), 0.0);
  EXPECT_EQ(c.input.back(), 1.8);
  for (std::size_t i = 1; i < c.output.size(); ++i) EXPECT_LE(c.output[i], c.output[i - 1] + 1e-9);
}

TEST(Sweep, SymmetricInverterCrossesOnceAtMidSupply) {
  const double step = 0.005;
  auto c = dc_sweep(parse_netlist(kInverter), kTech, "VIN", "out", 0.0, 1.8, step);
  int crossings = 0;
  double where = 0.0;
  for (std::size_t i = 1; i < c.input.size(); ++i) {
    const double a = c.output[i - 1] - c.input[i - 1], b = c.output[i] - c.input[i];
    if ((a > 0) != (b > 0)) {
      ++crossings;
      where = c.input[i];
    }
  }
  EXPECT_EQ(crossings, 1);
  EXPECT_NEAR(where, 0.9, step + 1e-12);
}

TEST(Sweep, WireIsIdentity) {
  auto c = dc_sweep(parse_netlist("V1 a 0 DC 0\nR1 a 0 1k\n"), kTech, "V1", "a", -1.0, 1.0, 0.25);
  for (std::size_t i = 0; i < c.input.size(); ++i) EXPECT_NEAR(c.output[i], c.input[i], 1e-12);
}

TEST(Sweep, ValuesIncludeEndpointAndRunDownward) {
  auto v = sweep_values(1.8, 0.0, 0.5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), 1.8);
  EXPECT_EQ(v.back(), 0.0);
  EXPECT_THROW(sweep_values(0, 1, 0), DomainError);
}

TEST(Sweep, UnknownSource) {
  Engine e(parse_netlist(kInverter), kTech);
  EXPECT_THROW(e.sweep("VX", {0.0}), Error);
}

namespace {

double rc_error(double dt_fraction, Integrator method) {
  const double r = 1e3, c = 1e-12, tau = r * c;
  auto n = parse_netlist("V1 in 0 DC 1\nR1 in out 1k\nC1 out 0 1p\n");
  TransientOptions o;
  o.t_stop = tau;
  o.dt = tau * dt_fraction;
  o.method = method;
  o.initial_conditions = {{"out", 0.0}};
  auto w = transient(n, kTech, o);
  return std::abs(w.node("out").back() - (1.0 - std::exp(-1.0)));
}

}  // namespace

TEST(Transient, RcStepMatchesExponential) {
  const double expected = 1.0 - std::exp(-1.0);
  EXPECT_LT(rc_error(1e-3, Integrator::BackwardEuler), 0.01 * expected);
  EXPECT_LT(rc_error(1e-3, Integrator::Trapezoidal), 1e-5 * expected);
}

TEST(Transient, BackwardEulerIsFirstOrder) {
  const double e1 = rc_error(1e-2, Integrator::BackwardEuler);
  const double e2 = rc_error(5e-3, Integrator::BackwardEuler);
  EXPECT_GE(std::log2(e1 / e2), 0.9);
}

TEST(Transient, QuiescentCircuitStaysPut) {
  auto n = parse_netlist("V1 a 0 DC 1.8\nR1 a b 10k\nR2 b 0 10k\nC1 b 0 1p\n");
  TransientOptions o;
  o.t_stop = 1e-9;
  o.dt = 1e-11;
  auto w = transient(n, kTech, o);
  EXPECT_EQ(w.times.front(), 0.0);
  for (double v : w.node("b")) EXPECT_NEAR(v, 0.9, 1e-6);
  for (std::size_t i = 1; i < w.times.size(); ++i) EXPECT_GT(w.times[i], w.times[i - 1]);
}

TEST(Transient, ChargeIsConserved) {
  auto n = parse_netlist("C1 a 0 2p\nC2 b 0 1p\nR1 a b 1k\n");
  TransientOptions o;
  o.t_stop = 5e-9;
  o.dt = 1e-11;
  o.initial_conditions = {{"a", 1.0}, {"b", 0.0}};
  auto w = transient(n, kTech, o);
  const auto& a = w.node("a");
  const auto& b = w.node("b");
  const double q0 = 2e-12 * a[0] + 1e-12 * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) {
    const double q = 2e-12 * a[i] + 1e-12 * b[i];
    EXPECT_NEAR(q, q0, 1e-6 * q0);
  }
  EXPECT_NEAR(a.back(), 2.0 / 3.0, 1e-3);
}

TEST(Transient, WarnsWhenStepExceedsEdge) {
  auto n = parse_netlist("V1 a 0 PULSE(0 1 1n 10p 10p 1n 2n)\nR1 a 0 1k\n");
  TransientOptions o;
  o.t_stop = 2e-9;
  o.dt = 50e-12;
  auto w = transient(n, kTech, o);
  ASSERT_EQ(w.warnings.size(), 1u);
  EXPECT_NE(w.warnings[0].find("V1"), std::string::npos);
}

TEST(Transient, InverterDelayGrowsWithLoad) {
  double previous = 0.0;
  for (double load : {50e-15, 100e-15, 200e-15}) {
    std::ostringstream net;
    net << kInverter << "VPULSE drive 0 PULSE(0 1.8 1n 50p 50p 5n 10n)\n"
        << "RIN drive in2 1\n"
        << "MP2 out2 in2 vdd vdd PMOS L=2u W=5u\nMN2 out2 in2 0 0 NMOS L=2u W=2u\n"
        << "CL out2 0 " << load << "\n";
    TransientOptions o;
    o.t_stop = 10e-9;
    o.dt = 5e-12;
    auto w = transient(parse_netlist(net.str()), kTech, o);
    auto d = propagation_delay(w, "in2", "out2", 0.0, 1.8);
    EXPECT_GT(d.t_p, previous);
    previous = d.t_p;
  }
}

TEST(Transient, RejectsBadTiming) {
  auto n = parse_netlist("V1 a 0 DC 1\nR1 a 0 1k\n");
  EXPECT_THROW(transient(n, kTech, {0.0, 1e-12}), DomainError);
  EXPECT_THROW(transient(n, kTech, {1e-9, 0.0}), DomainError);
}

TEST(Csv, WaveformRoundTrip) {
  auto n = parse_netlist("V1 in 0 PWL(0 0 1n 1)\nR1 in out 1k\nC1 out 0 1p\n");
  TransientOptions o;
  o.t_stop = 2e-9;
  o.dt = 1e-10;
  auto w = transient(n, kTech, o);
  std::stringstream csv;
  write_waveform_csv(csv, w, {"in", "out"});
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "time,in,out");
  auto back = read_waveform_csv(csv);
  EXPECT_EQ(back.times, w.times);
  EXPECT_EQ(back.node("out"), w.node("out"));
}

TEST(Csv, MalformedRowsAreRejected) {
  std::stringstream bad("time,a\n0,1\n1\n");
  EXPECT_THROW(read_waveform_csv(bad), Error);
  std::stringstream nan("time,a\n0,x\n");
  EXPECT_THROW(read_waveform_csv(nan), Error);
}
