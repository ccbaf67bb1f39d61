#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sramwb/errors.hpp"
#include "sramwb/metrics.hpp"
#include "sramwb/units.hpp"

using namespace sramwb;

TEST(Power, HandArithmetic) {
  EXPECT_NEAR(dynamic_power(10e-15, 1.0, 1e9), 1.0e-5, 1e-20);
  EXPECT_EQ(dynamic_power(35e-15, 1.8, 0.0), 0.0);
  // C V^2 f for the extracted load; see the README on the published figure.
  EXPECT_NEAR(dynamic_power(35e-15, 1.8, 100e6), 35e-15 * 1.8 * 1.8 * 100e6, 1e-20);
  EXPECT_THROW(dynamic_power(-1e-15, 1.0, 1.0), DomainError);
}

TEST(Power, LinearInLoadAndFrequencyQuadraticInSupply) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double c = u(rng) * 1e-15, v = u(rng) / 5, f = u(rng) * 1e8, k = u(rng);
    const double base = dynamic_power(c, v, f);
    EXPECT_NEAR(dynamic_power(k * c, v, f), k * base, 1e-12 * k * base);
    EXPECT_NEAR(dynamic_power(c, v, k * f), k * base, 1e-12 * k * base);
    EXPECT_NEAR(dynamic_power(c, k * v, f), k * k * base, 1e-12 * k * k * base);
  }
}

TEST(Delay, EdgeArithmetic) {
  auto a = DelayMeasurement::from_edges(12.01e-9, 12.15e-9);
  EXPECT_NEAR(a.t_p, 12.08e-9, 1e-21);
  EXPECT_EQ(format_value(a.t_p), "12.08n");
  auto b = DelayMeasurement::from_edges(11.89e-9, 12.09e-9);
  EXPECT_NEAR(b.t_p, 11.99e-9, 1e-21);
  EXPECT_EQ(format_value(b.t_p), "11.99n");
  EXPECT_EQ(DelayMeasurement::from_edges(3e-9, 3e-9).t_p, 3e-9);
}

namespace {

// Input pulses high at t = 1 ns and low at t = 5 ns; the output is an
// inverted copy delayed by `lh` on its rising edge and `hl` on its falling edge.
Waveform synthetic(double shift, double lh, double hl) {
  Waveform w;
  w.node_names = {"in", "out"};
  w.voltages.resize(2);
  auto ramp = [](double t, double t0, double rise) {
    return std::clamp((t - t0) / rise, 0.0, 1.0);
  };
  for (int k = 0; k <= 1000; ++k) {
    const double t = k * 1e-11;
    w.times.push_back(t + shift);
    const double in = 1.8 * (ramp(t, 1e-9, 1e-10) - ramp(t, 5e-9, 1e-10));
    const double out = 1.8 * (1.0 - ramp(t, 1e-9 + hl, 2e-10) + ramp(t, 5e-9 + lh, 2e-10));
    w.voltages[0].push_back(in);
    w.voltages[1].push_back(out);
  }
  return w;
}

}  // namespace

TEST(Delay, MeasuredFromWaveform) {
  auto d = propagation_delay(synthetic(0.0, 0.4e-9, 0.3e-9), "in", "out", 0.0, 1.8);
  EXPECT_NEAR(d.t_phl, 0.3e-9 + 0.5e-10, 1e-15);
  EXPECT_NEAR(d.t_plh, 0.4e-9 + 0.5e-10, 1e-15);
  EXPECT_NEAR(d.t_p, 0.5 * (d.t_plh + d.t_phl), 1e-21);
  EXPECT_EQ(d.threshold, 0.9);
}

TEST(Delay, InvariantUnderTimeShift) {
  auto a = propagation_delay(synthetic(0.0, 0.4e-9, 0.3e-9), "in", "out", 0.0, 1.8);
  auto b = propagation_delay(synthetic(7.3e-9, 0.4e-9, 0.3e-9), "in", "out", 0.0, 1.8);
  EXPECT_NEAR(a.t_plh, b.t_plh, 1e-18);
  EXPECT_NEAR(a.t_phl, b.t_phl, 1e-18);
}

TEST(Delay, MissingTransitionNamesNode) {
  Waveform w;
  w.times = {0, 1e-9, 2e-9};
  w.node_names = {"in", "flat"};
  w.voltages = {{0, 1.8, 1.8}, {1.8, 1.8, 1.8}};
  try {
    propagation_delay(w, "in", "flat", 0.0, 1.8);
    FAIL();
  } catch (const MeasurementError& e) {
    EXPECT_NE(std::string(e.what()).find("flat"), std::string::npos);
  }
}

TEST(Delay, TransitionTimes) {
  auto tt = transition_time(synthetic(0.0, 0.4e-9, 0.3e-9), "out", 0.0, 1.8);
  EXPECT_NEAR(tt.rise, 0.8 * 2e-10, 1e-15);
  EXPECT_NEAR(tt.fall, 0.8 * 2e-10, 1e-15);
}

TEST(Bitline, Delay) {
  EXPECT_NEAR(bitline_delay(100e-15, 0.1, 10e-6), 1e-9, 1e-21);
  EXPECT_EQ(bitline_delay(100e-15, 0.0, 10e-6), 0.0);
  EXPECT_NEAR(bitline_delay(200e-15, 0.1, 10e-6), 2 * bitline_delay(100e-15, 0.1, 10e-6), 1e-21);
  EXPECT_THROW(bitline_delay(100e-15, 0.1, 0.0), DomainError);
}

namespace {

SidePair same(double w, double l) { return {{w, l}, {w, l}}; }

}  // namespace

TEST(Ratios, CellGeometry) {
  auto r = check_ratios(same(6, 2), same(10.5, 2), same(10.5, 2.5));
  EXPECT_NEAR(r.pr_left, 1.25, 1e-9);
  EXPECT_NEAR(r.pr_right, 1.25, 1e-9);
  EXPECT_NEAR(r.cr_left, 5.0 / 7.0, 1e-12);
  EXPECT_NEAR(std::round(r.cr_left * 1000) / 1000, 0.714, 1e-12);
  EXPECT_FALSE(r.read_stable);
  EXPECT_FALSE(r.write_stable);
}

TEST(Ratios, StrictBoundary) {
  auto r = check_ratios(same(1, 1), same(1, 1), same(1, 1));
  EXPECT_EQ(r.cr_left, 1.0);
  EXPECT_FALSE(r.read_stable);
  EXPECT_FALSE(r.write_stable);
}

TEST(Ratios, StableDesignAndSideMismatch) {
  auto ok = check_ratios(same(4, 1), same(1, 1), same(2, 1));
  EXPECT_TRUE(ok.read_stable);
  EXPECT_TRUE(ok.write_stable);
  auto skew = check_ratios({{4, 1}, {4.1, 1}}, same(1, 1), same(2, 1));
  EXPECT_FALSE(skew.read_stable);
  EXPECT_TRUE(skew.write_stable);
}

TEST(Ratios, ScalingOneDeviceKeepsVerdicts) {
  auto a = check_ratios(same(4, 1), same(1, 1), same(2, 1));
  auto b = check_ratios({{4, 1}, {12, 3}}, same(1, 1), {{2, 1}, {0.2, 0.1}});
  EXPECT_EQ(a.read_stable, b.read_stable);
  EXPECT_EQ(a.write_stable, b.write_stable);
  EXPECT_THROW(check_ratios(same(0, 1), same(1, 1), same(1, 1)), DomainError);
}

TEST(Area, Rectangles) {
  auto r = area_report({{67.5, 37.0}, {56.5, 32.5}});
  ASSERT_EQ(r.areas.size(), 2u);
  EXPECT_EQ(r.areas[0], 2497.5);
  EXPECT_EQ(r.areas[1], 1836.25);
  EXPECT_EQ(r.total, 4333.75);
  EXPECT_EQ(area_report({}).total, 0.0);
}
