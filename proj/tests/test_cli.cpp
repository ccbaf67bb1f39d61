#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sramwb/cli.hpp"
#include "sramwb/metrics.hpp"
#include "sramwb/units.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = sramwb::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (l == line) return true;
  }
  return false;
}

const std::string kCorpus = SRAMWB_CORPUS_DIR;

}  // namespace

TEST(Cli, Power) {
  auto r = run({"power", "--cl", "35f", "--vdd", "1.8", "--fsw", "100meg"});
  EXPECT_EQ(r.code, 0) << r.err;
  const std::string expected =
      "dynamic_power " + sramwb::format_plain(sramwb::dynamic_power(35e-15, 1.8, 100e6)) + " W";
  EXPECT_TRUE(has_line(r.out, expected)) << r.out;
  EXPECT_EQ(r.out.rfind("# sramwb power", 0), 0u) << r.out;
}

TEST(Cli, ParseCorpus) {
  auto r = run({"parse", kCorpus + "/cell_extracted.sp"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has_line(r.out, "nodes 6")) << r.out;
  EXPECT_TRUE(has_line(r.out, "elements 10")) << r.out;
  EXPECT_TRUE(has_line(r.out, "round_trip 1 PASS")) << r.out;
}

TEST(Cli, ValidateArray) {
  auto r = run({"validate", kCorpus + "/array_extracted.sp"});
  EXPECT_TRUE(has_line(r.out, "elements 79")) << r.out;
}

TEST(Cli, MissingNetlistIsUsageError) {
  auto r = run({"snm", "--netlist", "missing.sp"});
  EXPECT_EQ(r.code, sramwb::cli::kExitUsage);
  EXPECT_NE(r.err.find("missing.sp"), std::string::npos) << r.err;
}

TEST(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(run({"power", "--bogus", "1"}).code, sramwb::cli::kExitUsage);
  EXPECT_EQ(run({}).code, sramwb::cli::kExitUsage);
  EXPECT_EQ(run({"power", "--cl", "12x"}).code, sramwb::cli::kExitUsage);
}

TEST(Cli, HelpExitsCleanly) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, Ratios) {
  auto r = run({"ratios"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has_line(r.out, "read_stable 0 FAIL")) << r.out;
  EXPECT_TRUE(has_line(r.out, "write_stable 0 FAIL")) << r.out;
}

TEST(Cli, Area) {
  auto r = run({"area", "--rect", "67.5x37", "--rect", "56.5x32.5"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has_line(r.out, "total_area 4333.75 lambda^2")) << r.out;
}

TEST(Cli, DelayFromEdges) {
  auto r = run({"delay", "--tplh", "12.01n", "--tphl", "12.15n"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("t_p 1.208e-8 s"), std::string::npos) << r.out;
}

TEST(Cli, WordlineOffIsAnalysisFailure) {
  auto r = run({"write-margin", "--wl", "0"});
  EXPECT_EQ(r.code, sramwb::cli::kExitAnalysis);
}

TEST(Cli, GenerateThenParse) {
  auto g = run({"generate", "--kind", "cell"});
  EXPECT_EQ(g.code, 0) << g.err;
  EXPECT_NE(g.out.find("MPGL"), std::string::npos);
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::string> args{"snm", "--mode", "hold", "--grid", "0.01"};
  auto a = run(args);
  auto b = run(args);
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, GlobalOptionsApplyInEitherPosition) {
  const std::string cfg = ::testing::TempDir() + "sramwb_tech.cfg";
  {
    std::ofstream f(cfg);
    f << "# slower devices\nvth0 = 0.45\n";
  }
  for (const auto& args : {std::vector<std::string>{"--config", cfg, "ratios"},
                           std::vector<std::string>{"ratios", "--config", cfg}}) {
    auto r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("vth0=0.45"), std::string::npos) << r.out;
  }
  auto m = run({"power", "--cl", "1f", "--vdd", "1", "--fsw", "1", "--model", "subthreshold"});
  EXPECT_NE(m.out.find("model=subthreshold"), std::string::npos) << m.out;
  EXPECT_EQ(run({"--config", "/nonexistent.cfg", "ratios"}).code, sramwb::cli::kExitUsage);
}
