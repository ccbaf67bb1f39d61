#include <gtest/gtest.h>

#include <string>

#include "sramwb/errors.hpp"
#include "sramwb/netlist.hpp"

using namespace sramwb;

namespace {

const std::string kCorpus = SRAMWB_CORPUS_DIR;

int count_mos(const Netlist& n, Polarity pol) {
  int c = 0;
  n.for_each<MosElement>([&](const MosElement& m) { c += m.polarity == pol ? 1 : 0; });
  return c;
}

}  // namespace

TEST(NetlistParse, CapacitorCard) {
  auto n = parse_netlist("Cpar1 1 0 C=97.083f\n.END\n");
  ASSERT_EQ(n.element_count(), 1u);
  const auto& c = std::get<CapElement>(n.entries[0]);
  EXPECT_EQ(c.id, "Cpar1");
  EXPECT_EQ(c.a.name, "1");
  EXPECT_TRUE(c.b.is_ground());
  EXPECT_EQ(c.value, 97.083e-15);
}

TEST(NetlistParse, EndAloneIsEmpty) {
  auto n = parse_netlist(".END\n");
  EXPECT_EQ(n.element_count(), 0u);
  EXPECT_TRUE(n.node_names().empty());
  auto lower = parse_netlist(".end");
  EXPECT_EQ(lower.element_count(), 0u);
}

TEST(NetlistParse, EndOfStreamWithoutEnd) {
  auto n = parse_netlist("R1 a 0 1k\n");
  EXPECT_EQ(n.element_count(), 1u);
}

TEST(NetlistParse, DegenerateMosWithPlaceholders) {
  auto n = parse_netlist("M19 ? 1 ? 1 NMOS L=0u W=0u\n.END\n");
  const auto& m = std::get<MosElement>(n.entries[0]);
  EXPECT_TRUE(m.degenerate());
  int placeholders = 0;
  for (const Node* node : m.terminals()) placeholders += node->is_placeholder() ? 1 : 0;
  EXPECT_EQ(placeholders, 2);
  // Placeholders are not named nodes.
  EXPECT_EQ(n.node_names(), std::vector<std::string>{"1"});
}

TEST(NetlistParse, MosGeometryAndBbox) {
  auto n = parse_netlist(
      "M5 3 4 1 6 PMOS L=2u W=10.5u AD=63p PD=33u AS=143p PS=64u\n"
      "* M5 DRAIN GATE SOURCE BULK (34 31 36 41.5)\n");
  ASSERT_EQ(n.entries.size(), 1u);
  const auto& m = std::get<MosElement>(n.entries[0]);
  EXPECT_EQ(m.polarity, Polarity::Pmos);
  EXPECT_EQ(m.length, 2e-6);
  EXPECT_EQ(m.width, 10.5e-6);
  EXPECT_EQ(*m.drain_area, 63e-12);
  EXPECT_EQ(*m.source_perimeter, 64e-6);
  ASSERT_TRUE(m.bbox.has_value());
  EXPECT_EQ((*m.bbox)[3], 41.5);
  EXPECT_FALSE(m.degenerate());
}

TEST(NetlistParse, BboxForAnotherElementStaysComment) {
  auto n = parse_netlist(
      "M1 a b 0 0 NMOS L=1u W=1u\n"
      "* M2 DRAIN GATE SOURCE BULK (1 2 3 4)\n");
  EXPECT_FALSE(std::get<MosElement>(n.entries[0]).bbox.has_value());
  EXPECT_TRUE(std::holds_alternative<Comment>(n.entries[1]));
}

TEST(NetlistParse, Sources) {
  auto n = parse_netlist(
      "V1 a 0 DC 1.8\n"
      "V2 b 0 PULSE(0 1.8 1n 100p 100p 5n 10n)\n"
      "V3 c 0 PWL(0 0 1n 1 2n 0.5)\n"
      "I1 d 0 1u\n");
  const auto& v1 = std::get<SourceElement>(n.entries[0]);
  EXPECT_EQ(v1.dc_value(), 1.8);
  const auto& v2 = std::get<SourceElement>(n.entries[1]);
  EXPECT_EQ(v2.kind, SourceKind::Pulse);
  EXPECT_EQ(v2.value_at(0.0), 0.0);
  EXPECT_NEAR(v2.value_at(1.05e-9), 0.9, 1e-12);
  EXPECT_EQ(v2.value_at(3e-9), 1.8);
  EXPECT_NEAR(v2.value_at(13e-9), 1.8, 1e-12);  // periodic
  const auto& v3 = std::get<SourceElement>(n.entries[2]);
  EXPECT_NEAR(v3.value_at(1.5e-9), 0.75, 1e-12);
  EXPECT_EQ(v3.value_at(5e-9), 0.5);
  EXPECT_TRUE(std::get<SourceElement>(n.entries[3]).is_current);
}

TEST(NetlistParse, SyntaxErrorsCarryLine) {
  try {
    parse_netlist("* title\nC1 a 0 C=12x\n");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_netlist("M1 a b c NMOS L=1u W=1u\n"), SyntaxError);
  EXPECT_THROW(parse_netlist("M1 a b c d XMOS L=1u W=1u\n"), SyntaxError);
  EXPECT_THROW(parse_netlist("M1 a b c d NMOS L=1u\n"), SyntaxError);
  EXPECT_THROW(parse_netlist("V1 a 0 PULSE(0 1 0 0 1n 1n 2n)\n"), SyntaxError);
  EXPECT_THROW(parse_netlist("V1 a 0 PWL(0 0 1n 1 1n 2)\n"), SyntaxError);
  EXPECT_THROW(parse_netlist(".TRAN 1n 10n\n"), SyntaxError);
  EXPECT_THROW(parse_netlist("X1 a b sub\n"), SyntaxError);
}

TEST(NetlistParse, DuplicateIdIsSemanticError) {
  EXPECT_THROW(parse_netlist("C1 a 0 1f\nC1 b 0 2f\n"), SemanticError);
}

TEST(NetlistParse, MissingFileNamesPath) {
  try {
    parse_netlist_file("/nonexistent/cell.sp");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/cell.sp"), std::string::npos);
  }
}

TEST(NetlistCorpus, SingleCellListing) {
  auto n = parse_netlist_file(kCorpus + "/cell_extracted.sp");
  EXPECT_EQ(n.node_names().size(), 6u);
  EXPECT_EQ(n.element_count(), 10u);
  EXPECT_EQ(count_mos(n, Polarity::Pmos), 2);
  EXPECT_EQ(count_mos(n, Polarity::Nmos), 4);
  EXPECT_EQ(n.declared_nodes, 6);
  EXPECT_EQ(n.declared_elements, 10);
  EXPECT_TRUE(n.warnings.empty());

  auto r = validate(n);
  EXPECT_EQ(r.value("degenerate_elements"), 0.0);
  EXPECT_EQ(r.value("zero_cap_warnings"), 2.0);
  EXPECT_EQ(r.find("declared_nodes")->verdict, Verdict::Pass);
  EXPECT_EQ(r.find("declared_elements")->verdict, Verdict::Pass);
}

TEST(NetlistCorpus, ArrayListing) {
  auto n = parse_netlist_file(kCorpus + "/array_extracted.sp");
  EXPECT_EQ(n.element_count(), 79u);
  EXPECT_EQ(n.declared_elements, 79);
  auto r = validate(n);
  EXPECT_GT(r.value("degenerate_elements"), 0.0);
  EXPECT_GT(r.value("placeholder_nodes"), 0.0);
  // Every card with zero geometry is degenerate.
  n.for_each<MosElement>([](const MosElement& m) {
    if (m.length == 0.0 || m.width == 0.0) EXPECT_TRUE(m.degenerate()) << m.id;
  });
  // Trailer either matches or the mismatch is recorded.
  const bool nodes_match = n.declared_nodes == static_cast<int>(n.node_names().size());
  EXPECT_EQ(nodes_match, n.warnings.empty());
}

TEST(NetlistCorpus, RoundTripIsStable) {
  for (const char* file : {"/cell_extracted.sp", "/array_extracted.sp"}) {
    auto n = parse_netlist_file(kCorpus + file);
    const std::string once = print_netlist(n);
    auto again = parse_netlist(once);
    EXPECT_EQ(again, n) << file;
    EXPECT_EQ(print_netlist(again), once) << file;
  }
}

TEST(NetlistValidate, TrailerMismatchWarns) {
  auto n = parse_netlist("R1 a 0 1k\nR2 a 0 1k\n* Total Nodes: 3\n* Total Elements: 2\n");
  ASSERT_EQ(n.warnings.size(), 1u);
  EXPECT_NE(n.warnings[0].find("count mismatch"), std::string::npos);
  auto r = validate(n);
  EXPECT_EQ(r.find("declared_nodes")->verdict, Verdict::Fail);
  EXPECT_EQ(r.find("declared_elements")->verdict, Verdict::Pass);
}

TEST(NetlistValidate, FloatingNodes) {
  auto n = parse_netlist("R1 a b 1k\nR2 b 0 1k\n");
  EXPECT_EQ(floating_nodes(n), std::vector<std::string>{"a"});
}

TEST(NetlistEdit, AddAndRemove) {
  Netlist n;
  n.add(ResElement{"R1", {"a"}, {"0"}, 1e3});
  EXPECT_THROW(n.add(ResElement{"R1", {"b"}, {"0"}, 1e3}), SemanticError);
  n.add(CapElement{"C1", {"a"}, {"0"}, 1e-15});
  n.remove_if([](const Entry& e) { return std::holds_alternative<ResElement>(e); });
  EXPECT_EQ(n.element_count(), 1u);
  EXPECT_NE(n.find("C1"), nullptr);
  EXPECT_EQ(n.find("R1"), nullptr);
}
