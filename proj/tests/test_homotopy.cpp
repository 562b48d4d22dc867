#include <gtest/gtest.h>

#include "topodef/homotopy.hpp"

using namespace topodef;

namespace {

GroupLabel lookup(const std::string& space, int n) { return classify(parse_space(space), n).group; }

}  // namespace

TEST(ProbeDimension, AllMediaUpToFour) {
  for (int m = 1; m <= 4; ++m)
    for (int d = 0; d < m; ++d) EXPECT_EQ(probe_dimension(m, d), m - d - 1);
  EXPECT_EQ(probe_dimension(3, 0), 2);  // point defect in 3D
  EXPECT_EQ(probe_dimension(3, 1), 1);  // line defect in 3D
  EXPECT_EQ(probe_dimension(2, 0), 1);  // point defect in 2D
  EXPECT_THROW(probe_dimension(3, 3), std::invalid_argument);
  EXPECT_THROW(probe_dimension(2, 5), std::invalid_argument);
  EXPECT_THROW(probe_dimension(3, -1), std::invalid_argument);
}

TEST(Classify, StatedTable) {
  struct Row {
    const char* space;
    int n;
    GroupLabel group;
  };
  const Row rows[] = {
      {"SO3", 1, GroupLabel::Z2},       {"S1", 1, GroupLabel::Z},         {"S2", 2, GroupLabel::Z},
      {"S3", 3, GroupLabel::Z},         {"Sn(4)", 4, GroupLabel::Z},      {"RP2", 1, GroupLabel::Z2},
      {"RP2", 2, GroupLabel::Z},        {"RP3", 3, GroupLabel::Z},        {"RP3", 1, GroupLabel::Z2},
      {"CP1", 2, GroupLabel::Z},        {"SU2modU1", 2, GroupLabel::Z},   {"SU2modSO3", 2, GroupLabel::Z2},
      {"S2", 1, GroupLabel::trivial},   {"S3", 1, GroupLabel::trivial},
  };
  for (const Row& r : rows) {
    const Classification c = classify(parse_space(r.space), r.n);
    EXPECT_EQ(c.group, r.group) << r.space << " " << r.n;
    EXPECT_FALSE(c.relation.empty()) << r.space;
  }
}

TEST(Classify, SpheresAndProjectiveSpacesAreZInTheirOwnDimension) {
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(classify(Space::S(k), k).group, GroupLabel::Z);
  EXPECT_EQ(classify(Space::RP2(), 2).group, GroupLabel::Z);
  EXPECT_EQ(classify(Space::RP3(), 3).group, GroupLabel::Z);
}

TEST(Classify, UnstatedEntriesAreUnknown) {
  EXPECT_EQ(lookup("S2", 3), GroupLabel::unknown);
  EXPECT_EQ(lookup("S1", 2), GroupLabel::unknown);
  EXPECT_EQ(lookup("RP2", 3), GroupLabel::unknown);
  EXPECT_EQ(lookup("SO3", 2), GroupLabel::unknown);
  EXPECT_EQ(lookup("S2", 0), GroupLabel::unknown);
  EXPECT_TRUE(classify(Space::S(2), 5).relation.empty());
}

TEST(Classify, CliExamples) {
  EXPECT_EQ(classify(parse_space("RP2"), probe_dimension(3, 0)).group, GroupLabel::Z);
  EXPECT_EQ(classify(parse_space("SO3"), probe_dimension(3, 1)).group, GroupLabel::Z2);
  EXPECT_EQ(classify(parse_space("S1"), probe_dimension(2, 0)).group, GroupLabel::Z);
}

TEST(ParseSpace, AliasesAndErrors) {
  EXPECT_EQ(to_string(parse_space("SU2/U1")), "SU2modU1");
  EXPECT_EQ(to_string(parse_space("SU2/SO3")), "SU2modSO3");
  EXPECT_EQ(to_string(parse_space("Sn(7)")), "S7");
  EXPECT_EQ(to_string(parse_space(" RP2 ")), "RP2");
  for (const char* bad : {"", "S", "S0", "Sx", "RP4", "Sn()", "S12345"})
    EXPECT_THROW(parse_space(bad), std::invalid_argument) << bad;
}

TEST(Classify, JsonShape) {
  const nlohmann::json j = to_json(classify(Space::RP2(), 1));
  EXPECT_EQ(j["space"], "RP2");
  EXPECT_EQ(j["n"], 1);
  EXPECT_EQ(j["group"], "Z2");
  EXPECT_TRUE(j["source_equation"].is_string());
  EXPECT_TRUE(to_json(classify(Space::S(2), 3))["source_equation"].is_null());
}
