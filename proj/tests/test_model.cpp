#include <gtest/gtest.h>

#include <map>

#include "icmetrics/model.hpp"
#include "support.hpp"

using namespace icm;
using icm::testing::coord;
using icm::testing::manifest;
using icm::testing::snapshot;

TEST(ProjectCoordinate, RejectsEmptyOrWhitespaceParts) {
  EXPECT_THROW(ProjectCoordinate("", "a"), InvalidCoordinate);
  EXPECT_THROW(ProjectCoordinate("g", ""), InvalidCoordinate);
  EXPECT_THROW(ProjectCoordinate("g h", "a"), InvalidCoordinate);
  EXPECT_THROW(ProjectCoordinate("g", "a\t"), InvalidCoordinate);
  EXPECT_NO_THROW(ProjectCoordinate("org.apache", "commons-io"));
}

TEST(ProjectCoordinate, KeyRoundTripAndOrdering) {
  const ProjectCoordinate c("org.x", "lib");
  EXPECT_EQ(c.key(), "org.x:lib");
  EXPECT_EQ(ProjectCoordinate::from_key("org.x:lib"), c);
  EXPECT_THROW(ProjectCoordinate::from_key("nocolon"), InvalidCoordinate);
  EXPECT_LT(coord("b", "a"), coord("a", "b"));
  EXPECT_LT(coord("a", "a"), coord("b", "a"));
}

TEST(ProjectCoordinate, EqualityIsVersionBlind) {
  // Two manifests of the same project at different versions share a coordinate.
  auto m1 = manifest(coord("lib"));
  auto m2 = manifest(coord("lib"));
  m2.version_text = "9.9";
  EXPECT_EQ(m1.coordinate, m2.coordinate);
  std::map<ProjectCoordinate, int> index{{m1.coordinate, 1}};
  EXPECT_TRUE(index.contains(m2.coordinate));
}

TEST(ValidateSnapshot, EmptyManifestsGiveExactlyOneViolation) {
  auto s = snapshot(coord("p"), {});
  auto v = validate_snapshot(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "manifests");
}

TEST(ValidateSnapshot, WellFormedHasNoViolations) {
  auto s = snapshot(coord("p"), {manifest(coord("p"), {coord("x")}, {coord("p-core")}),
                                 manifest(coord("p-core"), {coord("y")}, {coord("p-util")}),
                                 manifest(coord("p-util"))});
  EXPECT_TRUE(validate_snapshot(s).empty());
}

TEST(ValidateSnapshot, ForeignManifestIsReported) {
  auto s = snapshot(coord("p"), {manifest(coord("p")), manifest(coord("stranger"))});
  auto v = validate_snapshot(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "manifests[1].coordinate");

  // Submodule chains only count when they start from a manifest in the closure.
  auto t = snapshot(coord("p"), {manifest(coord("p")), manifest(coord("q"), {}, {coord("r")}), manifest(coord("r"))});
  EXPECT_EQ(validate_snapshot(t).size(), 2u);
}

TEST(ValidateSnapshot, SelfSubmoduleAndEmptyVersion) {
  auto s = snapshot(coord("p"), {manifest(coord("p"), {}, {coord("p")})}, "");
  auto v = validate_snapshot(s);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].field, "version_label");
  EXPECT_EQ(v[1].field, "manifests[0].submodules");
}

TEST(ValidateSnapshot, IsDeterministic) {
  auto s = snapshot(coord("p"), {manifest(coord("a")), manifest(coord("p"), {}, {coord("p")}), manifest(coord("b"))});
  const auto first = validate_snapshot(s);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(validate_snapshot(s), first);
}

TEST(Metric, ReportOrderAndNames) {
  std::vector<std::string> names;
  for (auto m : kReportOrder) names.emplace_back(metric_name(m));
  EXPECT_EQ(names, (std::vector<std::string>{"IC-NOC", "IC-DIT", "IC-LCOM1", "IC-WMC", "IC-RFC", "IC-CBO", "LOC"}));
  MetricVector v{.wmc = 1, .dit = 2, .noc = 3, .cbo = 4, .rfc = std::nullopt, .lcom1 = 6, .loc = 7};
  EXPECT_EQ(metric_value(v, Metric::Noc), 3u);
  EXPECT_FALSE(metric_value(v, Metric::Rfc));
  EXPECT_EQ(metric_value(v, Metric::Loc), 7u);
}
