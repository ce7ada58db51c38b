#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "icmetrics/pom.hpp"
#include "icmetrics/xml.hpp"
#include "support.hpp"

using namespace icm;
using icm::testing::coord;

namespace {

std::string fixture(const std::string& name) {
  return icm::testing::read_file(std::filesystem::path(ICM_FIXTURE_DIR) / "pom" / name);
}

PomError pom_error(const std::string& text) {
  try {
    parse_pom(text);
  } catch (const PomError& e) {
    return e;
  }
  ADD_FAILURE() << "expected PomError";
  return PomError(PomErrorKind::NotAPom, "none");
}

}  // namespace

TEST(Xml, ParsesNestedElementsAttributesAndEntities) {
  auto root = xml::parse(
      "<?xml version='1.0'?>\n<!DOCTYPE r>\n<r a=\"1\" b='x &amp; y'>"
      "<c>t&lt;&#65;&#x42;</c><!-- note --><d/><![CDATA[<raw>]]></r>");
  EXPECT_EQ(root->name, "r");
  ASSERT_EQ(root->attributes.size(), 2u);
  EXPECT_EQ(root->attributes[1].second, "x & y");
  ASSERT_EQ(root->children.size(), 2u);
  EXPECT_EQ(root->child("c")->text, "t<AB");
  EXPECT_EQ(root->text, "<raw>");
}

TEST(Xml, ReportsLineAndColumn) {
  try {
    xml::parse("<a>\n  <b>\n</a>");
    FAIL();
  } catch (const XmlError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 1u);
  }
  for (const char* bad : {"", "<a>", "<a></a><b/>", "<a b=1/>", "<a>&bogus;</a>", "<a><!-- x -- y --></a>",
                          "text", "<a b='1' b='2'/>"}) {
    EXPECT_THROW(xml::parse(bad), XmlError) << bad;
  }
}

TEST(ParsePom, Minimal) {
  auto m = parse_pom(fixture("minimal.xml"));
  EXPECT_EQ(m.coordinate, coord("a", "g"));
  EXPECT_EQ(m.version_text, "1.0");
  EXPECT_TRUE(m.declared_dependencies.empty());
  EXPECT_TRUE(m.submodule_coordinates.empty());
}

TEST(ParsePom, MultiDependencyKeepsDocumentOrderAndIgnoresManagedAndPluginDeps) {
  auto m = parse_pom(fixture("multi_dependency.xml"));
  EXPECT_EQ(m.coordinate, coord("app", "org.example"));
  EXPECT_EQ(m.version_text, "2.3.1");
  ASSERT_EQ(m.declared_dependencies.size(), 2u);
  const auto& d1 = m.declared_dependencies[0];
  const auto& d2 = m.declared_dependencies[1];
  EXPECT_EQ(d1.target, coord("d1", "o1"));
  EXPECT_EQ(d1.version_text, "1.2");
  EXPECT_FALSE(d1.scope);
  EXPECT_EQ(d2.target, coord("d2", "o2"));
  EXPECT_EQ(d2.version_text, "[3.0,4.0)");
  EXPECT_EQ(d2.scope, "test");
}

TEST(ParsePom, PropertyInterpolation) {
  auto m = parse_pom(fixture("property_interpolated.xml"));
  ASSERT_EQ(m.declared_dependencies.size(), 3u);
  EXPECT_EQ(m.declared_dependencies[0].version_text, "2.1");
  EXPECT_EQ(m.declared_dependencies[1].target, coord("sibling", "g"));
  EXPECT_EQ(m.declared_dependencies[1].version_text, "1.0");
  EXPECT_EQ(m.declared_dependencies[2].version_text, "2.1-SNAPSHOT");
}

TEST(ParsePom, ParentSuppliesGroupAndVersionAndModulesResolveToOwnGroup) {
  auto m = parse_pom(fixture("parent_fallback.xml"));
  EXPECT_EQ(m.coordinate, coord("commons-codec", "org.apache.commons"));
  EXPECT_EQ(m.version_text, "47");
  EXPECT_EQ(m.submodule_coordinates,
            (std::set<ProjectCoordinate>{coord("codec-core", "org.apache.commons"),
                                         coord("codec-tools", "org.apache.commons")}));
  ASSERT_EQ(m.declared_dependencies.size(), 1u);
  EXPECT_FALSE(m.declared_dependencies[0].version_text);
}

TEST(ParsePom, MalformedXmlCarriesPosition) {
  auto e = pom_error(fixture("malformed.xml"));
  EXPECT_EQ(e.kind(), PomErrorKind::MalformedXml);
  EXPECT_EQ(e.line(), 4u);
  EXPECT_EQ(e.column(), 15u);
}

TEST(ParsePom, IncompleteCoordinates) {
  EXPECT_EQ(pom_error(fixture("no_group.xml")).kind(), PomErrorKind::IncompleteCoordinates);
  EXPECT_EQ(pom_error(fixture("no_artifact.xml")).kind(), PomErrorKind::IncompleteCoordinates);
  EXPECT_EQ(pom_error("<project><groupId>g</groupId><artifactId>a</artifactId><dependencies>"
                      "<dependency><artifactId>x</artifactId></dependency></dependencies></project>")
                .kind(),
            PomErrorKind::IncompleteCoordinates);
  EXPECT_EQ(pom_error("<project><groupId>g h</groupId><artifactId>a</artifactId></project>").kind(),
            PomErrorKind::IncompleteCoordinates);
}

TEST(ParsePom, UnresolvedPropertyNamesTheKey) {
  auto e = pom_error(fixture("unresolved_property.xml"));
  EXPECT_EQ(e.kind(), PomErrorKind::UnresolvedProperty);
  EXPECT_NE(std::string(e.what()).find("missing.version"), std::string::npos);

  auto cyc = pom_error(
      "<project><groupId>g</groupId><artifactId>a</artifactId><properties><p>${q}</p><q>${p}</q></properties>"
      "<dependencies><dependency><groupId>x</groupId><artifactId>y</artifactId><version>${p}</version>"
      "</dependency></dependencies></project>");
  EXPECT_EQ(cyc.kind(), PomErrorKind::UnresolvedProperty);
}

TEST(ParsePom, NonProjectRoot) {
  EXPECT_EQ(pom_error("<settings/>").kind(), PomErrorKind::NotAPom);
}

TEST(ParsePom, FixtureSuiteIsTotal) {
  // Every fixture parses or raises exactly one classified PomError.
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(ICM_FIXTURE_DIR) / "pom")) {
    const auto text = icm::testing::read_file(entry.path());
    int outcomes = 0;
    try {
      parse_pom(text);
      ++outcomes;
    } catch (const PomError&) {
      ++outcomes;
    }
    EXPECT_EQ(outcomes, 1) << entry.path();
  }
}
