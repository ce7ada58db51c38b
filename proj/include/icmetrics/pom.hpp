#pragma once

// Maven POM subset reader.
//
// Read: the project coordinate (with <parent> fallback for groupId and
// version), <properties>, <modules> and the direct <dependencies> list.
// Ignored: parent dependency inheritance, <dependencyManagement>, profiles
// and plugin dependencies.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "icmetrics/error.hpp"
#include "icmetrics/model.hpp"
#include "icmetrics/xml.hpp"

namespace icm {

namespace pom_detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::optional<std::string> child_text(const xml::Element* el, std::string_view name) {
  if (!el) return std::nullopt;
  if (const auto* c = el->child(name)) return trim(c->text);
  return std::nullopt;
}

class Interpolator {
 public:
  explicit Interpolator(std::map<std::string, std::string> props) : props_(std::move(props)) {}

  std::string operator()(const std::string& raw, const xml::Element* where) const {
    std::set<std::string> active;
    return expand(raw, where, active);
  }

 private:
  std::string expand(const std::string& raw, const xml::Element* where,
                     std::set<std::string>& active) const {
    std::string out;
    std::size_t i = 0;
    while (i < raw.size()) {
      auto open = raw.find("${", i);
      if (open == std::string::npos) {
        out.append(raw, i);
        break;
      }
      auto close = raw.find('}', open + 2);
      if (close == std::string::npos) {
        out.append(raw, i);  // a lone "${" is literal text
        break;
      }
      out.append(raw, i, open - i);
      std::string key = raw.substr(open + 2, close - open - 2);
      auto it = props_.find(key);
      if (it == props_.end() || active.contains(key)) {
        throw PomError(PomErrorKind::UnresolvedProperty,
                       "${" + key + "}" + (it == props_.end() ? "" : " (cyclic definition)"),
                       where ? where->line : 0, where ? where->column : 0);
      }
      active.insert(key);
      out += expand(it->second, where, active);
      active.erase(key);
      i = close + 1;
    }
    return out;
  }

  std::map<std::string, std::string> props_;
};

inline ProjectCoordinate make_coordinate(const std::string& group, const std::string& artifact,
                                         const xml::Element* where) {
  try {
    return ProjectCoordinate(group, artifact);
  } catch (const InvalidCoordinate& e) {
    throw PomError(PomErrorKind::IncompleteCoordinates, e.what(), where->line, where->column);
  }
}

}  // namespace pom_detail

inline ProjectManifest parse_pom(std::string_view xml_text) {
  using namespace pom_detail;
  std::unique_ptr<xml::Element> root;
  try {
    root = xml::parse(xml_text);
  } catch (const XmlError& e) {
    throw PomError(PomErrorKind::MalformedXml, e.what(), e.line(), e.column());
  }
  if (root->name != "project")
    throw PomError(PomErrorKind::NotAPom, "root element is <" + root->name + ">, expected <project>",
                   root->line, root->column);

  const xml::Element* parent = root->child("parent");
  auto group = child_text(root.get(), "groupId");
  auto artifact = child_text(root.get(), "artifactId");
  auto version = child_text(root.get(), "version");
  auto parent_group = child_text(parent, "groupId");
  auto parent_version = child_text(parent, "version");
  if (!group) group = parent_group;
  if (!version) version = parent_version;

  if (!artifact)
    throw PomError(PomErrorKind::IncompleteCoordinates, "project has no <artifactId>", root->line,
                   root->column);
  if (!group)
    throw PomError(PomErrorKind::IncompleteCoordinates,
                   "project has no <groupId> and no <parent> to inherit one from", root->line,
                   root->column);

  // Built-ins are seeded after user properties so they cannot be shadowed.
  std::map<std::string, std::string> props;
  if (const auto* p = root->child("properties"))
    for (const auto& c : p->children) props[c->name] = trim(c->text);
  props["project.groupId"] = *group;
  props["project.artifactId"] = *artifact;
  props["project.version"] = version.value_or("");
  if (parent_group) props["project.parent.groupId"] = *parent_group;
  if (parent_version) props["project.parent.version"] = *parent_version;
  const Interpolator interpolate(std::move(props));

  ProjectManifest manifest{
      .coordinate = make_coordinate(interpolate(*group, root.get()),
                                    interpolate(*artifact, root.get()), root.get()),
      .version_text = interpolate(version.value_or(""), root.get()),
      .declared_dependencies = {},
      .submodule_coordinates = {},
  };

  if (const auto* deps = root->child("dependencies")) {
    for (const auto* d : deps->children_named("dependency")) {
      auto dg = child_text(d, "groupId");
      auto da = child_text(d, "artifactId");
      if (!dg || !da)
        throw PomError(PomErrorKind::IncompleteCoordinates,
                       std::string("dependency without <") + (dg ? "artifactId" : "groupId") + ">",
                       d->line, d->column);
      DependencyDecl decl{.target = make_coordinate(interpolate(*dg, d), interpolate(*da, d), d),
                          .version_text = std::nullopt,
                          .scope = std::nullopt};
      if (auto v = child_text(d, "version")) decl.version_text = interpolate(*v, d);
      if (auto s = child_text(d, "scope")) decl.scope = interpolate(*s, d);
      manifest.declared_dependencies.push_back(std::move(decl));
    }
  }

  if (const auto* mods = root->child("modules")) {
    for (const auto* m : mods->children_named("module")) {
      std::string path = interpolate(trim(m->text), m);
      while (!path.empty() && (path.back() == '/' || path.back() == '\\')) path.pop_back();
      auto slash = path.find_last_of("/\\");
      std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
      auto coord = make_coordinate(manifest.coordinate.group(), name, m);
      if (coord != manifest.coordinate) manifest.submodule_coordinates.insert(std::move(coord));
    }
  }
  return manifest;
}

}  // namespace icm
