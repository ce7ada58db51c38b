#pragma once

// snapshot.json reader/writer. Layout:
//
//   {"project": {"group", "artifact"}, "version", "timestamp",
//    "manifests": [{"group", "artifact", "version",
//                   "dependencies": [{"group", "artifact", "version"|null, "scope"|null}],
//                   "submodules": [{"group", "artifact"}]}],
//    "api_surface": {"<method>": ["<callee>", ...]} | null,
//    "usage": [{"group", "artifact"}] | null,
//    "loc": int | null,
//    "bugs_fixed": int            (optional; releases.csv takes precedence)}
//
// Unknown keys are ignored.

#include <cstdint>
#include <string>
#include <string_view>

#include "icmetrics/error.hpp"
#include "icmetrics/model.hpp"
#include "json.hpp"

namespace icm {

class InvalidSnapshot : public Error {
 public:
  explicit InvalidSnapshot(std::vector<Violation> v)
      : Error(describe(v)), violations_(std::move(v)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string describe(const std::vector<Violation>& v) {
    std::string s = "snapshot violates invariants:";
    for (const auto& x : v) s += " [" + x.to_string() + "]";
    return s;
  }

  std::vector<Violation> violations_;
};

namespace snapshot_detail {

using nlohmann::json;

inline const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing required key");
  return *it;
}

inline const json* optional_member(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

inline std::int64_t as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline std::uint64_t as_count(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (!j.is_number_integer()) throw SchemaError(path, "expected a non-negative integer");
  auto v = j.get<std::int64_t>();
  if (v < 0) throw SchemaError(path, "must be non-negative, got " + std::to_string(v));
  return static_cast<std::uint64_t>(v);
}

inline const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

inline ProjectCoordinate coordinate(const json& j, const std::string& path) {
  auto g = as_string(member(j, path, "group"), path + ".group");
  auto a = as_string(member(j, path, "artifact"), path + ".artifact");
  try {
    return ProjectCoordinate(std::move(g), std::move(a));
  } catch (const InvalidCoordinate& e) {
    throw SchemaError(path, e.what());
  }
}

inline std::optional<std::string> nullable_string(const json& obj, const char* key,
                                                   const std::string& path) {
  const json* v = optional_member(obj, key);
  if (!v) return std::nullopt;
  return as_string(*v, path + "." + key);
}

inline json coordinate_json(const ProjectCoordinate& c) {
  return {{"group", c.group()}, {"artifact", c.artifact()}};
}

}  // namespace snapshot_detail

// Parses one release. Throws SchemaError (with the JSON path) on shape
// problems and InvalidSnapshot when validate_snapshot() reports anything.
inline ReleaseSnapshot parse_snapshot_json(std::string_view text) {
  using namespace snapshot_detail;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(".", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError(".", "expected an object");

  ReleaseSnapshot snap{
      .coordinate = coordinate(member(doc, "", "project"), ".project"),
      .version_label = as_string(member(doc, "", "version"), ".version"),
      .timestamp = as_int(member(doc, "", "timestamp"), ".timestamp"),
  };

  const auto& manifests = as_array(member(doc, "", "manifests"), ".manifests");
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    const std::string mp = ".manifests[" + std::to_string(i) + "]";
    const json& m = manifests[i];
    ProjectManifest manifest{
        .coordinate = coordinate(m, mp),
        .version_text = as_string(member(m, mp, "version"), mp + ".version"),
    };
    if (const json* deps = optional_member(m, "dependencies")) {
      as_array(*deps, mp + ".dependencies");
      for (std::size_t k = 0; k < deps->size(); ++k) {
        const std::string dp = mp + ".dependencies[" + std::to_string(k) + "]";
        const json& d = (*deps)[k];
        manifest.declared_dependencies.push_back({.target = coordinate(d, dp),
                                                  .version_text = nullable_string(d, "version", dp),
                                                  .scope = nullable_string(d, "scope", dp)});
      }
    }
    if (const json* subs = optional_member(m, "submodules")) {
      as_array(*subs, mp + ".submodules");
      for (std::size_t k = 0; k < subs->size(); ++k)
        manifest.submodule_coordinates.insert(
            coordinate((*subs)[k], mp + ".submodules[" + std::to_string(k) + "]"));
    }
    snap.manifests.push_back(std::move(manifest));
  }

  if (const json* api = optional_member(doc, "api_surface")) {
    if (!api->is_object()) throw SchemaError(".api_surface", "expected an object or null");
    ApiSurface surface;
    for (const auto& [method, callees] : api->items()) {
      const std::string ap = ".api_surface[\"" + method + "\"]";
      auto& set = surface.methods[method];
      as_array(callees, ap);
      for (std::size_t k = 0; k < callees.size(); ++k)
        set.insert(as_string(callees[k], ap + "[" + std::to_string(k) + "]"));
    }
    snap.api_surface = std::move(surface);
  }

  if (const json* usage = optional_member(doc, "usage")) {
    as_array(*usage, ".usage");
    UsageRecord rec;
    for (std::size_t k = 0; k < usage->size(); ++k)
      rec.referenced_coordinates.insert(coordinate((*usage)[k], ".usage[" + std::to_string(k) + "]"));
    snap.usage = std::move(rec);
  }

  if (const json* loc = optional_member(doc, "loc")) snap.loc = as_count(*loc, ".loc");
  if (const json* bugs = optional_member(doc, "bugs_fixed"))
    snap.bugs_fixed = as_count(*bugs, ".bugs_fixed");

  if (auto violations = validate_snapshot(snap); !violations.empty())
    throw InvalidSnapshot(std::move(violations));
  return snap;
}

inline nlohmann::json snapshot_to_json(const ReleaseSnapshot& s) {
  using namespace snapshot_detail;
  json doc;
  doc["project"] = coordinate_json(s.coordinate);
  doc["version"] = s.version_label;
  doc["timestamp"] = s.timestamp;
  doc["manifests"] = json::array();
  for (const auto& m : s.manifests) {
    json jm = coordinate_json(m.coordinate);
    jm["version"] = m.version_text;
    jm["dependencies"] = json::array();
    for (const auto& d : m.declared_dependencies) {
      json jd = coordinate_json(d.target);
      jd["version"] = d.version_text ? json(*d.version_text) : json(nullptr);
      jd["scope"] = d.scope ? json(*d.scope) : json(nullptr);
      jm["dependencies"].push_back(std::move(jd));
    }
    jm["submodules"] = json::array();
    for (const auto& sub : m.submodule_coordinates) jm["submodules"].push_back(coordinate_json(sub));
    doc["manifests"].push_back(std::move(jm));
  }
  if (s.api_surface) {
    json api = json::object();
    for (const auto& [method, callees] : s.api_surface->methods) api[method] = callees;
    doc["api_surface"] = std::move(api);
  } else {
    doc["api_surface"] = nullptr;
  }
  if (s.usage) {
    doc["usage"] = json::array();
    for (const auto& c : s.usage->referenced_coordinates) doc["usage"].push_back(coordinate_json(c));
  } else {
    doc["usage"] = nullptr;
  }
  doc["loc"] = s.loc ? json(*s.loc) : json(nullptr);
  doc["bugs_fixed"] = s.bugs_fixed;
  return doc;
}

inline std::string encode_snapshot_json(const ReleaseSnapshot& s) {
  return snapshot_to_json(s).dump(2) + "\n";
}

}  // namespace icm
