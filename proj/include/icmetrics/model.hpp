#pragma once

// Shared domain types. Everything here is a plain value type; once built a
// snapshot is treated as read-only and may be shared across threads.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "icmetrics/error.hpp"

namespace icm {

class InvalidCoordinate : public Error {
 public:
  using Error::Error;
};

// Version-blind identity of a project: (group, artifact).
class ProjectCoordinate {
 public:
  ProjectCoordinate(std::string group, std::string artifact)
      : group_(std::move(group)), artifact_(std::move(artifact)) {
    check_part(group_, "group");
    check_part(artifact_, "artifact");
  }

  // Parses the `group:artifact` key form used in releases.csv.
  static ProjectCoordinate from_key(std::string_view key) {
    auto colon = key.find(':');
    if (colon == std::string_view::npos || key.find(':', colon + 1) != std::string_view::npos)
      throw InvalidCoordinate("coordinate key '" + std::string(key) +
                              "' is not of the form group:artifact");
    return {std::string(key.substr(0, colon)), std::string(key.substr(colon + 1))};
  }

  const std::string& group() const noexcept { return group_; }
  const std::string& artifact() const noexcept { return artifact_; }
  std::string key() const { return group_ + ":" + artifact_; }

  friend auto operator<=>(const ProjectCoordinate&, const ProjectCoordinate&) = default;
  friend bool operator==(const ProjectCoordinate&, const ProjectCoordinate&) = default;

  static bool valid_part(std::string_view s) {
    return !s.empty() && std::none_of(s.begin(), s.end(), [](unsigned char c) {
      return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    });
  }

 private:
  static void check_part(const std::string& s, const char* which) {
    if (!valid_part(s))
      throw InvalidCoordinate(std::string("coordinate ") + which + " '" + s +
                              "' must be non-empty and contain no whitespace");
  }

  std::string group_;
  std::string artifact_;
};

struct DependencyDecl {
  ProjectCoordinate target;
  std::optional<std::string> version_text;  // verbatim, never resolved
  std::optional<std::string> scope;

  friend bool operator==(const DependencyDecl&, const DependencyDecl&) = default;
};

struct ProjectManifest {
  ProjectCoordinate coordinate;
  std::string version_text;
  std::vector<DependencyDecl> declared_dependencies;  // source order, may repeat
  std::set<ProjectCoordinate> submodule_coordinates;

  friend bool operator==(const ProjectManifest&, const ProjectManifest&) = default;
};

// Public method identity -> identities of the methods it calls directly.
// Callees need not be keys themselves.
struct ApiSurface {
  std::map<std::string, std::set<std::string>> methods;

  friend bool operator==(const ApiSurface&, const ApiSurface&) = default;
};

struct UsageRecord {
  std::set<ProjectCoordinate> referenced_coordinates;

  friend bool operator==(const UsageRecord&, const UsageRecord&) = default;
};

struct ReleaseSnapshot {
  ProjectCoordinate coordinate;
  std::string version_label;
  std::int64_t timestamp = 0;  // UTC seconds
  std::vector<ProjectManifest> manifests;
  std::optional<ApiSurface> api_surface;
  std::optional<UsageRecord> usage;
  std::optional<std::uint64_t> loc;
  std::uint64_t bugs_fixed = 0;

  friend bool operator==(const ReleaseSnapshot&, const ReleaseSnapshot&) = default;
};

// The six interaction metrics plus LOC for one release. Optional members are
// absent (not zero) when their input was not supplied.
struct MetricVector {
  std::uint64_t wmc = 0;
  std::uint64_t dit = 0;
  std::uint64_t noc = 0;
  std::uint64_t cbo = 0;
  std::optional<std::uint64_t> rfc;
  std::optional<std::uint64_t> lcom1;
  std::optional<std::uint64_t> loc;

  friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

// Declaration order is the row order of the combined report table.
enum class Metric { Noc, Dit, Lcom1, Wmc, Rfc, Cbo, Loc };

inline constexpr std::array<Metric, 7> kReportOrder = {
    Metric::Noc, Metric::Dit, Metric::Lcom1, Metric::Wmc,
    Metric::Rfc, Metric::Cbo, Metric::Loc};

inline constexpr std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::Noc: return "IC-NOC";
    case Metric::Dit: return "IC-DIT";
    case Metric::Lcom1: return "IC-LCOM1";
    case Metric::Wmc: return "IC-WMC";
    case Metric::Rfc: return "IC-RFC";
    case Metric::Cbo: return "IC-CBO";
    case Metric::Loc: return "LOC";
  }
  return "?";
}

inline std::optional<std::uint64_t> metric_value(const MetricVector& v, Metric m) {
  switch (m) {
    case Metric::Noc: return v.noc;
    case Metric::Dit: return v.dit;
    case Metric::Lcom1: return v.lcom1;
    case Metric::Wmc: return v.wmc;
    case Metric::Rfc: return v.rfc;
    case Metric::Cbo: return v.cbo;
    case Metric::Loc: return v.loc;
  }
  return std::nullopt;
}

struct Violation {
  std::string field;
  std::string rule;

  std::string to_string() const { return field + ": " + rule; }
  friend bool operator==(const Violation&, const Violation&) = default;
};

// Coordinates reachable from the project coordinate through the manifests'
// submodule declarations (the project itself included).
inline std::set<ProjectCoordinate> submodule_closure(const ReleaseSnapshot& s) {
  std::set<ProjectCoordinate> closure{s.coordinate};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& m : s.manifests) {
      if (!closure.contains(m.coordinate)) continue;
      for (const auto& sub : m.submodule_coordinates)
        grew |= closure.insert(sub).second;
    }
  }
  return closure;
}

inline std::vector<Violation> validate_snapshot(const ReleaseSnapshot& s) {
  std::vector<Violation> out;
  if (s.version_label.empty()) out.push_back({"version_label", "must be non-empty"});
  if (s.manifests.empty()) {
    out.push_back({"manifests", "must contain at least one manifest"});
    return out;
  }
  const auto closure = submodule_closure(s);
  for (std::size_t i = 0; i < s.manifests.size(); ++i) {
    const auto& m = s.manifests[i];
    const std::string field = "manifests[" + std::to_string(i) + "]";
    if (!closure.contains(m.coordinate))
      out.push_back({field + ".coordinate",
                     m.coordinate.key() + " is neither the project coordinate " +
                         s.coordinate.key() + " nor a declared submodule of it"});
    if (m.submodule_coordinates.contains(m.coordinate))
      out.push_back({field + ".submodules", "manifest lists itself as a submodule"});
  }
  return out;
}

}  // namespace icm
