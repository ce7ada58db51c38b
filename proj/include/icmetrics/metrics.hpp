#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "icmetrics/depgraph.hpp"
#include "icmetrics/model.hpp"

namespace icm {

namespace metrics_detail {
inline void require_corpus(const EcosystemGraph& g, const ProjectCoordinate& p) {
  if (!g.contains(p)) throw GraphError("unknown coordinate " + p.key());
  if (!g.is_corpus_member(p)) throw GraphError(p.key() + " is an external stub, not a corpus project");
}
}  // namespace metrics_detail

// Number of distinct libraries the project depends on directly.
inline std::uint64_t ic_wmc(const EcosystemGraph& g, const ProjectCoordinate& project) {
  metrics_detail::require_corpus(g, project);
  return g.out_degree(project);
}

// Depth of the dependency tree, cycle-safe via the condensation.
inline std::uint64_t ic_dit(const EcosystemGraph& g, const ProjectCoordinate& project) {
  return g.condensation_depth(project);
}

// Number of corpus projects that depend on this one.
inline std::uint64_t ic_noc(const EcosystemGraph& g, const ProjectCoordinate& project) {
  return g.reverse_dependents(project).size();
}

// Number of other projects in a dependency cycle with this one.
inline std::uint64_t ic_cbo(const EcosystemGraph& g, const ProjectCoordinate& project) {
  metrics_detail::require_corpus(g, project);
  return g.scc_size(project) - 1;
}

// |public methods ∪ their direct callees|.
inline std::uint64_t ic_rfc(const ApiSurface& surface) {
  std::set<std::string> reachable;
  for (const auto& [method, callees] : surface.methods) {
    reachable.insert(method);
    reachable.insert(callees.begin(), callees.end());
  }
  return reachable.size();
}

// Declared dependencies the project never references.
inline std::uint64_t ic_lcom1(const std::set<ProjectCoordinate>& manifest_deps, const UsageRecord& usage) {
  std::uint64_t unused = 0;
  for (const auto& d : manifest_deps) unused += !usage.referenced_coordinates.contains(d);
  return unused;
}

inline MetricVector compute_vector(const EcosystemGraph& g, const ReleaseSnapshot& snapshot,
                                   const std::set<std::string>& excluded_scopes = default_excluded_scopes()) {
  const auto& p = snapshot.coordinate;
  MetricVector v{
      .wmc = ic_wmc(g, p),
      .dit = ic_dit(g, p),
      .noc = ic_noc(g, p),
      .cbo = ic_cbo(g, p),
      .rfc = std::nullopt,
      .lcom1 = std::nullopt,
      .loc = snapshot.loc,
  };
  if (snapshot.api_surface) v.rfc = ic_rfc(*snapshot.api_surface);
  if (snapshot.usage) v.lcom1 = ic_lcom1(direct_dependencies(snapshot, excluded_scopes), *snapshot.usage);
  return v;
}

}  // namespace icm
