#pragma once

// Version-collapsed ecosystem dependency graph.
//
// One node per coordinate. Corpus projects own outgoing edges; dependency
// targets outside the corpus become stub leaves. References to another corpus
// project's submodule are redirected to that project.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icmetrics/error.hpp"
#include "icmetrics/model.hpp"

namespace icm {

inline const std::set<std::string>& default_excluded_scopes() {
  static const std::set<std::string> s{"test", "provided"};
  return s;
}

// Every coordinate that belongs to the project itself: the project, each
// manifest, and each declared submodule.
inline std::set<ProjectCoordinate> internal_coordinates(const ReleaseSnapshot& s) {
  auto out = submodule_closure(s);
  for (const auto& m : s.manifests) {
    out.insert(m.coordinate);
    out.insert(m.submodule_coordinates.begin(), m.submodule_coordinates.end());
  }
  return out;
}

// Deduplicated direct dependencies of a release, after removing intra-project
// references and declarations whose scope is excluded. No scope means
// compile scope.
inline std::set<ProjectCoordinate> direct_dependencies(const ReleaseSnapshot& s,
                                                       const std::set<std::string>& excluded_scopes) {
  const auto internal = internal_coordinates(s);
  std::set<ProjectCoordinate> deps;
  for (const auto& m : s.manifests)
    for (const auto& d : m.declared_dependencies) {
      if (d.scope && excluded_scopes.contains(*d.scope)) continue;
      if (internal.contains(d.target)) continue;
      deps.insert(d.target);
    }
  return deps;
}

class EcosystemGraph {
 public:
  using Edge = std::pair<ProjectCoordinate, ProjectCoordinate>;  // dependent -> dependency

  // Throws GraphError if two snapshots share a coordinate.
  static EcosystemGraph build(std::span<const ReleaseSnapshot* const> snapshots,
                              const std::set<std::string>& excluded_scopes = default_excluded_scopes()) {
    std::map<ProjectCoordinate, const ReleaseSnapshot*> by_coord;
    for (const auto* s : snapshots)
      if (!by_coord.emplace(s->coordinate, s).second)
        throw GraphError("duplicate snapshot for " + s->coordinate.key());

    // Submodule coordinate -> owning corpus project. A coordinate that is a
    // corpus project in its own right is never redirected.
    std::map<ProjectCoordinate, ProjectCoordinate> owner;
    for (const auto& [coord, snap] : by_coord)
      for (const auto& c : internal_coordinates(*snap))
        if (!by_coord.contains(c)) owner.try_emplace(c, coord);

    std::map<ProjectCoordinate, std::set<ProjectCoordinate>> adjacency;
    std::set<ProjectCoordinate> all;
    for (const auto& [coord, snap] : by_coord) {
      all.insert(coord);
      auto& out = adjacency[coord];
      for (const auto& d : direct_dependencies(*snap, excluded_scopes)) {
        auto it = owner.find(d);
        const ProjectCoordinate& target = it == owner.end() ? d : it->second;
        if (target == coord) continue;
        out.insert(target);
        all.insert(target);
      }
    }

    EcosystemGraph g;
    g.nodes_.assign(all.begin(), all.end());
    const std::size_t n = g.nodes_.size();
    g.out_.resize(n);
    g.in_.resize(n);
    g.corpus_.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) g.index_.emplace(g.nodes_[i], i);
    for (const auto& [coord, targets] : adjacency) {
      const auto u = g.index_.at(coord);
      g.corpus_[u] = true;
      for (const auto& t : targets) {
        const auto v = g.index_.at(t);
        g.out_[u].push_back(v);
        g.in_[v].push_back(u);
      }
    }
    for (auto& adj : g.in_) std::sort(adj.begin(), adj.end());
    g.compute_sccs();
    return g;
  }

  static EcosystemGraph build(std::span<const ReleaseSnapshot> snapshots,
                              const std::set<std::string>& excluded_scopes = default_excluded_scopes()) {
    std::vector<const ReleaseSnapshot*> ptrs;
    ptrs.reserve(snapshots.size());
    for (const auto& s : snapshots) ptrs.push_back(&s);
    return build(std::span<const ReleaseSnapshot* const>(ptrs), excluded_scopes);
  }

  std::span<const ProjectCoordinate> nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& adj : out_) e += adj.size();
    return e;
  }
  std::size_t scc_count() const { return scc_size_.size(); }

  bool contains(const ProjectCoordinate& c) const { return index_.contains(c); }
  bool is_corpus_member(const ProjectCoordinate& c) const { return corpus_[index_of(c)]; }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t u = 0; u < nodes_.size(); ++u)
      for (auto v : out_[u]) out.emplace_back(nodes_[u], nodes_[v]);
    return out;
  }

  std::vector<ProjectCoordinate> dependencies(const ProjectCoordinate& c) const {
    std::vector<ProjectCoordinate> out;
    for (auto v : out_[index_of(c)]) out.push_back(nodes_[v]);
    return out;
  }

  std::size_t out_degree(const ProjectCoordinate& c) const { return out_[index_of(c)].size(); }

  std::size_t scc_id(const ProjectCoordinate& c) const { return scc_id_[index_of(c)]; }

  std::set<ProjectCoordinate> scc_members(const ProjectCoordinate& c) const {
    const auto id = scc_id_[index_of(c)];
    std::set<ProjectCoordinate> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (scc_id_[i] == id) out.insert(nodes_[i]);
    return out;
  }

  std::size_t scc_size(const ProjectCoordinate& c) const { return scc_size_[scc_id_[index_of(c)]]; }

  // Corpus members with an edge into `c`.
  std::set<ProjectCoordinate> reverse_dependents(const ProjectCoordinate& c) const {
    std::set<ProjectCoordinate> out;
    for (auto u : in_[index_of(c)])
      if (corpus_[u]) out.insert(nodes_[u]);
    return out;
  }

  // Heaviest path in the condensation starting at c's component, where a
  // component weighs its member count; minus one. Equals the longest chain
  // length in edges when the graph is acyclic.
  std::uint64_t condensation_depth(const ProjectCoordinate& c) const {
    return scc_weight_[scc_id_[index_of(c)]] - 1;
  }

  // `dependent,dependency` rows, sorted.
  std::string edge_list_csv() const {
    auto es = edges();
    std::sort(es.begin(), es.end());
    std::string out;
    for (const auto& [a, b] : es) out += a.key() + "," + b.key() + "\n";
    return out;
  }

 private:
  EcosystemGraph() = default;

  std::size_t index_of(const ProjectCoordinate& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) throw GraphError("unknown coordinate " + c.key());
    return it->second;
  }

  // Iterative Tarjan. Components are numbered in completion order, so every
  // component reachable from component k has an id below k.
  void compute_sccs() {
    const std::size_t n = nodes_.size();
    constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next edge)
    scc_id_.assign(n, 0);
    std::size_t counter = 0;

    for (std::size_t root = 0; root < n; ++root) {
      if (index[root] != kUnvisited) continue;
      call.emplace_back(root, 0);
      while (!call.empty()) {
        auto& [v, e] = call.back();
        if (e == 0 && index[v] == kUnvisited) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = true;
        }
        if (e < out_[v].size()) {
          const auto w = out_[v][e++];
          if (index[w] == kUnvisited) {
            call.emplace_back(w, 0);
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
          continue;
        }
        if (low[v] == index[v]) {
          const std::size_t id = scc_size_.size();
          std::size_t size = 0;
          std::size_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            scc_id_[w] = id;
            ++size;
          } while (w != v);
          scc_size_.push_back(size);
        }
        const auto finished = v;
        call.pop_back();
        if (!call.empty()) {
          auto parent = call.back().first;
          low[parent] = std::min(low[parent], low[finished]);
        }
      }
    }

    scc_weight_.assign(scc_size_.size(), 0);
    std::vector<std::vector<std::size_t>> members(scc_size_.size());
    for (std::size_t v = 0; v < n; ++v) members[scc_id_[v]].push_back(v);
    for (std::size_t c = 0; c < scc_size_.size(); ++c) {
      std::uint64_t best = 0;
      for (auto v : members[c])
        for (auto w : out_[v])
          if (scc_id_[w] != c) best = std::max(best, scc_weight_[scc_id_[w]]);
      scc_weight_[c] = scc_size_[c] + best;
    }
  }

  std::vector<ProjectCoordinate> nodes_;
  std::map<ProjectCoordinate, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<bool> corpus_;
  std::vector<std::size_t> scc_id_;
  std::vector<std::size_t> scc_size_;
  std::vector<std::uint64_t> scc_weight_;
};

}  // namespace icm
