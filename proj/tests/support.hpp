#pragma once

// Test-only helpers: temp dirs, fixture builders and brute-force oracles.
// Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "icmetrics/model.hpp"

namespace icm::testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("icm-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline ProjectCoordinate coord(const std::string& artifact, const std::string& group = "g") {
  return {group, artifact};
}

inline ProjectManifest manifest(const ProjectCoordinate& c, std::vector<ProjectCoordinate> deps = {},
                                std::set<ProjectCoordinate> submodules = {}) {
  ProjectManifest m{.coordinate = c, .version_text = "1.0"};
  for (auto& d : deps) m.declared_dependencies.push_back({std::move(d), "1.0", std::nullopt});
  m.submodule_coordinates = std::move(submodules);
  return m;
}

inline ReleaseSnapshot snapshot(const ProjectCoordinate& c, std::vector<ProjectManifest> manifests,
                                std::string version = "1.0", std::int64_t ts = 0) {
  ReleaseSnapshot s{.coordinate = c, .version_label = std::move(version), .timestamp = ts};
  s.manifests = std::move(manifests);
  return s;
}

// Single-manifest snapshot depending on `deps`.
inline ReleaseSnapshot simple(const std::string& artifact, const std::vector<std::string>& deps = {}) {
  std::vector<ProjectCoordinate> ds;
  for (const auto& d : deps) ds.push_back(coord(d));
  return snapshot(coord(artifact), {manifest(coord(artifact), ds)});
}

// ---- graph oracles over adjacency matrices --------------------------------

using Matrix = std::vector<std::vector<bool>>;

// Reflexive-transitive closure, Floyd-Warshall style.
inline Matrix reachability(const Matrix& adj) {
  const std::size_t n = adj.size();
  Matrix r = adj;
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

// Class label per node: smallest index mutually reachable with it.
inline std::vector<std::size_t> mutual_classes(const Matrix& reach) {
  const std::size_t n = reach.size();
  std::vector<std::size_t> cls(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (reach[i][j] && reach[j][i]) {
        cls[i] = j;
        break;
      }
  return cls;
}

// For every node: max over all paths in the condensation from its class of
// the summed class sizes, minus one. Enumerates every path explicitly.
inline std::vector<std::uint64_t> depths_by_enumeration(const Matrix& adj) {
  const auto reach = reachability(adj);
  const auto cls = mutual_classes(reach);
  const std::size_t n = adj.size();
  std::map<std::size_t, std::uint64_t> size;
  for (auto c : cls) ++size[c];
  std::map<std::size_t, std::set<std::size_t>> cadj;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (adj[i][j] && cls[i] != cls[j]) cadj[cls[i]].insert(cls[j]);
  std::uint64_t best = 0;
  std::function<void(std::size_t, std::uint64_t)> walk = [&](std::size_t c, std::uint64_t acc) {
    acc += size[c];
    best = std::max(best, acc);
    for (auto d : cadj[c]) walk(d, acc);
  };
  std::map<std::size_t, std::uint64_t> per_class;
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!per_class.contains(cls[i])) {
      best = 0;
      walk(cls[i], 0);
      per_class[cls[i]] = best - 1;
    }
    out[i] = per_class[cls[i]];
  }
  return out;
}

// A random ecosystem with `corpus` member projects n0..n{k-1} and a few
// external stubs x0..; adj is over that index order (members first).
struct RandomEcosystem {
  std::vector<ProjectCoordinate> nodes;
  std::size_t corpus = 0;
  Matrix adj;
  std::vector<ReleaseSnapshot> snapshots;
};

inline RandomEcosystem random_ecosystem(std::mt19937_64& rng, std::size_t max_corpus = 10,
                                        std::size_t max_external = 4) {
  auto below = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto chance = [&](double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; };
  RandomEcosystem e;
  e.corpus = 1 + below(max_corpus);
  const std::size_t ext = below(max_external + 1);
  for (std::size_t i = 0; i < e.corpus; ++i) e.nodes.push_back(coord("n" + std::to_string(i)));
  for (std::size_t i = 0; i < ext; ++i) e.nodes.push_back(coord("x" + std::to_string(i), "ext"));
  const std::size_t n = e.nodes.size();
  e.adj.assign(n, std::vector<bool>(n, false));
  const double p = 0.5 * static_cast<double>(below(1001)) / 1000.0;  // edge density in [0, 0.5]
  for (std::size_t i = 0; i < e.corpus; ++i) {
    const auto& self = e.nodes[i];
    // Split the declarations over a root manifest and, sometimes, a submodule.
    const bool split = chance(0.3);
    const ProjectCoordinate sub = coord(self.artifact() + "-sub");
    ProjectManifest root{.coordinate = self, .version_text = "1"};
    ProjectManifest child{.coordinate = sub, .version_text = "1"};
    if (split) root.submodule_coordinates.insert(sub);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !chance(p)) continue;
      e.adj[i][j] = true;
      auto& into = split && chance(0.5) ? child : root;
      std::optional<std::string> scope;
      if (chance(0.2)) scope = chance(0.5) ? "compile" : "runtime";
      into.declared_dependencies.push_back({e.nodes[j], "1", scope});
      if (chance(0.15)) (split ? child : root).declared_dependencies.push_back({e.nodes[j], "2", std::nullopt});
    }
    // Noise that must not produce edges: excluded scopes and self references.
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && !e.adj[i][j] && chance(0.1))
        root.declared_dependencies.push_back({e.nodes[j], "1", chance(0.5) ? "test" : "provided"});
    if (chance(0.2)) root.declared_dependencies.push_back({self, "1", std::nullopt});
    if (split && chance(0.3)) root.declared_dependencies.push_back({sub, "1", std::nullopt});
    ReleaseSnapshot s{.coordinate = self, .version_label = "1"};
    s.manifests.push_back(std::move(root));
    if (split) s.manifests.push_back(std::move(child));
    e.snapshots.push_back(std::move(s));
  }
  std::shuffle(e.snapshots.begin(), e.snapshots.end(), rng);
  return e;
}

// ---- statistics oracles ---------------------------------------------------

inline long double pearson_extended(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    long double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

namespace detail {
template <class F>
long double adaptive_simpson(F& f, long double a, long double b, long double fa, long double fm, long double fb,
                             long double whole, long double tol, int depth) {
  const long double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
  const long double flm = f(lm), frm = f(rm);
  const long double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const long double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const long double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15 * tol) return left + right + delta / 15;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace detail

template <class F>
long double integrate(F f, long double a, long double b, long double tol = 1e-16L) {
  const long double fa = f(a), fb = f(b), fm = f((a + b) / 2);
  const long double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return detail::adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Two-tailed Student-t probability by quadrature of the density. With
// x = tan(theta) the tail integral runs over the finite interval
// [atan|t|, pi/2] and the integrand is smooth for df >= 1.
inline long double t_two_tailed_by_quadrature(long double t, long double df) {
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double log_c =
      std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5L * std::log(df * pi);
  auto g = [&](long double theta) -> long double {
    const long double c = std::cos(theta);
    if (c <= 0) return df == 1 ? std::exp(log_c) * 1.0L : 0.0L;
    const long double s = std::sin(theta);
    // f(tan) * sec^2 = C * (1 + tan^2/df)^(-(df+1)/2) / cos^2
    //               = C * df^((df+1)/2) * c^(df-1) / (df c^2 + s^2)^((df+1)/2)
    const long double base = df * c * c + s * s;
    return std::exp(log_c + (df + 1) / 2 * std::log(df) + (df - 1) * std::log(c) -
                    (df + 1) / 2 * std::log(base));
  };
  const long double start = std::atan(std::fabs(t));
  return 2 * integrate(g, start, pi / 2);
}

inline long double p_oracle(long double r, std::size_t n) {
  const long double df = static_cast<long double>(n - 2);
  if (std::fabs(r) >= 1) return 0;
  const long double t = r * std::sqrt(df / (1 - r * r));
  return t_two_tailed_by_quadrature(t, df);
}

}  // namespace icm::testing
