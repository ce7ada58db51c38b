#pragma once

// Seeded synthetic ecosystems for validating the correlation pipeline.
//
// Each project's public API, dependency set, usage and size drift from release
// to release. Bug counts follow bugs_t = max(0, round(coupling * rfc_t + e_t))
// with e_t ~ N(0, noise^2), so the planted signal lives in IC-RFC only.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "icmetrics/error.hpp"
#include "icmetrics/ingest.hpp"
#include "icmetrics/metrics.hpp"
#include "icmetrics/model.hpp"
#include "icmetrics/snapshot_json.hpp"

namespace icm {

struct SynthParams {
  std::uint64_t seed = 42;
  std::size_t n_projects = 10;
  std::size_t n_releases = 20;
  double coupling = 2.0;
  double noise = 1.0;
};

struct SynthEcosystem {
  std::vector<std::vector<ReleaseSnapshot>> projects;  // [project][release]
  std::vector<ReleaseHistoryRow> history;
};

namespace synth_detail {

// The standard distributions are implementation-defined; these are not, so a
// seed produces the same corpus with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  bool chance(double p) { return uniform() < p; }

  // Box-Muller; one variate per call.
  double normal(double sigma) {
    double u1;
    do u1 = uniform();
    while (u1 <= 0.0);
    const double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline std::string two_digit(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02zu", prefix, i);
  return buf;
}

inline void toggle(std::set<std::size_t>& s, std::size_t v) {
  if (!s.erase(v)) s.insert(v);
}

}  // namespace synth_detail

inline constexpr std::size_t kSynthExternalLibraries = 20;

inline ProjectCoordinate synth_project(std::size_t i) {
  return {"org.synth", synth_detail::two_digit("proj-", i)};
}

inline SynthEcosystem synth_ecosystem(const SynthParams& p) {
  using namespace synth_detail;
  if (p.n_projects < 2) throw PreconditionError("synth: need at least 2 projects");
  if (p.n_releases < 3) throw PreconditionError("synth: need at least 3 releases");
  if (!(p.noise >= 0.0) || !std::isfinite(p.noise)) throw PreconditionError("synth: noise must be >= 0");
  if (!std::isfinite(p.coupling)) throw PreconditionError("synth: coupling must be finite");

  Rng rng(p.seed);
  SynthEcosystem eco;
  eco.projects.resize(p.n_projects);
  constexpr std::int64_t kEpoch = 1500000000;
  constexpr std::int64_t kReleaseSpacing = 30 * 86400;

  for (std::size_t i = 0; i < p.n_projects; ++i) {
    const ProjectCoordinate coord = synth_project(i);
    const ProjectCoordinate core{coord.group(), coord.artifact() + "-core"};
    const std::string pkg = "org.synth.proj" + two_digit("", i);

    std::int64_t methods = rng.range(5, 20);
    std::set<std::size_t> corpus_deps, external_deps;
    for (std::size_t j = 0; j < i; ++j)
      if (rng.chance(0.3)) corpus_deps.insert(j);
    for (std::int64_t k = rng.range(1, 4); k > 0; --k)
      external_deps.insert(static_cast<std::size_t>(rng.range(0, kSynthExternalLibraries - 1)));

    for (std::size_t t = 0; t < p.n_releases; ++t) {
      if (t > 0) {
        methods = std::max<std::int64_t>(1, methods + rng.range(-2, 6));
        if (rng.chance(0.3)) {
          // Mostly acyclic; an occasional dependency on a later project
          // creates cycles.
          auto j = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(p.n_projects) - 1));
          if (j != i && (j < i || rng.chance(0.2))) toggle(corpus_deps, j);
        }
        if (rng.chance(0.4)) toggle(external_deps, static_cast<std::size_t>(rng.range(0, kSynthExternalLibraries - 1)));
      }

      ApiSurface surface;
      for (std::int64_t m = 0; m < methods; ++m) {
        auto& callees = surface.methods[pkg + ".Api#m" + std::to_string(m) + "(int)"];
        for (std::int64_t c = rng.range(1, 3); c > 0; --c) {
          if (rng.chance(0.7))
            callees.insert(pkg + ".Impl#h" + std::to_string(rng.range(0, methods)) + "()");
          else
            callees.insert("java.lang.String#valueOf(" + std::string(rng.chance(0.5) ? "int" : "long") + ")");
        }
      }

      ProjectManifest root{.coordinate = coord, .version_text = "1." + std::to_string(t) + ".0"};
      root.submodule_coordinates.insert(core);
      ProjectManifest core_manifest{.coordinate = core, .version_text = root.version_text};
      UsageRecord usage;
      for (auto j : corpus_deps) {
        const auto dep = synth_project(j);
        (rng.chance(0.5) ? root : core_manifest).declared_dependencies.push_back({dep, "1.0", std::nullopt});
        if (!rng.chance(0.2)) usage.referenced_coordinates.insert(dep);
      }
      for (auto k : external_deps) {
        const ProjectCoordinate dep{"org.external", two_digit("lib-", k)};
        root.declared_dependencies.push_back({dep, "2.0", "compile"});
        if (rng.chance(0.5)) core_manifest.declared_dependencies.push_back({dep, "2.0", std::nullopt});
        if (!rng.chance(0.2)) usage.referenced_coordinates.insert(dep);
      }
      core_manifest.declared_dependencies.push_back({{"junit", "junit"}, "4.12", "test"});
      core_manifest.declared_dependencies.push_back({coord, root.version_text, std::nullopt});

      ReleaseSnapshot snap{
          .coordinate = coord,
          .version_label = root.version_text,
          .timestamp = kEpoch + static_cast<std::int64_t>(t) * kReleaseSpacing + static_cast<std::int64_t>(i) * 3600,
          .manifests = {std::move(root), std::move(core_manifest)},
          .api_surface = std::move(surface),
          .usage = std::move(usage),
          .loc = static_cast<std::uint64_t>(40 * methods + rng.range(0, 200)),
      };
      const double rfc = static_cast<double>(ic_rfc(*snap.api_surface));
      const double noisy = p.coupling * rfc + rng.normal(p.noise);
      snap.bugs_fixed = static_cast<std::uint64_t>(std::max(0.0, std::round(noisy)));
      eco.history.push_back({coord.key(), snap.version_label, snap.timestamp, snap.bugs_fixed});
      eco.projects[i].push_back(std::move(snap));
    }
  }
  return eco;
}

inline std::string history_csv(const std::vector<ReleaseHistoryRow>& rows) {
  std::string out = "project,version,timestamp,bugs_fixed\n";
  for (const auto& r : rows)
    out += r.project + "," + r.version_label + "," + std::to_string(r.timestamp) + "," +
           std::to_string(r.bugs_fixed) + "\n";
  return out;
}

// Writes <dir>/corpus/<group>__<artifact>/<version>/snapshot.json and
// <dir>/releases.csv.
inline void write_synth_ecosystem(const SynthEcosystem& eco, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  auto write = [](const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Error("cannot write " + path.string());
  };
  for (const auto& releases : eco.projects)
    for (const auto& s : releases) {
      const fs::path rel = dir / "corpus" / (s.coordinate.group() + "__" + s.coordinate.artifact()) / s.version_label;
      fs::create_directories(rel);
      write(rel / "snapshot.json", encode_snapshot_json(s));
    }
  write(dir / "releases.csv", history_csv(eco.history));
}

}  // namespace icm
