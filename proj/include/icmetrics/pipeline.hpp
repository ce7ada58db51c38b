#pragma once

// Diachronic study: each selected project's metric series is correlated with
// its own per-release bug-fix counts, then all points are pooled.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "icmetrics/depgraph.hpp"
#include "icmetrics/ingest.hpp"
#include "icmetrics/metrics.hpp"
#include "icmetrics/model.hpp"
#include "icmetrics/parallel.hpp"
#include "icmetrics/stats.hpp"

namespace icm {

// ---- selection -------------------------------------------------------------

struct SelectionCriteria {
  std::size_t min_releases = 10;
  // parsed / total >= parse_ratio_num / parse_ratio_den, compared exactly.
  std::uint64_t parse_ratio_num = 4;
  std::uint64_t parse_ratio_den = 5;
};

inline constexpr const char* kRejectMinVersions = "min-versions";
inline constexpr const char* kRejectParseRatio = "parse-ratio";
inline constexpr const char* kRejectZeroBugs = "zero-bugs";

struct Selection {
  std::set<ProjectCoordinate> selected;
  std::map<ProjectCoordinate, std::string> rejected;  // first failing criterion
};

inline std::uint64_t total_bugs(const ProjectReleases& p) {
  std::uint64_t n = 0;
  for (const auto& s : p.snapshots) n += s.bugs_fixed;
  for (const auto& f : p.failed) n += f.bugs_fixed;
  return n;
}

inline std::optional<std::string> rejection_reason(const ProjectReleases& p,
                                                   const SelectionCriteria& c = {}) {
  const std::uint64_t total = p.total_releases();
  const std::uint64_t parsed = p.snapshots.size();
  if (total < c.min_releases) return kRejectMinVersions;
  if (parsed * c.parse_ratio_den < total * c.parse_ratio_num) return kRejectParseRatio;
  if (total_bugs(p) == 0) return kRejectZeroBugs;
  return std::nullopt;
}

inline Selection select_projects(const Corpus& corpus, const SelectionCriteria& c = {}) {
  Selection sel;
  for (const auto& [coord, p] : corpus.projects) {
    if (auto why = rejection_reason(p, c)) sel.rejected.emplace(coord, *why);
    else sel.selected.insert(coord);
  }
  return sel;
}

// ---- series ----------------------------------------------------------------

struct SeriesEntry {
  std::string version_label;
  std::int64_t timestamp = 0;
  std::uint64_t bugs_fixed = 0;
  MetricVector metrics;

  friend bool operator==(const SeriesEntry&, const SeriesEntry&) = default;
};

struct ProjectSeries {
  ProjectCoordinate coordinate;
  std::vector<SeriesEntry> releases;  // ascending (timestamp, version_label)
  std::size_t failed_release_count = 0;

  friend bool operator==(const ProjectSeries&, const ProjectSeries&) = default;
};

struct SeriesOptions {
  std::set<std::string> excluded_scopes = default_excluded_scopes();
  unsigned workers = 1;
};

// Snapshots forming the ecosystem as seen by `release` of `project`: that
// release itself plus, for every other project, its latest snapshot at or
// before the release timestamp (its earliest one if none precede).
inline std::vector<const ReleaseSnapshot*> ecosystem_at(const Corpus& corpus, const ProjectCoordinate& project,
                                                        const ReleaseSnapshot& release) {
  std::vector<const ReleaseSnapshot*> out{&release};
  for (const auto& [coord, p] : corpus.projects) {
    if (coord == project || p.snapshots.empty()) continue;
    auto it = std::upper_bound(p.snapshots.begin(), p.snapshots.end(), release.timestamp,
                               [](std::int64_t t, const ReleaseSnapshot& s) { return t < s.timestamp; });
    out.push_back(it == p.snapshots.begin() ? &p.snapshots.front() : &*std::prev(it));
  }
  return out;
}

struct SeriesBuild {
  std::map<ProjectCoordinate, ProjectSeries> series;
  std::vector<Warning> warnings;
};

// Builds series for `only` (every corpus project when empty). Work is fanned
// out per release; results land in fixed slots, so output does not depend on
// the worker count.
inline SeriesBuild build_series(const Corpus& corpus, const SeriesOptions& opt = {},
                                const std::set<ProjectCoordinate>& only = {}) {
  struct Task {
    const ProjectReleases* project;
    const ReleaseSnapshot* release;
  };
  std::vector<Task> tasks;
  for (const auto& [coord, p] : corpus.projects) {
    if (!only.empty() && !only.contains(coord)) continue;
    for (const auto& s : p.snapshots) tasks.push_back({&p, &s});
  }

  struct Slot {
    std::optional<MetricVector> vector;
    std::string error;
  };
  std::vector<Slot> slots(tasks.size());
  parallel_for(tasks.size(), opt.workers, [&](std::size_t i) {
    const auto& [p, s] = tasks[i];
    try {
      auto graph = EcosystemGraph::build(ecosystem_at(corpus, p->coordinate, *s), opt.excluded_scopes);
      slots[i].vector = compute_vector(graph, *s, opt.excluded_scopes);
    } catch (const Error& e) {
      slots[i].error = e.what();
    }
  });

  SeriesBuild out;
  for (const auto& [coord, p] : corpus.projects) {
    if (!only.empty() && !only.contains(coord)) continue;
    out.series.emplace(coord, ProjectSeries{.coordinate = coord, .releases = {},
                                            .failed_release_count = p.failed.size()});
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& [p, s] = tasks[i];
    if (!slots[i].vector) {
      out.warnings.push_back({"metrics", p->coordinate.key() + " " + s->version_label + ": " + slots[i].error});
      continue;
    }
    out.series.at(p->coordinate)
        .releases.push_back({s->version_label, s->timestamp, s->bugs_fixed, *slots[i].vector});
  }
  return out;
}

// ---- correlation -----------------------------------------------------------

namespace pipeline_detail {
inline std::vector<SeriesEntry> canonical(const std::vector<SeriesEntry>& rs) {
  auto sorted = rs;
  std::sort(sorted.begin(), sorted.end(), [](const SeriesEntry& a, const SeriesEntry& b) {
    return std::tie(a.timestamp, a.version_label) < std::tie(b.timestamp, b.version_label);
  });
  return sorted;
}
}  // namespace pipeline_detail

// One result per metric (report order) whose value is present in every
// release of the series.
inline std::vector<CorrelationResult> correlate_project(const ProjectSeries& series) {
  if (series.releases.size() < 2)
    throw PreconditionError("correlate_project: " + series.coordinate.key() + " has fewer than 2 releases");
  const auto releases = pipeline_detail::canonical(series.releases);
  std::vector<double> bugs;
  for (const auto& e : releases) bugs.push_back(static_cast<double>(e.bugs_fixed));

  std::vector<CorrelationResult> out;
  for (Metric m : kReportOrder) {
    std::vector<double> xs;
    for (const auto& e : releases) {
      auto v = metric_value(e.metrics, m);
      if (!v) break;
      xs.push_back(static_cast<double>(*v));
    }
    if (xs.size() != releases.size()) continue;
    out.push_back(correlate(m, xs, bugs));
  }
  return out;
}

// Concatenates (metric, bugs) points over all series, skipping releases where
// the metric is absent. Metrics with no points are omitted.
inline std::vector<CorrelationResult> correlate_pooled(std::span<const ProjectSeries> all) {
  std::vector<const ProjectSeries*> ordered;
  for (const auto& s : all) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const ProjectSeries* a, const ProjectSeries* b) { return a->coordinate < b->coordinate; });

  std::vector<CorrelationResult> out;
  for (Metric m : kReportOrder) {
    std::vector<double> xs, ys;
    for (const auto* s : ordered)
      for (const auto& e : pipeline_detail::canonical(s->releases))
        if (auto v = metric_value(e.metrics, m)) {
          xs.push_back(static_cast<double>(*v));
          ys.push_back(static_cast<double>(e.bugs_fixed));
        }
    if (xs.empty()) continue;
    out.push_back(correlate(m, xs, ys));
  }
  return out;
}

// ---- summaries -------------------------------------------------------------

struct MedianVector {
  std::optional<double> wmc, dit, noc, cbo, rfc, lcom1, loc;
};

struct ProjectSummary {
  ProjectCoordinate coordinate;
  std::uint64_t n_releases = 0;    // parsed + failed
  std::uint64_t n_bugs_total = 0;  // over all releases
  double activity = 0;
  std::vector<CorrelationResult> correlations;
  MedianVector medians;
};

inline MedianVector median_vector(const ProjectSeries& series) {
  auto med = [&](Metric m) -> std::optional<double> {
    std::vector<double> vs;
    for (const auto& e : series.releases)
      if (auto v = metric_value(e.metrics, m)) vs.push_back(static_cast<double>(*v));
    if (vs.empty()) return std::nullopt;
    return median(std::move(vs));
  };
  return {med(Metric::Wmc), med(Metric::Dit), med(Metric::Noc), med(Metric::Cbo),
          med(Metric::Rfc), med(Metric::Lcom1), med(Metric::Loc)};
}

inline ProjectSummary summarize(const ProjectReleases& project, const ProjectSeries& series) {
  ProjectSummary s{.coordinate = project.coordinate,
                   .n_releases = project.total_releases(),
                   .n_bugs_total = total_bugs(project)};
  s.activity = activity_ratio(s.n_releases, s.n_bugs_total);
  if (series.releases.size() >= 2) s.correlations = correlate_project(series);
  s.medians = median_vector(series);
  return s;
}

struct ActivityPartition {
  std::vector<ProjectCoordinate> low;  // activity < threshold
  std::vector<ProjectCoordinate> rest;
};

inline ActivityPartition classify_activity(std::span<const ProjectSummary> summaries, double threshold) {
  if (!(threshold > 0.0)) throw PreconditionError("activity threshold must be positive");
  ActivityPartition out;
  for (const auto& s : summaries) (s.activity < threshold ? out.low : out.rest).push_back(s.coordinate);
  std::sort(out.low.begin(), out.low.end());
  std::sort(out.rest.begin(), out.rest.end());
  return out;
}

// ---- end to end ------------------------------------------------------------

struct AnalysisOptions {
  SelectionCriteria criteria;
  SeriesOptions series;
  double activity_threshold = 0.05;
};

struct Analysis {
  Selection selection;
  std::vector<ProjectSeries> series;  // selected projects, by coordinate
  std::vector<ProjectSummary> summaries;
  std::vector<CorrelationResult> pooled;
  ActivityPartition activity;
  std::vector<Warning> warnings;
};

inline Analysis analyze(const Corpus& corpus, const AnalysisOptions& opt = {}) {
  Analysis a;
  a.selection = select_projects(corpus, opt.criteria);
  if (!a.selection.selected.empty()) {
    auto built = build_series(corpus, opt.series, a.selection.selected);
    a.warnings = std::move(built.warnings);
    for (auto& [coord, s] : built.series) {
      a.summaries.push_back(summarize(corpus.projects.at(coord), s));
      a.series.push_back(std::move(s));
    }
  }
  a.pooled = correlate_pooled(a.series);
  a.activity = classify_activity(a.summaries, opt.activity_threshold);
  return a;
}

}  // namespace icm
