#pragma once

// Subcommand implementations behind the `icmetrics` CLI. Diagnostics go to
// `diag` as `error: <kind>: ...` / `warning: <kind>: ...` lines; data goes to
// files (or `out` where noted).

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "icmetrics/depgraph.hpp"
#include "icmetrics/ingest.hpp"
#include "icmetrics/parallel.hpp"
#include "icmetrics/pipeline.hpp"
#include "icmetrics/report.hpp"
#include "icmetrics/synth.hpp"

namespace icm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> history;
  std::optional<std::filesystem::path> out;
  std::set<std::string> excluded_scopes = default_excluded_scopes();
  std::set<std::string> loc_extensions{".java"};
  double activity_threshold = 0.05;
  unsigned workers = default_worker_count();
  bool human = false;
  std::optional<std::filesystem::path> graph_dump;
  SynthParams synth;
};

namespace commands_detail {

namespace fs = std::filesystem;

struct Fatal {
  std::string kind;
  std::string message;
};

inline void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw Fatal{"output", "cannot write " + p.string()};
}

inline void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Fatal{"output", "cannot create output directory " + dir.string()};
}

inline std::string read_text(const fs::path& p, const char* what) {
  auto text = ingest_detail::read_file(p);
  if (!text) throw Fatal{"input", std::string("cannot read ") + what + " " + p.string()};
  return *text;
}

inline Corpus load_inputs(const RunConfig& cfg, bool history_required) {
  std::vector<ReleaseHistoryRow> history;
  if (cfg.history) {
    try {
      history = load_release_history(read_text(*cfg.history, "history file"));
    } catch (const Error& e) {
      throw Fatal{"history", e.what()};
    }
  } else if (history_required) {
    throw Fatal{"input", "--history is required"};
  }
  if (!fs::is_directory(cfg.corpus)) throw Fatal{"input", "corpus directory " + cfg.corpus.string() + " not found"};
  try {
    return load_corpus(cfg.corpus, history, {.loc_extensions = cfg.loc_extensions, .workers = cfg.workers});
  } catch (const Error& e) {
    throw Fatal{"corpus", e.what()};
  }
}

inline void print_warnings(std::ostream& diag, const std::vector<Warning>& ws) {
  for (const auto& w : ws) diag << w.to_string() << "\n";
}

// Runs a subcommand body with a buffered diagnostic stream, so that on
// failure the error line precedes any warnings already produced.
template <class Body>
int guarded(std::ostream& diag, Body&& body) {
  std::ostringstream buffered;
  auto fail = [&](const std::string& line, int code) {
    diag << line << "\n" << buffered.str();
    return code;
  };
  try {
    int code = body(static_cast<std::ostream&>(buffered));
    diag << buffered.str();
    return code;
  } catch (const Fatal& f) {
    return fail("error: " + f.kind + ": " + f.message, kExitInputError);
  } catch (const PreconditionError& e) {
    return fail(std::string("error: usage: ") + e.what(), kExitUsage);
  } catch (const Error& e) {
    return fail(std::string("error: internal: ") + e.what(), kExitInputError);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(std::string("error: io: ") + e.what(), kExitInputError);
  }
}

inline std::string human_report(const Analysis& a) {
  std::string out = "Combined correlations\n" + human_correlations(a.pooled) + "\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : a.summaries)
    for (const auto& c : report_detail::in_report_order(s.correlations))
      rows.push_back({s.coordinate.key(), std::string(metric_name(c.metric)), two_decimals(c.r),
                      format_p(c.p_two_tailed), std::to_string(c.n)});
  out += "Per-project correlations\n" +
         render_human_table({"Project", "Metric", "Correlation", "two-tailed p-value", "n"}, rows) + "\n";
  rows.clear();
  auto cell = [](const std::optional<double>& v) { return v ? two_decimals(*v) : std::string(); };
  for (const auto& s : a.summaries)
    rows.push_back({s.coordinate.key(), cell(s.medians.noc), cell(s.medians.dit), cell(s.medians.lcom1),
                    cell(s.medians.wmc), cell(s.medians.rfc), cell(s.medians.cbo), cell(s.medians.loc),
                    std::to_string(s.n_bugs_total), two_decimals(s.activity)});
  out += "Median metric values\n" +
         render_human_table({"Project", "IC-NOC", "IC-DIT", "IC-LCOM1", "IC-WMC", "IC-RFC", "IC-CBO", "LOC",
                             "Bugs", "Activity"},
                            rows);
  return out;
}

}  // namespace commands_detail

// Writes combined.csv, per_project.csv, summaries.csv and one series file per
// selected project.
inline int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  using namespace commands_detail;
  return guarded(diag, [&](std::ostream& warn) {
    if (!cfg.out) throw Fatal{"input", "--out is required"};
    Corpus corpus = load_inputs(cfg, true);
    prepare_out_dir(*cfg.out);
    print_warnings(warn, corpus.warnings);

    AnalysisOptions opt;
    opt.series = {.excluded_scopes = cfg.excluded_scopes, .workers = cfg.workers};
    opt.activity_threshold = cfg.activity_threshold;
    const Analysis a = analyze(corpus, opt);
    print_warnings(warn, a.warnings);
    for (const auto& [coord, why] : a.selection.rejected)
      warn << "warning: rejected: " << coord.key() << ": " << why << "\n";

    write_file(*cfg.out / "combined.csv", emit_combined_table(a.pooled));
    write_file(*cfg.out / "per_project.csv", emit_per_project_table(a.summaries));
    write_file(*cfg.out / "summaries.csv", emit_summaries_table(a.summaries));
    for (const auto& s : a.series) write_file(*cfg.out / series_file_name(s.coordinate), emit_series_table(s));
    if (cfg.human) out << human_report(a);
    return kExitOk;
  });
}

// One JSON line per parsed (project, release), sorted by (coordinate,
// timestamp). Goes to <out>/metrics.jsonl when --out is set, else to `out`.
inline int cmd_metrics(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  using namespace commands_detail;
  return guarded(diag, [&](std::ostream& warn) {
    Corpus corpus = load_inputs(cfg, false);
    print_warnings(warn, corpus.warnings);
    auto built = build_series(corpus, {.excluded_scopes = cfg.excluded_scopes, .workers = cfg.workers});
    print_warnings(warn, built.warnings);
    std::string lines;
    for (const auto& [coord, s] : built.series)
      for (const auto& e : s.releases) lines += emit_metric_line(coord, e);

    if (cfg.graph_dump) {
      std::vector<const ReleaseSnapshot*> latest;
      for (const auto& [coord, p] : corpus.projects)
        if (!p.snapshots.empty()) latest.push_back(&p.snapshots.back());
      auto g = EcosystemGraph::build(std::span<const ReleaseSnapshot* const>(latest), cfg.excluded_scopes);
      write_file(*cfg.graph_dump, g.edge_list_csv());
    }
    if (cfg.out) {
      prepare_out_dir(*cfg.out);
      write_file(*cfg.out / "metrics.jsonl", lines);
    } else {
      out << lines;
    }
    return kExitOk;
  });
}

// Materializes a synthetic ecosystem as <out>/corpus and <out>/releases.csv.
inline int cmd_synth(const RunConfig& cfg, std::ostream&, std::ostream& diag) {
  using namespace commands_detail;
  return guarded(diag, [&](std::ostream&) {
    if (!cfg.out) throw Fatal{"input", "--out is required"};
    const auto eco = synth_ecosystem(cfg.synth);
    prepare_out_dir(*cfg.out);
    try {
      write_synth_ecosystem(eco, *cfg.out);
    } catch (const Error& e) {
      throw Fatal{"output", e.what()};
    }
    return kExitOk;
  });
}

}  // namespace icm
