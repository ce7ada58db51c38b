// icmetrics: interaction-complexity metrics over dependency-manifest corpora.
//
//   icmetrics synth   --out DIR [--seed N --projects N --releases N --coupling A --noise S]
//   icmetrics metrics --corpus DIR [--history FILE] [--out DIR] [--graph-dump FILE]
//   icmetrics analyze --corpus DIR --history FILE --out DIR [--human]
//
// Exit status: 0 success, 1 input/output error, 2 invalid flags.

#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "icmetrics/commands.hpp"

namespace {

std::set<std::string> split_list(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  icm::RunConfig cfg;
  std::string scopes = "test,provided";
  std::string loc_ext = ".java";
  std::string corpus, history, out, graph_dump;

  CLI::App app{"Interaction-complexity metrics and bug-fix correlation over dependency manifests"};
  app.require_subcommand(1);

  auto add_ingest = [&](CLI::App* sub, bool history_required) {
    sub->add_option("--corpus", corpus, "Corpus root directory")->required();
    auto* h = sub->add_option("--history", history, "releases.csv (project,version,timestamp,bugs_fixed)");
    if (history_required) h->required();
    sub->add_option("--exclude-scopes", scopes, "Comma-separated dependency scopes to ignore")
        ->capture_default_str();
    sub->add_option("--loc-ext", loc_ext, "Comma-separated source suffixes for LOC")->capture_default_str();
    sub->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Select projects, correlate metrics with bug fixes, write reports");
  add_ingest(analyze, true);
  analyze->add_option("--out", out, "Output directory")->required();
  analyze->add_option("--activity-threshold", cfg.activity_threshold, "Low-activity cutoff (releases / bugs)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_flag("--human", cfg.human, "Also print aligned tables to stdout");

  auto* metrics = app.add_subcommand("metrics", "Dump per-release metric vectors as JSON lines");
  add_ingest(metrics, false);
  metrics->add_option("--out", out, "Write <out>/metrics.jsonl instead of stdout");
  metrics->add_option("--graph-dump", graph_dump, "Write the latest-release dependency edge list as CSV");

  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic corpus and releases.csv");
  synth->add_option("--out", out, "Output directory")->required();
  synth->add_option("--seed", cfg.synth.seed, "RNG seed")->capture_default_str();
  synth->add_option("--projects", cfg.synth.n_projects, "Number of projects")->capture_default_str();
  synth->add_option("--releases", cfg.synth.n_releases, "Releases per project")->capture_default_str();
  synth->add_option("--coupling", cfg.synth.coupling, "Bugs per IC-RFC unit")->capture_default_str();
  synth->add_option("--noise", cfg.synth.noise, "Standard deviation of bug noise")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return icm::kExitUsage;
  }

  cfg.corpus = corpus;
  if (!history.empty()) cfg.history = history;
  if (!out.empty()) cfg.out = out;
  if (!graph_dump.empty()) cfg.graph_dump = graph_dump;
  cfg.excluded_scopes = split_list(scopes);
  cfg.loc_extensions = split_list(loc_ext);

  if (analyze->parsed()) return icm::cmd_analyze(cfg, std::cout, std::cerr);
  if (metrics->parsed()) return icm::cmd_metrics(cfg, std::cout, std::cerr);
  return icm::cmd_synth(cfg, std::cout, std::cerr);
}
