#pragma once

// On-disk inputs: releases.csv, the corpus directory tree and LOC counting.
//
// Corpus layout:
//
//   <root>/<project-dir>/<version>/snapshot.json
//   <root>/<project-dir>/<version>/pom.xml [, <module>/pom.xml ...]
//                                  [api_surface.json] [usage.json] [src/...]
//
// The project coordinate comes from the parsed releases. A project directory
// whose releases all fail falls back to a name of the form `group:artifact`
// or `group__artifact`.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "icmetrics/error.hpp"
#include "icmetrics/model.hpp"
#include "icmetrics/parallel.hpp"
#include "icmetrics/pom.hpp"
#include "icmetrics/snapshot_json.hpp"

namespace icm {

namespace fs = std::filesystem;

struct Warning {
  std::string kind;
  std::string message;

  std::string to_string() const { return "warning: " + kind + ": " + message; }
  friend bool operator==(const Warning&, const Warning&) = default;
};

struct ReleaseHistoryRow {
  std::string project;  // group:artifact
  std::string version_label;
  std::int64_t timestamp = 0;
  std::uint64_t bugs_fixed = 0;

  friend bool operator==(const ReleaseHistoryRow&, const ReleaseHistoryRow&) = default;
};

namespace ingest_detail {

inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw HistoryError(lineno, "unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

template <class Int>
Int parse_int(const std::string& s, std::size_t lineno, const char* column) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw HistoryError(lineno, std::string("column ") + column + ": '" + s +
                                   "' is not a valid integer");
  return v;
}

inline std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return std::move(ss).str();
}

inline std::uint64_t count_lines(std::string_view text) {
  std::uint64_t n = 0;
  for (char c : text) n += c == '\n';
  if (!text.empty() && text.back() != '\n') ++n;
  return n;
}

}  // namespace ingest_detail

// Rows of a `project,version,timestamp,bugs_fixed` table. Columns may appear
// in any order; extra columns are ignored. Blank lines are skipped.
inline std::vector<ReleaseHistoryRow> load_release_history(std::string_view csv_text) {
  using namespace ingest_detail;
  std::vector<ReleaseHistoryRow> rows;
  std::istringstream in{std::string(csv_text)};
  std::string line;
  std::size_t lineno = 0;
  std::map<std::string, std::size_t> col;
  bool have_header = false;
  std::set<std::pair<std::string, std::string>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line, lineno);
    if (!have_header) {
      if (lineno == 1 && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
      for (std::size_t i = 0; i < fields.size(); ++i) col[fields[i]] = i;
      for (const char* req : {"project", "version", "timestamp", "bugs_fixed"})
        if (!col.contains(req)) throw HistoryError(lineno, std::string("missing column '") + req + "'");
      have_header = true;
      continue;
    }
    auto get = [&](const char* name) -> const std::string& {
      auto idx = col.at(name);
      if (idx >= fields.size()) throw HistoryError(lineno, std::string("missing value for column '") + name + "'");
      return fields[idx];
    };
    ReleaseHistoryRow row{.project = get("project"),
                          .version_label = get("version"),
                          .timestamp = parse_int<std::int64_t>(get("timestamp"), lineno, "timestamp"),
                          .bugs_fixed = parse_int<std::uint64_t>(get("bugs_fixed"), lineno, "bugs_fixed")};
    if (get("bugs_fixed").starts_with("-"))
      throw HistoryError(lineno, "column bugs_fixed: must be non-negative");
    if (!seen.emplace(row.project, row.version_label).second)
      throw HistoryError(lineno, "duplicate row for (" + row.project + ", " + row.version_label + ")");
    rows.push_back(std::move(row));
  }
  if (!have_header) throw HistoryError(lineno, "missing header row");
  return rows;
}

// Total line count of files under src_root whose name ends with one of
// `extensions`. Unreadable files count as zero and add a warning.
inline std::uint64_t count_loc(const fs::path& src_root, const std::set<std::string>& extensions,
                               std::vector<Warning>* warnings = nullptr) {
  std::uint64_t total = 0;
  std::error_code ec;
  fs::recursive_directory_iterator it(src_root, fs::directory_options::skip_permission_denied, ec);
  if (ec) {
    if (warnings) warnings->push_back({"loc", "cannot read " + src_root.string() + ": " + ec.message()});
    return 0;
  }
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (!it->is_regular_file(ec)) continue;
    const std::string name = it->path().filename().string();
    bool match = std::any_of(extensions.begin(), extensions.end(),
                             [&](const std::string& e) { return name.ends_with(e); });
    if (!match) continue;
    auto text = ingest_detail::read_file(it->path());
    if (!text) {
      if (warnings) warnings->push_back({"loc", "unreadable file " + it->path().string()});
      continue;
    }
    total += ingest_detail::count_lines(*text);
  }
  return total;
}

struct FailedRelease {
  std::string version_label;
  std::int64_t timestamp = 0;
  std::uint64_t bugs_fixed = 0;
  std::string reason;
};

struct ProjectReleases {
  ProjectCoordinate coordinate;
  std::string directory;
  std::vector<ReleaseSnapshot> snapshots;  // ascending (timestamp, version_label)
  std::vector<FailedRelease> failed;

  std::size_t total_releases() const { return snapshots.size() + failed.size(); }
};

struct Corpus {
  std::map<ProjectCoordinate, ProjectReleases> projects;
  std::vector<Warning> warnings;
};

struct IngestOptions {
  std::set<std::string> loc_extensions{".java"};
  unsigned workers = 1;
};

namespace ingest_detail {

struct ReleaseOutcome {
  std::optional<ReleaseSnapshot> snapshot;
  bool timestamp_from_file = false;
  bool bugs_from_file = false;
  std::string failure;  // non-empty iff !snapshot
  std::vector<Warning> warnings;
};

inline std::optional<ApiSurface> read_api_surface(const fs::path& p) {
  auto text = read_file(p);
  if (!text) throw Error("cannot read " + p.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(*text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(".", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError(".", "expected an object");
  ApiSurface s;
  for (const auto& [method, callees] : j.items()) {
    if (!callees.is_array()) throw SchemaError("[\"" + method + "\"]", "expected an array");
    auto& set = s.methods[method];
    for (const auto& c : callees) {
      if (!c.is_string()) throw SchemaError("[\"" + method + "\"]", "expected strings");
      set.insert(c.get<std::string>());
    }
  }
  return s;
}

inline UsageRecord read_usage(const fs::path& p) {
  auto text = read_file(p);
  if (!text) throw Error("cannot read " + p.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(*text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(".", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_array()) throw SchemaError(".", "expected an array");
  UsageRecord rec;
  for (std::size_t i = 0; i < j.size(); ++i)
    rec.referenced_coordinates.insert(
        snapshot_detail::coordinate(j[i], "[" + std::to_string(i) + "]"));
  return rec;
}

inline std::vector<fs::path> find_poms(const fs::path& release_dir) {
  std::vector<fs::path> poms;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(release_dir, ec);
       !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (it->is_directory(ec) && (it->path().filename() == "src" || it->path().filename() == "target")) {
      it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file(ec) && it->path().filename() == "pom.xml") poms.push_back(it->path());
  }
  std::sort(poms.begin(), poms.end());
  // Root pom first: it defines the project coordinate.
  auto root = std::find(poms.begin(), poms.end(), release_dir / "pom.xml");
  if (root != poms.end()) std::rotate(poms.begin(), root, root + 1);
  return poms;
}

inline ReleaseOutcome load_release(const fs::path& dir, const IngestOptions& opt) {
  ReleaseOutcome out;
  const std::string label = dir.filename().string();
  try {
    const fs::path json_path = dir / "snapshot.json";
    const fs::path src = dir / "src";
    std::vector<Warning> loc_warnings;
    if (fs::is_regular_file(json_path)) {
      auto text = read_file(json_path);
      if (!text) throw Error("cannot read snapshot.json");
      ReleaseSnapshot snap = parse_snapshot_json(*text);
      if (snap.version_label != label)
        throw Error("snapshot.json version '" + snap.version_label +
                    "' does not match release directory name '" + label + "'");
      if (!snap.loc && fs::is_directory(src)) snap.loc = count_loc(src, opt.loc_extensions, &loc_warnings);
      out.timestamp_from_file = true;
      const auto doc = nlohmann::json::parse(*text);
      out.bugs_from_file = doc.contains("bugs_fixed") && !doc["bugs_fixed"].is_null();
      out.snapshot = std::move(snap);
    } else {
      auto poms = find_poms(dir);
      if (poms.empty()) {
        out.failure = "no snapshot.json or pom.xml";
        return out;
      }
      std::vector<ProjectManifest> manifests;
      for (const auto& p : poms) {
        auto text = read_file(p);
        if (!text) throw Error("cannot read " + p.string());
        try {
          manifests.push_back(parse_pom(*text));
        } catch (const PomError& e) {
          throw Error(fs::relative(p, dir).string() + ": " + e.what());
        }
      }
      ReleaseSnapshot snap{.coordinate = manifests.front().coordinate, .version_label = label};
      snap.manifests = std::move(manifests);
      if (fs::is_regular_file(dir / "api_surface.json")) {
        try {
          snap.api_surface = read_api_surface(dir / "api_surface.json");
        } catch (const SchemaError& e) {
          throw Error(std::string("api_surface.json: ") + e.what());
        }
      }
      if (fs::is_regular_file(dir / "usage.json")) {
        try {
          snap.usage = read_usage(dir / "usage.json");
        } catch (const SchemaError& e) {
          throw Error(std::string("usage.json: ") + e.what());
        }
      }
      if (fs::is_directory(src)) snap.loc = count_loc(src, opt.loc_extensions, &loc_warnings);
      if (auto v = validate_snapshot(snap); !v.empty()) throw InvalidSnapshot(std::move(v));
      out.snapshot = std::move(snap);
    }
    out.warnings = std::move(loc_warnings);
  } catch (const Error& e) {
    out.snapshot.reset();
    out.failure = e.what();
  } catch (const fs::filesystem_error& e) {
    out.snapshot.reset();
    out.failure = e.what();
  }
  return out;
}

inline std::optional<ProjectCoordinate> coordinate_from_dirname(const std::string& name) {
  for (std::string_view sep : {":", "__"}) {
    auto pos = name.find(sep);
    if (pos == std::string::npos) continue;
    auto g = name.substr(0, pos), a = name.substr(pos + sep.size());
    if (ProjectCoordinate::valid_part(g) && ProjectCoordinate::valid_part(a)) return ProjectCoordinate(g, a);
  }
  return std::nullopt;
}

inline std::vector<fs::path> sorted_subdirs(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ingest_detail

inline Corpus load_corpus(const fs::path& root, const std::vector<ReleaseHistoryRow>& history,
                          const IngestOptions& opt = {}) {
  using namespace ingest_detail;
  if (!fs::is_directory(root)) throw Error("corpus root " + root.string() + " is not a readable directory");

  std::map<std::pair<std::string, std::string>, const ReleaseHistoryRow*> rows;
  for (const auto& r : history) rows[{r.project, r.version_label}] = &r;
  std::set<std::pair<std::string, std::string>> matched;

  struct Job {
    std::size_t project;
    fs::path dir;
  };
  std::vector<fs::path> project_dirs;
  std::vector<Job> jobs;
  try {
    project_dirs = sorted_subdirs(root);
    for (std::size_t p = 0; p < project_dirs.size(); ++p)
      for (auto& d : sorted_subdirs(project_dirs[p])) jobs.push_back({p, std::move(d)});
  } catch (const fs::filesystem_error& e) {
    throw Error(std::string("cannot enumerate corpus: ") + e.what());
  }

  std::vector<ReleaseOutcome> outcomes(jobs.size());
  parallel_for(jobs.size(), opt.workers, [&](std::size_t i) { outcomes[i] = load_release(jobs[i].dir, opt); });

  Corpus corpus;
  std::size_t j = 0;
  for (std::size_t p = 0; p < project_dirs.size(); ++p) {
    const std::string dirname = project_dirs[p].filename().string();
    const std::size_t begin = j;
    while (j < jobs.size() && jobs[j].project == p) ++j;

    std::optional<ProjectCoordinate> coord;
    for (std::size_t k = begin; k < j && !coord; ++k)
      if (outcomes[k].snapshot) coord = outcomes[k].snapshot->coordinate;
    if (!coord) coord = coordinate_from_dirname(dirname);
    if (!coord) {
      corpus.warnings.push_back({"corpus", "project directory '" + dirname +
                                               "' has no parsable release and its name is not group:artifact; skipped"});
      continue;
    }
    if (corpus.projects.contains(*coord)) {
      corpus.warnings.push_back({"corpus", "project directory '" + dirname + "' repeats coordinate " +
                                               coord->key() + "; skipped"});
      continue;
    }

    ProjectReleases pr{.coordinate = *coord, .directory = dirname};
    const std::string key = coord->key();
    for (std::size_t k = begin; k < j; ++k) {
      auto& o = outcomes[k];
      const std::string label = jobs[k].dir.filename().string();
      for (auto& w : o.warnings) corpus.warnings.push_back(std::move(w));
      const ReleaseHistoryRow* row = nullptr;
      if (auto it = rows.find({key, label}); it != rows.end()) {
        row = it->second;
        matched.insert(it->first);
      }
      if (o.snapshot && o.snapshot->coordinate != *coord) {
        o.failure = "release coordinate " + o.snapshot->coordinate.key() + " differs from project " + key;
        o.snapshot.reset();
      }
      if (!o.snapshot) {
        corpus.warnings.push_back({"failed-release", key + " " + label + ": " + o.failure});
        pr.failed.push_back({.version_label = label,
                             .timestamp = row ? row->timestamp : 0,
                             .bugs_fixed = row ? row->bugs_fixed : 0,
                             .reason = o.failure});
        continue;
      }
      ReleaseSnapshot snap = std::move(*o.snapshot);
      if (row) {
        snap.bugs_fixed = row->bugs_fixed;
        if (!o.timestamp_from_file) snap.timestamp = row->timestamp;
      } else if (!o.bugs_from_file) {
        corpus.warnings.push_back({"history", key + " " + label + ": no releases.csv row; bugs_fixed = 0"});
      }
      pr.snapshots.push_back(std::move(snap));
    }
    std::sort(pr.snapshots.begin(), pr.snapshots.end(), [](const auto& a, const auto& b) {
      return std::tie(a.timestamp, a.version_label) < std::tie(b.timestamp, b.version_label);
    });
    std::sort(pr.failed.begin(), pr.failed.end(), [](const auto& a, const auto& b) {
      return std::tie(a.timestamp, a.version_label) < std::tie(b.timestamp, b.version_label);
    });
    corpus.projects.emplace(*coord, std::move(pr));
  }

  for (const auto& r : history)
    if (!matched.contains({r.project, r.version_label}))
      corpus.warnings.push_back({"orphan-history-row", r.project + " " + r.version_label +
                                                           " has no release directory"});
  return corpus;
}

}  // namespace icm
