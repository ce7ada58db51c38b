#pragma once

// CSV/JSONL emitters. All output is a pure function of its input.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icmetrics/model.hpp"
#include "icmetrics/pipeline.hpp"
#include "icmetrics/stats.hpp"
#include "json.hpp"

namespace icm {

// 4 significant digits, `nan` for NaN.
inline std::string format_r(double r) {
  if (std::isnan(r)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", r);
  return buf;
}

// 3 significant digits in scientific notation with a bare exponent:
// 1.00e0, 2.15e-17.
inline std::string format_p(double p) {
  if (std::isnan(p)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", p);
  std::string s = buf;
  auto e = s.find('e');
  std::string mantissa = s.substr(0, e);
  int exponent = std::stoi(s.substr(e + 1));
  return mantissa + "e" + std::to_string(exponent);
}

// Shortest text that parses back to the same double.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_real(*v) : ""; }
inline std::string format_optional(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : "";
}

namespace report_detail {
inline std::vector<CorrelationResult> in_report_order(std::span<const CorrelationResult> results) {
  std::vector<CorrelationResult> out(results.begin(), results.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.metric < b.metric; });
  return out;
}

inline std::string correlation_cells(const CorrelationResult& c) {
  return format_r(c.r) + "," + format_p(c.p_two_tailed) + "," + std::to_string(c.n);
}
}  // namespace report_detail

inline std::string emit_combined_table(std::span<const CorrelationResult> pooled) {
  std::string out = "metric,correlation,p_value,n\n";
  for (const auto& c : report_detail::in_report_order(pooled))
    out += std::string(metric_name(c.metric)) + "," + report_detail::correlation_cells(c) + "\n";
  return out;
}

inline std::string emit_per_project_table(std::span<const ProjectSummary> summaries) {
  std::string out = "project,metric,correlation,p_value,n\n";
  for (const auto& s : summaries)
    for (const auto& c : report_detail::in_report_order(s.correlations))
      out += s.coordinate.key() + "," + std::string(metric_name(c.metric)) + "," +
             report_detail::correlation_cells(c) + "\n";
  return out;
}

inline std::string emit_summaries_table(std::span<const ProjectSummary> summaries) {
  std::string out =
      "project,n_releases,n_bugs,activity,median_wmc,median_dit,median_noc,median_cbo,median_rfc,"
      "median_lcom1,median_loc\n";
  for (const auto& s : summaries) {
    const auto& m = s.medians;
    out += s.coordinate.key() + "," + std::to_string(s.n_releases) + "," + std::to_string(s.n_bugs_total) + "," +
           format_real(s.activity) + "," + format_optional(m.wmc) + "," + format_optional(m.dit) + "," +
           format_optional(m.noc) + "," + format_optional(m.cbo) + "," + format_optional(m.rfc) + "," +
           format_optional(m.lcom1) + "," + format_optional(m.loc) + "\n";
  }
  return out;
}

inline std::string emit_series_table(const ProjectSeries& series) {
  std::string out = "version,timestamp,bugs_fixed,wmc,dit,noc,cbo,rfc,lcom1,loc\n";
  for (const auto& e : series.releases) {
    const auto& v = e.metrics;
    out += e.version_label + "," + std::to_string(e.timestamp) + "," + std::to_string(e.bugs_fixed) + "," +
           std::to_string(v.wmc) + "," + std::to_string(v.dit) + "," + std::to_string(v.noc) + "," +
           std::to_string(v.cbo) + "," + format_optional(v.rfc) + "," + format_optional(v.lcom1) + "," +
           format_optional(v.loc) + "\n";
  }
  return out;
}

inline std::string series_file_name(const ProjectCoordinate& c) {
  return "series_" + c.group() + "_" + c.artifact() + ".csv";
}

// One JSON object per line.
inline std::string emit_metric_line(const ProjectCoordinate& project, const SeriesEntry& e) {
  nlohmann::ordered_json j;
  auto opt = [](const std::optional<std::uint64_t>& v) { return v ? nlohmann::ordered_json(*v) : nullptr; };
  j["project"] = project.key();
  j["version"] = e.version_label;
  j["timestamp"] = e.timestamp;
  j["bugs_fixed"] = e.bugs_fixed;
  j["wmc"] = e.metrics.wmc;
  j["dit"] = e.metrics.dit;
  j["noc"] = e.metrics.noc;
  j["cbo"] = e.metrics.cbo;
  j["rfc"] = opt(e.metrics.rfc);
  j["lcom1"] = opt(e.metrics.lcom1);
  j["loc"] = opt(e.metrics.loc);
  return j.dump() + "\n";
}

// Aligned plain-text rendering with two decimals.
inline std::string render_human_table(const std::vector<std::string>& header,
                                      const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string& c = i < cells.size() ? cells[i] : std::string();
      s += c + std::string(width[i] - c.size(), ' ');
      s += i + 1 < width.size() ? "  " : "";
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s + "\n";
  };
  std::string out = line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
  for (const auto& r : rows) out += line(r);
  return out;
}

inline std::string two_decimals(double v) {
  if (std::isnan(v)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Matches the presentation of the combined table: r to 2 decimals, p in the
// 3-significant-digit scientific form.
inline std::string human_correlations(std::span<const CorrelationResult> results, const std::string& project = {}) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : report_detail::in_report_order(results)) {
    std::vector<std::string> row;
    if (!project.empty()) row.push_back(project);
    row.insert(row.end(), {std::string(metric_name(c.metric)), two_decimals(c.r), format_p(c.p_two_tailed),
                           std::to_string(c.n)});
    rows.push_back(std::move(row));
  }
  std::vector<std::string> header{"Metric", "Correlation", "two-tailed p-value", "n"};
  if (!project.empty()) header.insert(header.begin(), "Project");
  return render_human_table(header, rows);
}

}  // namespace icm
