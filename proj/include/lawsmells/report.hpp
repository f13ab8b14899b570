#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lawsmells/config.hpp"
#include "lawsmells/finding.hpp"
#include "lawsmells/pipeline.hpp"

namespace lawsmells {

/// One versioned report over all snapshots of a run.
struct Report {
  std::string tool_version;
  std::string fingerprint;
  nlohmann::json config;       // effective config echo
  nlohmann::json conventions;  // measurement choices that affect numbers
  std::vector<std::string> labels;
  /// Sorted by snapshot (input order), smell kind, document position.
  std::vector<SmellFinding> findings;
  nlohmann::json snapshots;  // per-snapshot views for the viewer
  nlohmann::json series;     // aligned on `labels`, null for gaps

  bool operator==(const Report&) const = default;
};

/// Throws Error when an output was produced under another fingerprint or two
/// snapshots share a label.
Report build_report(const std::vector<SnapshotOutputs>& outputs, const RunConfig& cfg,
                    const std::string& fingerprint);

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

/// Canonical text: sorted keys, shortest round-trip numbers, trailing newline.
std::string canonical_dump(const Report& r);

std::map<SmellKind, std::size_t> count_by_kind(const std::vector<SmellFinding>& findings);

enum class ExportFormat { json, csv_bundle, html };
ExportFormat export_format_from_string(std::string_view name);

/// Writes the report into `dir` and returns the files written. The HTML page
/// embeds the report and the viewer; `viewer_bundle` replaces the built-in
/// viewer script.
std::vector<std::filesystem::path> export_report(const Report& r, ExportFormat format,
                                                 const std::filesystem::path& dir,
                                                 const std::optional<std::filesystem::path>& viewer_bundle = {});

/// Loads report.json or an exported HTML page.
Report load_report(const std::filesystem::path& path);

/// Reads findings.csv from a csv bundle.
std::vector<SmellFinding> load_findings_csv(const std::filesystem::path& path);

/// Self-contained HTML page around the report JSON.
std::string render_html(const Report& r, std::string_view viewer_script);
/// Script of the built-in viewer.
std::string_view builtin_viewer_script();
/// Extracts the embedded report JSON from a rendered page.
nlohmann::json report_json_from_html(std::string_view html);

}  // namespace lawsmells
