#include "lawsmells/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "lawsmells/csv.hpp"

namespace lawsmells {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json phrase_json(const DupexPhrase& p) {
  return {{"text", p.text()},
          {"length", p.terms.size()},
          {"abs_count", p.abs_count},
          {"rel_per_1000", p.rel_per_1000},
          {"bits_gained", p.bits_gained},
          {"usage", p.usage}};
}

json snapshot_view(const SnapshotOutputs& o) {
  json lengths = json::array();
  for (const auto& r : o.lengths) {
    lengths.push_back({{"id", r.id}, {"tokens", r.inclusive_tokens},
                       {"heading", r.heading ? json(*r.heading) : json(nullptr)}});
  }
  json ccdf_points = json::array();
  for (const auto& p : o.ccdf) ccdf_points.push_back({p.length, p.fraction});
  json icicles = json::array();
  for (const auto& n : o.icicles) icicles.push_back(to_json(n));

  json trees = nullptr;
  json histogram = nullptr;
  if (o.trees) {
    trees = json::array();
    for (const auto& t : *o.trees) {
      trees.push_back({{"root", t.root}, {"scope", t.scope}, {"size", t.size}, {"depth", t.depth}});
    }
    histogram = json::array();
    for (const auto& [key, count] : o.tree_histogram) {
      histogram.push_back({{"scope", key.first}, {"size", key.second}, {"count", count}});
    }
  }

  json patterns = nullptr;
  if (o.pattern_counts) {
    patterns = json::array();
    for (const auto& c : *o.pattern_counts) {
      patterns.push_back({{"pattern", c.pattern}, {"scope", c.scope}, {"abs", c.abs},
                          {"tokens", c.tokens}, {"per_1000", opt_number(c.per_1000)}});
    }
  }

  json dupex = nullptr;
  if (o.dupex) {
    dupex = json::array();
    for (const auto& d : *o.dupex) {
      json phrases = json::array();
      for (const auto& p : d.phrases) phrases.push_back(phrase_json(p));
      json clustering = nullptr;
      if (d.clustering) {
        clustering = {{"selected", d.clustering->selected}, {"dendrogram", to_json(d.clustering->dendrogram)}};
      }
      dupex.push_back({{"scope", d.scope},
                       {"stream_tokens", d.stream_tokens},
                       {"baseline_bits", d.baseline_bits},
                       {"final_bits", d.final_bits},
                       {"compression_percent", d.compression_percent},
                       {"phrases", std::move(phrases)},
                       {"clustering", std::move(clustering)}});
    }
  }

  return {{"label", o.label},
          {"total_tokens", o.total_tokens},
          {"lengths", std::move(lengths)},
          {"ccdf", std::move(ccdf_points)},
          {"icicles", std::move(icicles)},
          {"trees", std::move(trees)},
          {"tree_histogram", std::move(histogram)},
          {"pattern_counts", std::move(patterns)},
          {"entity_density", o.density ? to_json(*o.density) : json(nullptr)},
          {"dupex", std::move(dupex)},
          {"committees", o.committees ? to_json(*o.committees) : json(nullptr)}};
}

json build_series(const std::vector<SnapshotOutputs>& outputs, const RunConfig& cfg) {
  const auto n = outputs.size();
  json labels = json::array();
  for (const auto& o : outputs) labels.push_back(o.label);

  json counts = json::object();
  for (auto k : kAllSmells) {
    json row = json::array();
    for (const auto& o : outputs) {
      if (!cfg.enabled(k)) {
        row.push_back(nullptr);
        continue;
      }
      row.push_back(std::count_if(o.findings.begin(), o.findings.end(),
                                  [&](const auto& f) { return f.kind == k; }));
    }
    counts[std::string(to_string(k))] = std::move(row);
  }

  // Compression by scope; scopes in order of first appearance.
  std::vector<std::string> scopes;
  for (const auto& o : outputs) {
    if (!o.dupex) continue;
    for (const auto& d : *o.dupex) {
      if (std::find(scopes.begin(), scopes.end(), d.scope) == scopes.end()) scopes.push_back(d.scope);
    }
  }
  json compression = json::object();
  for (const auto& scope : scopes) {
    json row = json::array();
    for (const auto& o : outputs) {
      json v = nullptr;
      if (o.dupex) {
        for (const auto& d : *o.dupex) {
          if (d.scope == scope) v = d.compression_percent;
        }
      }
      row.push_back(std::move(v));
    }
    compression[scope] = std::move(row);
  }

  json syntax_abs = json::object();
  json syntax_rel = json::object();
  for (std::size_t i = 0; i < n; ++i) {
    if (!outputs[i].pattern_counts) continue;
    for (const auto& c : *outputs[i].pattern_counts) {
      if (c.scope != "*") continue;
      if (!syntax_abs.contains(c.pattern)) {
        syntax_abs[c.pattern] = json::array();
        syntax_rel[c.pattern] = json::array();
        for (std::size_t k = 0; k < n; ++k) {
          syntax_abs[c.pattern].push_back(nullptr);
          syntax_rel[c.pattern].push_back(nullptr);
        }
      }
      syntax_abs[c.pattern][i] = c.abs;
      syntax_rel[c.pattern][i] = opt_number(c.per_1000);
    }
  }

  json density = json::object();
  for (auto t : cfg.nlo_types) {
    json row = json::array();
    for (const auto& o : outputs) {
      if (!o.density || o.total_tokens == 0) {
        row.push_back(nullptr);
        continue;
      }
      const auto col = static_cast<std::size_t>(
          std::find(o.density->types.begin(), o.density->types.end(), t) - o.density->types.begin());
      std::size_t total = 0;
      for (const auto& r : o.density->counts) total += r.at(col);
      row.push_back(1000.0 * static_cast<double>(total) / static_cast<double>(o.total_tokens));
    }
    density[std::string(to_string(t))] = std::move(row);
  }

  json tree_sizes = json::array();
  for (const auto& o : outputs) {
    if (!o.trees) {
      tree_sizes.push_back(nullptr);
      continue;
    }
    std::map<std::size_t, std::size_t> merged;
    for (const auto& [key, count] : o.tree_histogram) merged[key.second] += count;
    json pairs = json::array();
    for (const auto& [size, count] : merged) pairs.push_back({size, count});
    tree_sizes.push_back(std::move(pairs));
  }

  return {{"labels", std::move(labels)},
          {"finding_counts", std::move(counts)},
          {"compression_percent", std::move(compression)},
          {"syntax_abs", std::move(syntax_abs)},
          {"syntax_per_1000", std::move(syntax_rel)},
          {"entity_per_1000", std::move(density)},
          {"tree_sizes", std::move(tree_sizes)}};
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void span_cells(csv::RowWriter& w, const SmellFinding& f) {
  if (f.span) {
    w.integer(static_cast<long long>(f.span->begin)).integer(static_cast<long long>(f.span->end));
  } else {
    w.empty().empty();
  }
}

std::string findings_csv(const std::vector<SmellFinding>& findings) {
  std::ostringstream out;
  csv::RowWriter w(out);
  w.text("snapshot").text("kind").text("element").text("span_begin").text("span_end").text("order");
  w.text("metrics").text("excerpt").text("annotation").end();
  for (const auto& f : findings) {
    w.text(f.snapshot).text(to_string(f.kind)).text(f.element);
    span_cells(w, f);
    w.integer(static_cast<long long>(f.order));
    w.text(json(f.metrics).dump()).text(f.excerpt).text(f.annotation).end();
  }
  return out.str();
}

std::string kind_csv(const std::vector<SmellFinding>& findings, SmellKind kind) {
  std::set<std::string> keys;
  for (const auto& f : findings) {
    if (f.kind != kind) continue;
    for (const auto& [k, v] : f.metrics) keys.insert(k);
  }
  std::ostringstream out;
  csv::RowWriter w(out);
  w.text("snapshot").text("element").text("span_begin").text("span_end");
  for (const auto& k : keys) w.text(k);
  w.text("excerpt").text("annotation").end();
  for (const auto& f : findings) {
    if (f.kind != kind) continue;
    w.text(f.snapshot).text(f.element);
    span_cells(w, f);
    for (const auto& k : keys) {
      auto it = f.metrics.find(k);
      if (it == f.metrics.end()) {
        w.empty();
      } else {
        w.number(it->second);
      }
    }
    w.text(f.excerpt).text(f.annotation).end();
  }
  return out.str();
}

void number_or_empty(csv::RowWriter& w, const json& v) {
  if (v.is_null()) {
    w.empty();
  } else {
    w.number(v.get<double>());
  }
}

std::map<std::string, std::string> series_csvs(const Report& r) {
  std::map<std::string, std::string> files;
  const auto& labels = r.labels;
  auto keyed = [&](const std::string& name, const json& table, const char* key_col, const char* value_col) {
    std::ostringstream out;
    csv::RowWriter w(out);
    w.text("label").text(key_col).text(value_col).end();
    for (const auto& [key, row] : table.items()) {
      for (std::size_t i = 0; i < labels.size(); ++i) {
        w.text(labels[i]).text(key);
        number_or_empty(w, row.at(i));
        w.end();
      }
    }
    files[name] = out.str();
  };
  const auto& s = r.series;
  keyed("series_finding_counts.csv", s.at("finding_counts"), "kind", "count");
  keyed("series_compression.csv", s.at("compression_percent"), "scope", "percent");
  keyed("series_syntax_abs.csv", s.at("syntax_abs"), "pattern", "abs");
  keyed("series_syntax_per_1000.csv", s.at("syntax_per_1000"), "pattern", "per_1000");
  keyed("series_entity_per_1000.csv", s.at("entity_per_1000"), "type", "per_1000");

  std::ostringstream hist;
  csv::RowWriter hw(hist);
  hw.text("label").text("scope").text("size").text("count").end();
  std::ostringstream lengths;
  csv::RowWriter lw(lengths);
  lw.text("label").text("id").text("tokens").end();
  std::ostringstream ccdf_out;
  csv::RowWriter cw(ccdf_out);
  cw.text("label").text("length").text("fraction").end();
  std::ostringstream patterns;
  csv::RowWriter pw(patterns);
  pw.text("label").text("pattern").text("scope").text("abs").text("per_1000").end();
  for (const auto& snap : r.snapshots) {
    const auto label = snap.at("label").get<std::string>();
    if (!snap.at("tree_histogram").is_null()) {
      for (const auto& h : snap.at("tree_histogram")) {
        hw.text(label).text(h.at("scope").get<std::string>());
        hw.integer(h.at("size").get<long long>()).integer(h.at("count").get<long long>()).end();
      }
    }
    for (const auto& l : snap.at("lengths")) {
      lw.text(label).text(l.at("id").get<std::string>()).integer(l.at("tokens").get<long long>()).end();
    }
    for (const auto& p : snap.at("ccdf")) {
      cw.text(label).integer(p.at(0).get<long long>()).number(p.at(1).get<double>()).end();
    }
    if (!snap.at("pattern_counts").is_null()) {
      for (const auto& p : snap.at("pattern_counts")) {
        pw.text(label).text(p.at("pattern").get<std::string>()).text(p.at("scope").get<std::string>());
        pw.integer(p.at("abs").get<long long>());
        number_or_empty(pw, p.at("per_1000"));
        pw.end();
      }
    }
  }
  files["tree_histogram.csv"] = hist.str();
  files["lengths.csv"] = lengths.str();
  files["ccdf.csv"] = ccdf_out.str();
  files["pattern_counts.csv"] = patterns.str();
  return files;
}

}  // namespace

Report build_report(const std::vector<SnapshotOutputs>& outputs, const RunConfig& cfg,
                    const std::string& fingerprint) {
  std::set<std::string> seen;
  for (const auto& o : outputs) {
    if (o.fingerprint != fingerprint) {
      throw Error("snapshot '" + o.label + "' was analyzed under a different config");
    }
    if (!seen.insert(o.label).second) throw Error("duplicate snapshot label '" + o.label + "'");
  }
  Report r;
  r.tool_version = kToolVersion;
  r.fingerprint = fingerprint;
  r.config = to_json(cfg);
  r.conventions = {{"syntax_gap", "characters between the end of the left anchor and the start of the right anchor"},
                   {"tree_size", "tree edges plus cycle edges; parallel references count once per multiplicity"},
                   {"quantile", "lower nearest rank"},
                   {"thresholds", "strictly greater than"},
                   {"ccdf", "fraction of records strictly longer than the length"},
                   {"rel_per_1000", "occurrences per 1,000 tokens of the scope stream"}};
  r.snapshots = json::array();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    r.labels.push_back(outputs[i].label);
    auto found = outputs[i].findings;
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
      if (a.kind != b.kind) return a.kind < b.kind;
      if (a.order != b.order) return a.order < b.order;
      const auto ab = a.span ? a.span->begin : 0;
      const auto bb = b.span ? b.span->begin : 0;
      return ab < bb;
    });
    r.findings.insert(r.findings.end(), found.begin(), found.end());
    r.snapshots.push_back(snapshot_view(outputs[i]));
  }
  r.series = build_series(outputs, cfg);
  return r;
}

json to_json(const Report& r) {
  json findings = json::array();
  for (const auto& f : r.findings) findings.push_back(to_json(f));
  return {{"tool_version", r.tool_version},
          {"fingerprint", r.fingerprint},
          {"config", r.config},
          {"conventions", r.conventions},
          {"labels", r.labels},
          {"findings", std::move(findings)},
          {"snapshots", r.snapshots},
          {"series", r.series}};
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.fingerprint = j.at("fingerprint").get<std::string>();
    r.config = j.at("config");
    r.conventions = j.at("conventions");
    r.labels = j.at("labels").get<std::vector<std::string>>();
    for (const auto& f : j.at("findings")) r.findings.push_back(finding_from_json(f));
    r.snapshots = j.at("snapshots");
    r.series = j.at("series");
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("report does not match the schema: ") + e.what());
  }
}

std::string canonical_dump(const Report& r) { return to_json(r).dump(1) + "\n"; }

std::map<SmellKind, std::size_t> count_by_kind(const std::vector<SmellFinding>& findings) {
  std::map<SmellKind, std::size_t> out;
  for (const auto& f : findings) ++out[f.kind];
  return out;
}

ExportFormat export_format_from_string(std::string_view name) {
  if (name == "json") return ExportFormat::json;
  if (name == "csv-bundle" || name == "csv") return ExportFormat::csv_bundle;
  if (name == "html") return ExportFormat::html;
  throw Error("unknown export format '" + std::string(name) + "' (json, csv-bundle, html)");
}

std::vector<fs::path> export_report(const Report& r, ExportFormat format, const fs::path& dir,
                                    const std::optional<fs::path>& viewer_bundle) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
  std::vector<fs::path> written;
  auto put = [&](const std::string& name, std::string_view content) {
    write_file(dir / name, content);
    written.push_back(dir / name);
  };
  switch (format) {
    case ExportFormat::json:
      put("report.json", canonical_dump(r));
      break;
    case ExportFormat::csv_bundle: {
      put("findings.csv", findings_csv(r.findings));
      for (auto k : kAllSmells) put("findings_" + std::string(to_string(k)) + ".csv", kind_csv(r.findings, k));
      for (const auto& [name, content] : series_csvs(r)) put(name, content);
      break;
    }
    case ExportFormat::html: {
      const auto script = viewer_bundle ? read_file(*viewer_bundle) : std::string(builtin_viewer_script());
      put("report.html", render_html(r, script));
      break;
    }
  }
  return written;
}

Report load_report(const fs::path& path) {
  const auto content = read_file(path);
  json j;
  try {
    j = path.extension() == ".html" ? report_json_from_html(content) : json::parse(content);
  } catch (const json::exception& e) {
    throw Error("malformed report " + path.string() + ": " + e.what());
  }
  return report_from_json(j);
}

std::vector<SmellFinding> load_findings_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const auto rows = csv::read(in);
  if (rows.empty()) throw Error("empty findings file " + path.string());
  std::vector<SmellFinding> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 9) throw Error("findings row " + std::to_string(i + 1) + " has " + std::to_string(r.size()) + " cells");
    SmellFinding f;
    f.snapshot = r[0];
    f.kind = smell_from_string(r[1]);
    f.element = r[2];
    if (!r[3].empty()) f.span = Span{std::stoull(r[3]), std::stoull(r[4])};
    f.order = std::stoull(r[5]);
    f.metrics = json::parse(r[6]).get<std::map<std::string, double>>();
    f.excerpt = r[7];
    f.annotation = r[8];
    out.push_back(std::move(f));
  }
  return out;
}

std::string render_html(const Report& r, std::string_view viewer_script) {
  // '<' only occurs inside JSON strings, so the < escape keeps the data
  // inert inside the script element.
  std::string data;
  for (char c : to_json(r).dump()) {
    if (c == '<') {
      data += "\\u003c";
    } else {
      data.push_back(c);
    }
  }
  std::string script(viewer_script);
  for (auto at = script.find("</script"); at != std::string::npos; at = script.find("</script", at + 2)) {
    script.replace(at, 2, "<\\/");
  }
  std::string html;
  html += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>Law smells report</title>\n";
  html += "</head>\n<body>\n<div id=\"app\"></div>\n";
  html += "<script id=\"report-data\" type=\"application/json\">";
  html += data;
  html += "</script>\n<script>\n";
  html += script;
  html += "\n</script>\n</body>\n</html>\n";
  return html;
}

json report_json_from_html(std::string_view html) {
  constexpr std::string_view open = "<script id=\"report-data\" type=\"application/json\">";
  const auto b = html.find(open);
  if (b == std::string_view::npos) throw Error("page carries no embedded report");
  const auto start = b + open.size();
  const auto e = html.find("</script>", start);
  if (e == std::string_view::npos) throw Error("embedded report is not terminated");
  return json::parse(html.substr(start, e - start));
}

}  // namespace lawsmells
