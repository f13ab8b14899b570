#include "lawsmells/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "lawsmells/pipeline.hpp"
#include "lawsmells/report.hpp"

namespace lawsmells::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Options whose values override the config file only when given.
class FlagSet {
 public:
  template <typename T, typename F>
  CLI::Option* add(CLI::App* app, const std::string& name, const std::string& desc, F apply) {
    auto value = std::make_shared<T>();
    auto* opt = app->add_option(name, *value, desc);
    appliers_.push_back([opt, value, apply](RunConfig& c) {
      if (opt->count() > 0) apply(c, *value);
    });
    return opt;
  }

  CLI::Option* add_flag(CLI::App* app, const std::string& name, const std::string& desc,
                        std::function<void(RunConfig&)> apply) {
    auto* opt = app->add_flag(name, desc);
    appliers_.push_back([opt, apply](RunConfig& c) {
      if (opt->count() > 0) apply(c);
    });
    return opt;
  }

  void apply(RunConfig& c) const {
    for (const auto& a : appliers_) a(c);
  }

 private:
  std::vector<std::function<void(RunConfig&)>> appliers_;
};

struct Command {
  CLI::App* app = nullptr;
  FlagSet flags;
  std::string config_path;
};

void add_corpus_flags(Command& cmd) {
  cmd.app->add_option("--config", cmd.config_path, "JSON config file (flags override it)");
  cmd.flags.add<std::vector<std::string>>(cmd.app, "--corpus", "corpus file as [label=]path, repeatable",
                                          [](RunConfig& c, const std::vector<std::string>& v) {
                                            c.corpora.clear();
                                            for (const auto& s : v) c.corpora.push_back(parse_corpus_spec(s));
                                          });
  cmd.flags.add<std::string>(cmd.app, "--on-dangling", "error or drop",
                             [](RunConfig& c, const std::string& v) { c = apply_config({{"on_dangling", v}}, c); });
  cmd.flags.add<std::string>(cmd.app, "--out", "output directory (default: $LAWSMELLS_OUT or .)",
                             [](RunConfig& c, const std::string& v) { c.out = v; });
}

void add_detector_flags(Command& cmd) {
  auto& f = cmd.flags;
  auto* app = cmd.app;
  auto number = [&](const std::string& name, const std::string& key, const std::string& desc) {
    f.add<std::size_t>(app, name, desc, [key](RunConfig& c, std::size_t v) { c = apply_config({{key, v}}, c); });
  };
  auto text = [&](const std::string& name, const std::string& key, const std::string& desc) {
    f.add<std::string>(app, name, desc, [key](RunConfig& c, const std::string& v) { c = apply_config({{key, v}}, c); });
  };
  f.add<std::vector<std::string>>(app, "--smell", "smell to run, repeatable (default: all)",
                                  [](RunConfig& c, const std::vector<std::string>& v) {
                                    c = apply_config({{"smells", v}}, c);
                                  })
      ->delimiter(',');
  number("--page-tokens", "page_tokens", "long element threshold in tokens");
  text("--length-kind", "length_kind", "element kind measured for length");
  // The relative rule is edited field by field on top of whatever is set.
  auto relative = [](RunConfig& c) -> RelativeConfig& {
    if (!c.relative) c.relative = RelativeConfig{};
    return *c.relative;
  };
  f.add<std::string>(app, "--relative-scope", "ancestor kind grouping the relative length rule",
                     [relative](RunConfig& c, const std::string& v) { relative(c).scope_kind = v; });
  f.add<std::string>(app, "--relative-mode", "quantile, tokens or max_of_both",
                     [relative](RunConfig& c, const std::string& v) {
                       auto r = relative(c);
                       c = apply_config({{"relative", {{"scope_kind", r.scope_kind}, {"mode", v},
                                                       {"q", r.rule.q}, {"n", r.rule.n}}}}, c);
                     });
  f.add<double>(app, "--relative-q", "quantile of the relative rule", [relative](RunConfig& c, double v) {
    if (!(v > 0.0 && v <= 1.0)) throw Error("--relative-q must lie in (0, 1]");
    relative(c).rule.q = v;
  });
  f.add<std::size_t>(app, "--relative-n", "token count of the relative rule",
                     [relative](RunConfig& c, std::size_t v) {
                       if (v == 0) throw Error("--relative-n must be positive");
                       relative(c).rule.n = v;
                     });
  number("--max-node-tokens", "max_node_tokens", "prune reference graph nodes above this size");
  number("--chain-x", "chain_x", "long reference chain depth threshold");
  number("--size-x", "size_x", "large reference tree size threshold");
  text("--sequence-kind", "sequence_kind", "element kind of the sequence level");
  number("--max-failures", "max_failures", "phrase miner consecutive failure budget");
  number("--min-pair-count", "min_pair_count", "minimum pair count for a merge candidate");
  number("--min-report-len", "min_report_len", "minimum reported phrase length");
  number("--phrase-min-len", "phrase_min_len", "minimum length of a reported/clustered phrase");
  number("--phrase-min-count", "phrase_min_count", "minimum count of a reported/clustered phrase");
  number("--gap", "gap", "character budget between syntax anchors");
  f.add<std::vector<std::string>>(app, "--nlo-type", "entity type counted as NLO, repeatable",
                                  [](RunConfig& c, const std::vector<std::string>& v) {
                                    c = apply_config({{"nlo_types", v}}, c);
                                  })
      ->delimiter(',');
  text("--syntax-catalog", "syntax_catalog", "syntax pattern catalog (JSON)");
  text("--entity-catalog", "entity_catalog", "entity pattern catalog (JSON)");
  text("--committee-registry", "committee_registry", "committee registry (CSV)");
  f.add<std::uint64_t>(app, "--seed", "random seed",
                       [](RunConfig& c, std::uint64_t v) { c = apply_config({{"seed", v}}, c); });
  f.add<std::vector<std::string>>(app, "--fail-on", "<smell>:<count> budget, repeatable",
                                  [](RunConfig& c, const std::vector<std::string>& v) {
                                    c.fail_on.clear();
                                    for (const auto& s : v) c.fail_on.insert(parse_fail_on(s));
                                  });
  number("--jobs", "jobs", "worker threads (0: all cores)");
  f.add_flag(app, "--dump-code-table", "write the final phrase code tables as TSV",
             [](RunConfig& c) { c.dump_code_table = true; });
}

RunConfig resolve(const Command& cmd) {
  RunConfig cfg;
  if (const char* env = std::getenv("LAWSMELLS_OUT"); env && *env) cfg.out = env;
  if (!cmd.config_path.empty()) cfg = load_config(cmd.config_path, cfg);
  cmd.flags.apply(cfg);
  if (cfg.relative && cfg.relative->scope_kind.empty()) {
    throw Error("the relative length rule needs a scope kind (--relative-scope)");
  }
  return cfg;
}

void progress(const std::string& msg) { std::cerr << msg << "\n"; }

int do_ingest(const RunConfig& cfg) {
  if (cfg.corpora.empty()) throw Error("no corpus given (use --corpus)");
  for (const auto& spec : cfg.corpora) {
    LoadReport rep;
    auto s = load_snapshot(spec.path, cfg.on_dangling, &rep);
    progress("ok " + spec.path + ": label " + (spec.label.empty() ? s.label() : spec.label) + ", " +
             std::to_string(s.size()) + " elements, " + std::to_string(s.references().size()) +
             " references, " + std::to_string(s.total_tokens()) + " tokens, " +
             std::to_string(rep.dropped_references) + " dangling references dropped");
  }
  return kExitOk;
}

int do_detect(const RunConfig& cfg) {
  if (cfg.corpora.empty()) throw Error("no corpus given (use --corpus)");
  const auto catalogs = load_catalogs(cfg);
  const auto fp = fingerprint(cfg, catalogs);
  const auto snapshots = load_corpora(cfg);
  const auto outputs = analyze_all(snapshots, cfg, catalogs, fp);
  const auto report = build_report(outputs, cfg, fp);
  const auto written = export_report(report, ExportFormat::json, cfg.out);
  for (const auto& p : written) progress("wrote " + p.string());
  if (cfg.dump_code_table) {
    for (const auto& o : outputs) {
      for (const auto& [scope, result] : o.code_tables) {
        const auto path = fs::path(cfg.out) / ("codetable_" + o.label + "_" + scope + ".tsv");
        std::ofstream out(path);
        if (!out) throw Error("cannot write " + path.string());
        write_code_table(out, result);
        progress("wrote " + path.string());
      }
    }
  }
  const auto counts = count_by_kind(report.findings);
  for (auto k : kAllSmells) {
    auto it = counts.find(k);
    progress(std::string(to_string(k)) + ": " + std::to_string(it == counts.end() ? 0 : it->second));
  }
  int status = kExitOk;
  for (const auto& [kind, budget] : cfg.fail_on) {
    auto it = counts.find(kind);
    const auto n = it == counts.end() ? 0 : it->second;
    if (n > budget) {
      progress("budget exceeded: " + std::string(to_string(kind)) + " " + std::to_string(n) + " > " +
               std::to_string(budget));
      status = kExitOverBudget;
    }
  }
  return status;
}

int do_sample(const RunConfig& cfg, const std::string& pattern, const std::string& out_file) {
  if (cfg.corpora.empty()) throw Error("no corpus given (use --corpus)");
  const auto catalogs = load_catalogs(cfg);
  std::vector<SyntaxMatch> pool;
  for (const auto& s : load_corpora(cfg)) {
    for (auto& m : find_matches(s, catalogs.syntax)) {
      if (pattern.empty() || m.pattern == pattern) pool.push_back(std::move(m));
    }
  }
  if (pool.empty()) throw Error("no syntax candidates to sample");
  const auto sample = sample_candidates(pool, cfg.sample_n, cfg.seed);
  fs::path path = out_file.empty() ? fs::path(cfg.out) / "review_sheet.csv" : fs::path(out_file);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_review_sheet(out, sample);
  progress("sampled " + std::to_string(sample.size()) + " of " + std::to_string(pool.size()) +
           " candidates into " + path.string());
  return kExitOk;
}

int do_icicle(const RunConfig& cfg, const std::string& root, const std::string& out_file) {
  if (cfg.corpora.size() != 1) throw Error("icicle needs exactly one --corpus");
  const auto snapshots = load_corpora(cfg);
  const auto tree = icicle_tree(snapshots.front(), root);
  fs::path path = out_file.empty() ? fs::path(cfg.out) / ("icicle_" + root + ".json") : fs::path(out_file);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(tree).dump(1) << "\n";
  progress("wrote " + path.string());
  return kExitOk;
}

int do_report(const std::string& input, const std::string& format, const std::string& out_dir,
              const std::string& bundle) {
  const auto report = load_report(input);
  std::optional<fs::path> viewer;
  if (!bundle.empty()) viewer = bundle;
  const auto written = export_report(report, export_format_from_string(format), out_dir, viewer);
  for (const auto& p : written) progress("wrote " + p.string());
  return kExitOk;
}

}  // namespace

std::vector<Snapshot> load_corpora(const RunConfig& cfg) {
  std::vector<Snapshot> out;
  for (const auto& spec : cfg.corpora) {
    progress("loading " + spec.path);
    LoadReport rep;
    auto s = load_snapshot(spec.path, cfg.on_dangling, &rep);
    if (rep.dropped_references > 0) {
      progress("dropped " + std::to_string(rep.dropped_references) + " dangling references");
    }
    if (!spec.label.empty() && spec.label != s.label()) {
      s = Snapshot::build(spec.label, s.roots(), s.elements(), s.references());
    }
    out.push_back(std::move(s));
  }
  return out;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Detect law smells in hierarchical legal corpora", "lawsmells"};
  app.require_subcommand(1);

  Command ingest{app.add_subcommand("ingest", "validate corpus files"), {}, {}};
  add_corpus_flags(ingest);

  Command detect{app.add_subcommand("detect", "run smell detectors and write report.json"), {}, {}};
  add_corpus_flags(detect);
  add_detector_flags(detect);

  Command sample{app.add_subcommand("sample", "write a review sheet of sampled syntax candidates"), {}, {}};
  add_corpus_flags(sample);
  sample.flags.add<std::size_t>(sample.app, "--n", "sample size",
                                [](RunConfig& c, std::size_t v) { c = apply_config({{"sample_n", v}}, c); });
  sample.flags.add<std::uint64_t>(sample.app, "--seed", "random seed",
                                  [](RunConfig& c, std::uint64_t v) { c = apply_config({{"seed", v}}, c); });
  sample.flags.add<std::size_t>(sample.app, "--gap", "character budget between syntax anchors",
                                [](RunConfig& c, std::size_t v) { c = apply_config({{"gap", v}}, c); });
  sample.flags.add<std::string>(sample.app, "--syntax-catalog", "syntax pattern catalog (JSON)",
                                [](RunConfig& c, const std::string& v) { c = apply_config({{"syntax_catalog", v}}, c); });
  std::string sample_pattern, sample_file;
  sample.app->add_option("--pattern", sample_pattern, "only sample this pattern");
  sample.app->add_option("--sheet", sample_file, "review sheet path (default: <out>/review_sheet.csv)");

  Command icicle{app.add_subcommand("icicle", "export the icicle tree below a root"), {}, {}};
  add_corpus_flags(icicle);
  std::string icicle_root, icicle_file;
  icicle.app->add_option("--root", icicle_root, "element id")->required();
  icicle.app->add_option("--file", icicle_file, "output path (default: <out>/icicle_<root>.json)");

  auto* report = app.add_subcommand("report", "export a report as json, csv-bundle or html");
  std::string report_input, report_format = "html", report_out, report_bundle;
  report->add_option("--input", report_input, "report.json or an exported page")->required();
  report->add_option("--format", report_format, "json, csv-bundle or html");
  report->add_option("--out", report_out, "output directory (default: $LAWSMELLS_OUT or .)");
  report->add_option("--viewer-bundle", report_bundle, "viewer script replacing the built-in one");

  std::vector<std::string> argv_store = {"lawsmells"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (ingest.app->parsed()) return do_ingest(resolve(ingest));
    if (detect.app->parsed()) return do_detect(resolve(detect));
    if (sample.app->parsed()) return do_sample(resolve(sample), sample_pattern, sample_file);
    if (icicle.app->parsed()) return do_icicle(resolve(icicle), icicle_root, icicle_file);
    if (report->parsed()) {
      if (report_out.empty()) {
        const char* env = std::getenv("LAWSMELLS_OUT");
        report_out = env && *env ? env : ".";
      }
      return do_report(report_input, report_format, report_out, report_bundle);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const json::exception& e) {
    std::cerr << "error: invalid JSON input: " << e.what() << "\n";
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace lawsmells::cli
