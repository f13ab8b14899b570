#include "lawsmells/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>

namespace lawsmells {

namespace {

void detect_lengths(const Snapshot& s, const RunConfig& cfg, SnapshotOutputs& out) {
  out.lengths = measure_lengths(s, cfg.length_kind);
  if (!out.lengths.empty()) out.ccdf = ccdf(out.lengths);
  for (const auto& r : s.roots()) out.icicles.push_back(icicle_tree(s, r));
  if (!cfg.enabled(SmellKind::long_element)) return;
  std::vector<SmellFinding> found;
  if (cfg.relative) {
    found = flag_long_relative(s, out.lengths, cfg.relative->scope_kind, cfg.relative->rule);
  } else {
    found = flag_long_absolute(s, out.lengths, cfg.page_tokens);
  }
  out.findings.insert(out.findings.end(), found.begin(), found.end());
}

void detect_syntax(const Snapshot& s, const Catalogs& catalogs, SnapshotOutputs& out) {
  const auto matches = find_matches(s, catalogs.syntax);
  out.pattern_counts = pattern_counts(s, catalogs.syntax, matches);
  auto found = syntax_findings(matches);
  out.findings.insert(out.findings.end(), found.begin(), found.end());
}

void detect_trees(const Snapshot& s, const RunConfig& cfg, SnapshotOutputs& out) {
  TreeConfig tc;
  tc.max_node_tokens = cfg.max_node_tokens;
  tc.chain_x = cfg.chain_x;
  tc.size_x = cfg.size_x;
  tc.sequence_kind = cfg.sequence_kind;
  const auto g = build_prepared_graph(s, tc);
  auto scan = scan_trees(g, tc);
  out.trees = std::move(scan.trees);
  out.tree_histogram = std::move(scan.histogram);
  if (cfg.enabled(SmellKind::large_reference_tree)) {
    out.findings.insert(out.findings.end(), scan.large_trees.begin(), scan.large_trees.end());
  }
  if (cfg.enabled(SmellKind::long_reference_chain)) {
    out.findings.insert(out.findings.end(), scan.long_chains.begin(), scan.long_chains.end());
  }
}

void detect_nlo(const Snapshot& s, const RunConfig& cfg, const Catalogs& catalogs, SnapshotOutputs& out) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& e = s.at(i);
    if (e.text.empty()) continue;
    const auto mentions = catalogs.entities.extract(e.text, cfg.nlo_types, e.id);
    if (mentions.empty()) continue;
    SmellFinding f;
    f.kind = SmellKind::nlo;
    f.snapshot = s.label();
    f.element = e.id;
    f.order = i;
    f.metrics["mentions"] = static_cast<double>(mentions.size());
    for (const auto& m : mentions) f.metrics[std::string(to_string(m.type))] += 1.0;
    f.excerpt = excerpt_around(e.text, mentions.front().span);
    out.findings.push_back(std::move(f));
  }
  out.density = entity_density(s, cfg.nlo_types, catalogs.entities);
}

void detect_phrases(const Snapshot& s, const RunConfig& cfg, const Catalogs& catalogs, SnapshotOutputs& out) {
  DupexConfig dc;
  dc.max_failures = cfg.max_failures;
  dc.min_pair_count = cfg.min_pair_count;
  dc.min_report_len = cfg.min_report_len;
  dc.seed = cfg.seed;
  std::vector<DupexScope> scopes;
  std::vector<ScopePhrases> for_profiles;
  for (const auto& root : s.roots()) {
    DupexScope scope;
    scope.scope = root;
    const auto stream = parametrized_tokens(s, root, true, catalogs.entities);
    scope.stream_tokens = stream.size();
    if (!stream.empty()) {
      auto result = run_dupex(stream, dc);
      scope.baseline_bits = result.baseline_bits;
      scope.final_bits = result.final_bits;
      scope.compression_percent = result.compression_percent;
      scope.phrases = result.phrases;
      const auto root_index = s.index_of(root);
      for (const auto& p : scope.phrases) {
        if (p.terms.size() < cfg.phrase_min_len || p.abs_count < cfg.phrase_min_count) continue;
        SmellFinding f;
        f.kind = SmellKind::duplicated_phrase;
        f.snapshot = s.label();
        f.element = root;
        f.order = root_index;
        f.metrics = {{"length", static_cast<double>(p.terms.size())},
                     {"abs_count", static_cast<double>(p.abs_count)},
                     {"rel_per_1000", p.rel_per_1000},
                     {"bits_gained", p.bits_gained}};
        f.excerpt = p.text();
        out.findings.push_back(std::move(f));
      }
      std::size_t eligible = 0;
      for (const auto& p : scope.phrases) {
        if (p.terms.size() >= cfg.phrase_min_len && p.abs_count >= cfg.phrase_min_count) ++eligible;
      }
      if (eligible >= 2) scope.clustering = cluster_phrases(scope.phrases, cfg.phrase_min_len, cfg.phrase_min_count);
      if (cfg.dump_code_table) out.code_tables.emplace_back(root, std::move(result));
    }
    for_profiles.push_back({root, scope.phrases});
    scopes.push_back(std::move(scope));
  }
  out.committees = committee_profiles(for_profiles, s, catalogs.registry ? &*catalogs.registry : nullptr,
                                      catalogs.entities);
  out.dupex = std::move(scopes);
}

}  // namespace

SnapshotOutputs analyze_snapshot(const Snapshot& s, const RunConfig& cfg, const Catalogs& catalogs,
                                 const std::string& fingerprint) {
  SnapshotOutputs out;
  out.label = s.label();
  out.fingerprint = fingerprint;
  out.total_tokens = s.total_tokens();
  detect_lengths(s, cfg, out);
  if (cfg.enabled(SmellKind::ambiguous_syntax)) detect_syntax(s, catalogs, out);
  if (cfg.enabled(SmellKind::large_reference_tree) || cfg.enabled(SmellKind::long_reference_chain)) {
    detect_trees(s, cfg, out);
  }
  if (cfg.enabled(SmellKind::nlo)) detect_nlo(s, cfg, catalogs, out);
  if (cfg.enabled(SmellKind::duplicated_phrase)) detect_phrases(s, cfg, catalogs, out);
  return out;
}

std::vector<SnapshotOutputs> analyze_all(const std::vector<Snapshot>& snapshots, const RunConfig& cfg,
                                         const Catalogs& catalogs, const std::string& fingerprint) {
  std::vector<SnapshotOutputs> out(snapshots.size());
  std::size_t workers = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(1, snapshots.size()));

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr failure;
  auto work = [&] {
    for (auto i = next++; i < snapshots.size(); i = next++) {
      try {
        {
          std::lock_guard lock(log_mutex);
          std::cerr << "analyzing snapshot " << snapshots[i].label() << "\n";
        }
        out[i] = analyze_snapshot(snapshots[i], cfg, catalogs, fingerprint);
      } catch (...) {
        std::lock_guard lock(log_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace lawsmells
