#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lawsmells/config.hpp"
#include "lawsmells/dupex.hpp"
#include "lawsmells/entities.hpp"
#include "lawsmells/lengths.hpp"
#include "lawsmells/refgraph.hpp"
#include "lawsmells/syntax.hpp"

namespace lawsmells {

struct DupexScope {
  std::string scope;  // root element id
  std::size_t stream_tokens = 0;
  double baseline_bits = 0.0;
  double final_bits = 0.0;
  double compression_percent = 0.0;
  std::vector<DupexPhrase> phrases;  // length >= min_report_len
  std::optional<PhraseClustering> clustering;
};

/// Everything the detectors produced for one snapshot.
struct SnapshotOutputs {
  std::string label;
  std::string fingerprint;
  std::size_t total_tokens = 0;
  std::vector<SmellFinding> findings;
  std::vector<LengthRecord> lengths;
  std::vector<CcdfPoint> ccdf;
  std::vector<IcicleNode> icicles;  // one per root
  std::optional<std::vector<TreeSummary>> trees;
  std::map<std::pair<std::string, std::size_t>, std::size_t> tree_histogram;
  std::optional<std::vector<PatternCount>> pattern_counts;
  std::optional<DensityMatrix> density;
  std::optional<std::vector<DupexScope>> dupex;
  std::optional<CommitteeProfile> committees;
  /// Final code tables by scope, kept only when requested.
  std::vector<std::pair<std::string, DupexResult>> code_tables;
};

SnapshotOutputs analyze_snapshot(const Snapshot& s, const RunConfig& cfg, const Catalogs& catalogs,
                                 const std::string& fingerprint);

/// Runs analyze_snapshot over all snapshots on up to cfg.jobs threads; the
/// result keeps the input order.
std::vector<SnapshotOutputs> analyze_all(const std::vector<Snapshot>& snapshots, const RunConfig& cfg,
                                         const Catalogs& catalogs, const std::string& fingerprint);

}  // namespace lawsmells
