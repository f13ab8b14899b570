#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lawsmells/corpus.hpp"
#include "lawsmells/finding.hpp"

namespace lawsmells {

struct LengthRecord {
  std::string id;
  std::string kind;
  std::size_t inclusive_tokens = 0;
  std::optional<std::string> heading;
  std::vector<std::string> ancestors;  // root first, parent last
  std::size_t order = 0;               // document position
};

/// One record per element of `kind`, document order. An unknown kind yields
/// an empty list and a warning on stderr.
std::vector<LengthRecord> measure_lengths(const Snapshot& s, std::string_view kind);

/// Records sorted by length descending (document order breaks ties).
std::vector<LengthRecord> top_k(std::vector<LengthRecord> records, std::size_t k);

/// Flags records with inclusive_tokens strictly above `threshold`.
std::vector<SmellFinding> flag_long_absolute(const Snapshot& s,
                                             const std::vector<LengthRecord>& records,
                                             std::size_t threshold = 500);

struct CcdfPoint {
  std::size_t length = 0;
  double fraction = 0.0;  // share of records strictly longer than `length`
};

/// Step points at every distinct length, ascending. Throws Error on empty input.
std::vector<CcdfPoint> ccdf(const std::vector<LengthRecord>& records);
void write_ccdf_csv(std::ostream& out, const std::vector<CcdfPoint>& points);

/// Lower nearest-rank quantile: the k-th smallest value with
/// k = max(1, floor(q * n)). Always an observed value. Throws on empty input
/// or q outside (0, 1].
std::size_t nearest_rank(std::vector<std::size_t> values, double q);

struct RelativeRule {
  enum class Mode { quantile, tokens, max_of_both };
  Mode mode = Mode::quantile;
  double q = 0.9;
  std::size_t n = 500;
};

/// Groups records by their nearest ancestor of `scope_kind` and flags those
/// strictly above the group threshold. Throws Error for a record without
/// such an ancestor.
std::vector<SmellFinding> flag_long_relative(const Snapshot& s,
                                             const std::vector<LengthRecord>& records,
                                             std::string_view scope_kind, const RelativeRule& rule);

struct IcicleNode {
  std::string id;
  std::optional<std::string> heading;
  std::size_t size = 0;
  std::vector<IcicleNode> children;
};

/// Full subtree under `root` with inclusive token sizes.
IcicleNode icicle_tree(const Snapshot& s, std::string_view root);

nlohmann::json to_json(const IcicleNode& n);
IcicleNode icicle_from_json(const nlohmann::json& j);

}  // namespace lawsmells
