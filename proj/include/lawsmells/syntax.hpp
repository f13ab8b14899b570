#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lawsmells/corpus.hpp"
#include "lawsmells/finding.hpp"

namespace lawsmells {

enum class PatternClass { cooccurrence, negation, opposition, redundant };

std::string_view to_string(PatternClass c);
PatternClass pattern_class_from_string(std::string_view name);

/// Alternatives for the left anchor and, optionally, the right anchor.
/// Anchors are literals matched on whole-word bounds; a space inside an
/// anchor matches any whitespace run and "/" may be padded by whitespace.
struct PatternForm {
  std::vector<std::string> left;
  std::vector<std::string> right;  // empty: the left anchor alone is a match
};

struct SyntaxPattern {
  std::string name;
  std::vector<PatternForm> forms;
  /// Characters allowed between the end of the left anchor and the start of
  /// the right anchor.
  std::size_t gap = 50;
  PatternClass cls = PatternClass::cooccurrence;
};

/// Catalog entries sharing a name merge into one pattern with several forms.
std::vector<SyntaxPattern> syntax_catalog_from_json(const nlohmann::json& j);
std::vector<SyntaxPattern> load_syntax_catalog(const std::filesystem::path& path);
std::vector<SyntaxPattern> builtin_syntax_catalog();
nlohmann::json to_json(const std::vector<SyntaxPattern>& catalog);

/// Overrides every pattern's gap.
void set_gap(std::vector<SyntaxPattern>& catalog, std::size_t gap);

/// Position of a whole-word anchor occurrence at or after `from`.
struct AnchorHit {
  std::size_t begin = std::string_view::npos;
  std::size_t end = 0;
  bool found() const { return begin != std::string_view::npos; }
};
AnchorHit find_anchor(std::string_view lowered, std::string_view anchor, std::size_t from);
/// Same, restricted to occurrences beginning at or before `max_begin`.
AnchorHit find_anchor(std::string_view lowered, std::string_view anchor, std::size_t from,
                      std::size_t max_begin);

/// Non-overlapping matches of one pattern in lowercased text, left to right,
/// shortest match at each start.
std::vector<Span> match_pattern(const SyntaxPattern& p, std::string_view lowered);

/// Does `text` as a whole form exactly one match of `p`?
bool rematches(const SyntaxPattern& p, std::string_view text);

struct SyntaxMatch {
  std::string pattern;
  std::string element;
  Span span;  // into the element's own text
  std::string excerpt;
  std::string snapshot;
  std::size_t order = 0;  // document position of the element
};

/// Document order, then offset, then catalog order.
std::vector<SyntaxMatch> find_matches(const Snapshot& s, const std::vector<SyntaxPattern>& catalog);

struct PatternCount {
  std::string pattern;
  std::string scope;  // "*" for the whole snapshot, else a root id
  std::size_t abs = 0;
  std::size_t tokens = 0;
  std::optional<double> per_1000;  // absent for zero-token scopes
};

/// Counts per pattern for the whole snapshot and for every root.
std::vector<PatternCount> pattern_counts(const Snapshot& s, const std::vector<SyntaxPattern>& catalog,
                                         const std::vector<SyntaxMatch>& matches);
std::vector<PatternCount> pattern_counts(const Snapshot& s, const std::vector<SyntaxPattern>& catalog);

/// Uniform sample without replacement (all matches if fewer than n), in input
/// order. Throws Error on an empty list or n == 0.
std::vector<SyntaxMatch> sample_candidates(const std::vector<SyntaxMatch>& matches, std::size_t n,
                                           std::uint64_t seed);

/// Review sheet CSV: pattern, location, excerpt, verdict (left empty).
void write_review_sheet(std::ostream& out, const std::vector<SyntaxMatch>& sample);

std::vector<SmellFinding> syntax_findings(const std::vector<SyntaxMatch>& matches);

nlohmann::json to_json(const SyntaxMatch& m);

}  // namespace lawsmells
