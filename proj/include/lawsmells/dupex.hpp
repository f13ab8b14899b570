#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lawsmells/cluster.hpp"
#include "lawsmells/corpus.hpp"

namespace lawsmells {

using SymbolId = std::uint32_t;

/// A phrase is stored as its base-term expansion; nested phrase ids never
/// appear in `terms`.
struct Phrase {
  std::uint32_t id = 0;
  std::vector<SymbolId> terms;
};

/// Dictionary state of the phrase miner. Symbol ids below base_count() are
/// base terms; symbol base_count()+k is phrases[k].
class CodeTable {
 public:
  /// Builds the base vocabulary (ids in order of first occurrence) and returns
  /// the stream as base symbol ids.
  static CodeTable for_stream(std::span<const std::string> tokens,
                              std::vector<SymbolId>* symbols = nullptr);

  std::size_t base_count() const { return vocabulary.size(); }
  std::size_t symbol_count() const { return vocabulary.size() + phrases.size(); }
  bool is_phrase(SymbolId s) const { return s >= base_count(); }
  const Phrase& phrase(SymbolId s) const { return phrases.at(s - base_count()); }

  /// Base-term expansion of any symbol.
  std::vector<SymbolId> expansion(SymbolId s) const;
  std::vector<std::string> terms(SymbolId s) const;
  std::size_t length(SymbolId s) const { return is_phrase(s) ? phrase(s).terms.size() : 1; }

  /// Appends a phrase and returns its symbol id.
  SymbolId add_phrase(std::vector<SymbolId> terms);

  std::vector<std::string> vocabulary;
  std::vector<std::size_t> base_freq;
  std::size_t total_base = 0;
  std::vector<Phrase> phrases;
};

struct Cover {
  std::vector<SymbolId> symbols;
  std::vector<std::size_t> usage;  // indexed by symbol id

  static Cover from_symbols(std::vector<SymbolId> symbols, std::size_t symbol_count);
  std::size_t length() const { return symbols.size(); }
};

struct EncodedLength {
  double data = 0.0;
  double table = 0.0;
  double total() const { return data + table; }
};

/// Description cost of one phrase in the code table:
/// 2*log2(|p|+1) + 1 + sum over terms of log2(F / f(term)).
double phrase_cost(const CodeTable& table, const Phrase& p);

/// Two-part code length in bits. Throws Error if the cover does not fit the
/// table or a phrase uses a term absent from the base frequencies.
EncodedLength encoded_length_parts(const Cover& cover, const CodeTable& table);
double encoded_length(const Cover& cover, const CodeTable& table);

/// Encoded length of the raw stream under an empty code table.
double baseline_length(const TokenStream& stream);

/// Expands every symbol of the cover back to base terms.
std::vector<std::string> expand(const Cover& cover, const CodeTable& table);

/// Greedy left-to-right count of non-overlapping occurrences.
template <typename T>
std::size_t nonoverlapping_count(std::span<const T> stream, std::span<const T> pattern) {
  if (pattern.empty() || pattern.size() > stream.size()) return 0;
  std::size_t count = 0;
  std::size_t i = 0;
  while (i + pattern.size() <= stream.size()) {
    if (std::equal(pattern.begin(), pattern.end(), stream.begin() + static_cast<std::ptrdiff_t>(i))) {
      ++count;
      i += pattern.size();
    } else {
      ++i;
    }
  }
  return count;
}

std::size_t nonoverlapping_count(const TokenStream& stream, std::span<const std::string> phrase);

struct DupexConfig {
  std::size_t max_failures = 10000;
  std::size_t min_pair_count = 2;
  std::size_t min_report_len = 2;
  /// Carried for interface stability and fingerprinting; the search itself is
  /// deterministic and draws no random numbers.
  std::uint64_t seed = 0;
};

struct DupexPhrase {
  std::vector<std::string> terms;
  std::size_t abs_count = 0;     // greedy non-overlapping count in the input
  double rel_per_1000 = 0.0;     // abs_count per 1,000 input tokens
  double bits_gained = 0.0;      // encoded-length decrease when accepted
  std::size_t usage = 0;         // occurrences in the final cover

  std::string text() const;
};

struct DupexResult {
  std::vector<DupexPhrase> phrases;  // acceptance order
  double baseline_bits = 0.0;
  double final_bits = 0.0;
  double compression_percent = 0.0;
  std::size_t stream_tokens = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// Total encoded length before the first and after every accepted merge.
  std::vector<double> length_trace;
  CodeTable table;
  Cover cover;
};

/// Pair-merge MDL search. Requires a non-empty stream.
DupexResult run_dupex(const TokenStream& stream, const DupexConfig& cfg = {});

/// Tab-separated dump of the final code table: id, count, bits_gained, expansion.
void write_code_table(std::ostream& out, const DupexResult& result);

struct PhraseClustering {
  std::vector<std::size_t> selected;  // indices into the input phrase list
  Dendrogram dendrogram;              // leaves index into `selected`
};

/// Ward clustering of term-count vectors under cosine distance. Throws Error
/// when fewer than two phrases pass the filters.
PhraseClustering cluster_phrases(const std::vector<DupexPhrase>& phrases,
                                 std::size_t min_len = 5, std::size_t min_count = 10);

struct CompressionPoint {
  std::string label;
  std::optional<double> percent;  // absent when the selector does not resolve
};

/// Compression of the placeholder-substituted text below `selector` in each
/// snapshot.
std::vector<CompressionPoint> compression_series(const std::vector<Snapshot>& snapshots,
                                                 std::string_view selector,
                                                 const DupexConfig& cfg = {});

}  // namespace lawsmells
