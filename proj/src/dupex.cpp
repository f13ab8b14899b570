#include "lawsmells/dupex.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "lawsmells/entities.hpp"

namespace lawsmells {

namespace {

double xlog2x(std::size_t u) {
  return u == 0 ? 0.0 : static_cast<double>(u) * std::log2(static_cast<double>(u));
}

struct PairHash {
  std::size_t operator()(std::uint64_t k) const { return std::hash<std::uint64_t>{}(k); }
};

std::uint64_t pair_key(SymbolId a, SymbolId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct VectorHash {
  std::size_t operator()(const std::vector<SymbolId>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto s : v) h = (h ^ s) * 1099511628211ull;
    return h;
  }
};

}  // namespace

CodeTable CodeTable::for_stream(std::span<const std::string> tokens,
                                std::vector<SymbolId>* symbols) {
  CodeTable t;
  std::unordered_map<std::string_view, SymbolId> ids;
  if (symbols) symbols->clear();
  for (const auto& tok : tokens) {
    auto [it, fresh] = ids.emplace(tok, static_cast<SymbolId>(t.vocabulary.size()));
    if (fresh) {
      t.vocabulary.push_back(tok);
      t.base_freq.push_back(0);
    }
    ++t.base_freq[it->second];
    if (symbols) symbols->push_back(it->second);
  }
  t.total_base = tokens.size();
  return t;
}

std::vector<SymbolId> CodeTable::expansion(SymbolId s) const {
  if (is_phrase(s)) return phrase(s).terms;
  if (s >= base_count()) throw Error("unknown symbol id");
  return {s};
}

std::vector<std::string> CodeTable::terms(SymbolId s) const {
  std::vector<std::string> out;
  for (auto b : expansion(s)) out.push_back(vocabulary.at(b));
  return out;
}

SymbolId CodeTable::add_phrase(std::vector<SymbolId> terms) {
  const auto id = static_cast<std::uint32_t>(phrases.size());
  phrases.push_back({id, std::move(terms)});
  return static_cast<SymbolId>(base_count() + id);
}

Cover Cover::from_symbols(std::vector<SymbolId> symbols, std::size_t symbol_count) {
  Cover c;
  c.usage.assign(symbol_count, 0);
  for (auto s : symbols) {
    if (s >= symbol_count) throw Error("cover symbol outside the code table");
    ++c.usage[s];
  }
  c.symbols = std::move(symbols);
  return c;
}

double phrase_cost(const CodeTable& table, const Phrase& p) {
  double bits = 2.0 * std::log2(static_cast<double>(p.terms.size()) + 1.0) + 1.0;
  const auto total = static_cast<double>(table.total_base);
  for (auto term : p.terms) {
    if (term >= table.base_count() || table.base_freq[term] == 0) {
      throw Error("phrase term absent from the base frequency table");
    }
    bits += std::log2(total / static_cast<double>(table.base_freq[term]));
  }
  return bits;
}

EncodedLength encoded_length_parts(const Cover& cover, const CodeTable& table) {
  if (cover.usage.size() != table.symbol_count()) {
    throw Error("cover usage does not match the code table");
  }
  EncodedLength out;
  std::size_t total = 0;
  double sum = 0.0;
  for (auto u : cover.usage) {
    total += u;
    sum += xlog2x(u);
  }
  out.data = total == 0 ? 0.0 : xlog2x(total) - sum;
  if (out.data < 0) out.data = 0.0;  // rounding on single-symbol streams
  for (const auto& p : table.phrases) out.table += phrase_cost(table, p);
  return out;
}

double encoded_length(const Cover& cover, const CodeTable& table) {
  return encoded_length_parts(cover, table).total();
}

double baseline_length(const TokenStream& stream) {
  if (stream.empty()) return 0.0;
  std::vector<SymbolId> symbols;
  auto table = CodeTable::for_stream(stream.tokens, &symbols);
  return encoded_length(Cover::from_symbols(std::move(symbols), table.symbol_count()), table);
}

std::vector<std::string> expand(const Cover& cover, const CodeTable& table) {
  std::vector<std::string> out;
  for (auto s : cover.symbols) {
    for (auto b : table.expansion(s)) out.push_back(table.vocabulary.at(b));
  }
  return out;
}

std::size_t nonoverlapping_count(const TokenStream& stream, std::span<const std::string> phrase) {
  return nonoverlapping_count<std::string>(stream.tokens, phrase);
}

std::string DupexPhrase::text() const {
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

namespace {

/// Mutable search state over one stream.
class Miner {
 public:
  Miner(const TokenStream& stream, const DupexConfig& cfg) : cfg_(cfg) {
    std::vector<SymbolId> symbols;
    table_ = CodeTable::for_stream(stream.tokens, &symbols);
    cover_ = Cover::from_symbols(std::move(symbols), table_.symbol_count());
    for (SymbolId s = 0; s < table_.base_count(); ++s) expansions_.push_back({s});
    recompute_totals();
  }

  void run() {
    trace_.push_back(total_);
    std::size_t failures = 0;
    std::unordered_map<std::uint64_t, std::size_t, PairHash> rejected;  // pair -> count
    while (failures < cfg_.max_failures) {
      auto candidates = rank_candidates();
      bool accepted = false;
      for (const auto& cand : candidates) {
        auto key = pair_key(cand.left, cand.right);
        auto it = rejected.find(key);
        if (it != rejected.end() && it->second == cand.count) continue;
        if (try_merge(cand)) {
          accepted = true;
          failures = 0;
          trace_.push_back(total_);
          break;
        }
        rejected[key] = cand.count;
        ++rejections_;
        if (++failures >= cfg_.max_failures) break;
      }
      if (!accepted) break;
    }
  }

  DupexResult finish(const TokenStream& stream, double baseline) && {
    DupexResult r;
    r.stream_tokens = stream.size();
    r.baseline_bits = baseline;
    r.final_bits = encoded_length(cover_, table_);
    r.compression_percent =
        baseline > 0 ? std::max(0.0, 100.0 * (1.0 - r.final_bits / baseline)) : 0.0;
    r.accepted = trace_.size() - 1;
    r.rejected = rejections_;
    r.length_trace = std::move(trace_);
    for (std::size_t k = 0; k < table_.phrases.size(); ++k) {
      const auto& p = table_.phrases[k];
      if (p.terms.size() < cfg_.min_report_len) continue;
      DupexPhrase dp;
      for (auto b : p.terms) dp.terms.push_back(table_.vocabulary[b]);
      dp.abs_count = nonoverlapping_count(stream, dp.terms);
      if (dp.abs_count < 2) continue;
      dp.rel_per_1000 = 1000.0 * static_cast<double>(dp.abs_count) /
                        static_cast<double>(stream.size());
      dp.bits_gained = gains_[k];
      dp.usage = cover_.usage[table_.base_count() + k];
      r.phrases.push_back(std::move(dp));
    }
    r.table = std::move(table_);
    r.cover = std::move(cover_);
    return r;
  }

 private:
  struct Candidate {
    SymbolId left;
    SymbolId right;
    std::size_t count;
  };

  void recompute_totals() {
    auto parts = encoded_length_parts(cover_, table_);
    data_sum_ = 0.0;
    for (auto u : cover_.usage) data_sum_ += xlog2x(u);
    table_bits_ = parts.table;
    total_ = parts.total();
  }

  std::vector<Candidate> rank_candidates() const {
    std::unordered_map<std::uint64_t, std::size_t, PairHash> counts;
    const auto& s = cover_.symbols;
    const auto n = s.size();
    for (std::size_t i = 0; i + 1 < n;) {
      if (s[i] != s[i + 1]) {
        ++counts[pair_key(s[i], s[i + 1])];
        ++i;
        continue;
      }
      // run of identical symbols: floor(len/2) non-overlapping pairs
      std::size_t j = i;
      while (j < n && s[j] == s[i]) ++j;
      counts[pair_key(s[i], s[i])] += (j - i) / 2;
      i = j - 1;
    }
    std::vector<Candidate> out;
    for (const auto& [key, c] : counts) {
      if (c < cfg_.min_pair_count) continue;
      out.push_back({static_cast<SymbolId>(key >> 32), static_cast<SymbolId>(key & 0xffffffffu), c});
    }
    std::sort(out.begin(), out.end(), [&](const Candidate& a, const Candidate& b) {
      if (a.count != b.count) return a.count > b.count;
      return expansion_less(a, b);
    });
    return out;
  }

  // Lexicographic comparison of exp(left) ++ exp(right) by term strings.
  bool expansion_less(const Candidate& a, const Candidate& b) const {
    const auto& al = expansions_[a.left];
    const auto& ar = expansions_[a.right];
    const auto& bl = expansions_[b.left];
    const auto& br = expansions_[b.right];
    const auto alen = al.size() + ar.size();
    const auto blen = bl.size() + br.size();
    for (std::size_t i = 0; i < std::min(alen, blen); ++i) {
      const auto x = i < al.size() ? al[i] : ar[i - al.size()];
      const auto y = i < bl.size() ? bl[i] : br[i - bl.size()];
      if (x == y) continue;
      return table_.vocabulary[x] < table_.vocabulary[y];
    }
    if (alen != blen) return alen < blen;
    // identical expansions from different splits
    return pair_key(a.left, a.right) < pair_key(b.left, b.right);
  }

  bool try_merge(const Candidate& cand) {
    std::vector<SymbolId> merged = expansions_[cand.left];
    merged.insert(merged.end(), expansions_[cand.right].begin(), expansions_[cand.right].end());

    const auto existing = by_expansion_.find(merged);
    const bool fresh = existing == by_expansion_.end();
    const double added_table = fresh ? phrase_cost(table_, Phrase{0, merged}) : 0.0;

    const auto c = cand.count;
    const auto& usage = cover_.usage;
    const auto ux = usage[cand.left];
    const auto uy = usage[cand.right];
    const std::size_t uz = fresh ? 0 : usage[existing->second];

    double sum = data_sum_;
    if (cand.left == cand.right) {
      sum += xlog2x(ux - 2 * c) - xlog2x(ux);
    } else {
      sum += xlog2x(ux - c) - xlog2x(ux) + xlog2x(uy - c) - xlog2x(uy);
    }
    sum += xlog2x(uz + c) - xlog2x(uz);
    const auto new_total_symbols = cover_.symbols.size() - c;
    const double new_data = xlog2x(new_total_symbols) - sum;
    const double new_total = std::max(0.0, new_data) + table_bits_ + added_table;

    // Guard against accepting pure rounding noise.
    if (!(new_total < total_ - 1e-9)) return false;

    SymbolId target;
    if (fresh) {
      target = table_.add_phrase(merged);
      cover_.usage.push_back(0);
      expansions_.push_back(merged);
      by_expansion_.emplace(std::move(merged), target);
      gains_.push_back(0.0);
    } else {
      target = existing->second;
    }
    apply(cand.left, cand.right, target);
    const double before = total_;
    recompute_totals();
    gains_[target - table_.base_count()] += before - total_;
    return true;
  }

  void apply(SymbolId left, SymbolId right, SymbolId target) {
    auto& s = cover_.symbols;
    std::vector<SymbolId> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
      if (i + 1 < s.size() && s[i] == left && s[i + 1] == right) {
        out.push_back(target);
        --cover_.usage[left];
        --cover_.usage[right];
        ++cover_.usage[target];
        i += 2;
      } else {
        out.push_back(s[i]);
        ++i;
      }
    }
    s = std::move(out);
  }

  DupexConfig cfg_;
  CodeTable table_;
  Cover cover_;
  std::vector<std::vector<SymbolId>> expansions_;  // per symbol id
  std::unordered_map<std::vector<SymbolId>, SymbolId, VectorHash> by_expansion_;
  std::vector<double> gains_;  // per phrase
  std::vector<double> trace_;
  std::size_t rejections_ = 0;
  double data_sum_ = 0.0;
  double table_bits_ = 0.0;
  double total_ = 0.0;
};

}  // namespace

DupexResult run_dupex(const TokenStream& stream, const DupexConfig& cfg) {
  if (stream.empty()) throw Error("run_dupex needs a non-empty token stream");
  Miner miner(stream, cfg);
  const double baseline = baseline_length(stream);
  miner.run();
  return std::move(miner).finish(stream, baseline);
}

void write_code_table(std::ostream& out, const DupexResult& result) {
  out << "id\tcount\tbits_gained\texpansion\n";
  for (std::size_t i = 0; i < result.phrases.size(); ++i) {
    const auto& p = result.phrases[i];
    out << i << '\t' << p.abs_count << '\t' << p.bits_gained << '\t' << p.text() << '\n';
  }
}

PhraseClustering cluster_phrases(const std::vector<DupexPhrase>& phrases, std::size_t min_len,
                                 std::size_t min_count) {
  PhraseClustering out;
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    if (phrases[i].terms.size() >= min_len && phrases[i].abs_count >= min_count) {
      out.selected.push_back(i);
    }
  }
  if (out.selected.size() < 2) {
    throw Error("phrase clustering needs at least two phrases after filtering, got " +
                std::to_string(out.selected.size()));
  }
  std::map<std::string, std::size_t> vocab;
  for (auto i : out.selected) {
    for (const auto& t : phrases[i].terms) vocab.emplace(t, 0);
  }
  std::size_t col = 0;
  for (auto& [term, idx] : vocab) idx = col++;
  std::vector<std::vector<double>> vectors;
  for (auto i : out.selected) {
    std::vector<double> v(vocab.size(), 0.0);
    for (const auto& t : phrases[i].terms) v[vocab.at(t)] += 1.0;
    vectors.push_back(std::move(v));
  }
  auto d = pairwise(vectors, [](const auto& a, const auto& b) { return cosine_distance(a, b); });
  out.dendrogram = agglomerate(d, Linkage::ward);
  return out;
}

std::vector<CompressionPoint> compression_series(const std::vector<Snapshot>& snapshots,
                                                 std::string_view selector,
                                                 const DupexConfig& cfg) {
  std::vector<CompressionPoint> out;
  const auto catalog = EntityCatalog::builtin();
  for (const auto& s : snapshots) {
    CompressionPoint p{s.label(), std::nullopt};
    if (s.contains(selector)) {
      auto stream = parametrized_tokens(s, selector, true, catalog);
      p.percent = stream.empty() ? 0.0 : run_dupex(stream, cfg).compression_percent;
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace lawsmells
