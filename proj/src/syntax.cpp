#include "lawsmells/syntax.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>

#include "lawsmells/csv.hpp"

namespace lawsmells {

using nlohmann::json;

namespace {

bool is_word(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Length of the anchor match at `i`, or npos.
std::size_t match_at(std::string_view text, std::string_view anchor, std::size_t i) {
  std::size_t t = i;
  for (std::size_t a = 0; a < anchor.size(); ++a) {
    const char c = anchor[a];
    if (c == ' ') {
      if (t >= text.size() || !is_ws(text[t])) return std::string_view::npos;
      while (t < text.size() && is_ws(text[t])) ++t;
    } else if (c == '/') {
      while (t < text.size() && is_ws(text[t])) ++t;
      if (t >= text.size() || text[t] != '/') return std::string_view::npos;
      ++t;
      while (t < text.size() && is_ws(text[t])) ++t;
    } else {
      if (t >= text.size() || text[t] != c) return std::string_view::npos;
      ++t;
    }
  }
  return t - i;
}

struct Cand {
  std::size_t form;
  std::size_t alt;
  AnchorHit hit;
};

}  // namespace

std::string_view to_string(PatternClass c) {
  switch (c) {
    case PatternClass::cooccurrence: return "cooccurrence";
    case PatternClass::negation: return "negation";
    case PatternClass::opposition: return "opposition";
    case PatternClass::redundant: return "redundant";
  }
  return "cooccurrence";
}

PatternClass pattern_class_from_string(std::string_view name) {
  for (auto c : {PatternClass::cooccurrence, PatternClass::negation, PatternClass::opposition,
                 PatternClass::redundant}) {
    if (to_string(c) == name) return c;
  }
  throw Error("unknown pattern class '" + std::string(name) + "'");
}

AnchorHit find_anchor(std::string_view lowered, std::string_view anchor, std::size_t from) {
  return find_anchor(lowered, anchor, from, std::string_view::npos);
}

AnchorHit find_anchor(std::string_view lowered, std::string_view anchor, std::size_t from,
                      std::size_t max_begin) {
  if (anchor.empty()) return {};
  const bool word_start = is_word(anchor.front());
  const bool word_end = is_word(anchor.back());
  const char first = anchor.front();
  for (auto i = lowered.find(first, from); i != std::string_view::npos && i <= max_begin;
       i = lowered.find(first, i + 1)) {
    if (word_start && i > 0 && is_word(lowered[i - 1])) continue;
    const auto len = match_at(lowered, anchor, i);
    if (len == std::string_view::npos) continue;
    const auto end = i + len;
    if (word_end && end < lowered.size() && is_word(lowered[end])) continue;
    return {i, end};
  }
  return {};
}

std::vector<Span> match_pattern(const SyntaxPattern& p, std::string_view lowered) {
  std::vector<Span> out;
  // Cached next occurrence of every left alternative.
  std::vector<Cand> left;
  for (std::size_t f = 0; f < p.forms.size(); ++f) {
    for (std::size_t a = 0; a < p.forms[f].left.size(); ++a) left.push_back({f, a, {}});
  }
  for (auto& c : left) c.hit = find_anchor(lowered, p.forms[c.form].left[c.alt], 0);

  std::size_t pos = 0;
  while (true) {
    std::size_t b = std::string_view::npos;
    for (auto& c : left) {
      if (c.hit.found() && c.hit.begin < pos) {
        c.hit = find_anchor(lowered, p.forms[c.form].left[c.alt], pos);
      }
      if (c.hit.found()) b = std::min(b, c.hit.begin);
    }
    if (b == std::string_view::npos) break;

    std::size_t best_end = std::string_view::npos;
    for (const auto& c : left) {
      if (!c.hit.found() || c.hit.begin != b) continue;
      const auto& form = p.forms[c.form];
      if (form.right.empty()) {
        best_end = std::min(best_end, c.hit.end);
        continue;
      }
      for (const auto& r : form.right) {
        const auto hit = find_anchor(lowered, r, c.hit.end, c.hit.end + p.gap);
        if (hit.found()) best_end = std::min(best_end, hit.end);
      }
    }
    if (best_end == std::string_view::npos) {
      pos = b + 1;
      continue;
    }
    out.push_back({b, best_end});
    pos = best_end;
  }
  return out;
}

bool rematches(const SyntaxPattern& p, std::string_view text) {
  const auto lowered = ascii_lower(text);
  const auto m = match_pattern(p, lowered);
  return m.size() == 1 && m[0] == Span{0, lowered.size()};
}

namespace {

std::vector<SyntaxPattern> parse_catalog(const json& j) {
  const json& list = j.is_object() ? j.at("patterns") : j;
  if (!list.is_array()) throw Error("syntax catalog must be a JSON array of patterns");
  std::vector<SyntaxPattern> out;
  for (const auto& e : list) {
    const auto name = e.at("name").get<std::string>();
    PatternForm form;
    form.left = e.at("left").get<std::vector<std::string>>();
    if (e.contains("right") && !e.at("right").is_null()) {
      form.right = e.at("right").get<std::vector<std::string>>();
    }
    if (form.left.empty()) throw Error("syntax pattern '" + name + "' has no left anchor");
    for (const auto& a : form.left) {
      if (a.empty()) throw Error("syntax pattern '" + name + "' has an empty anchor");
    }
    for (const auto& a : form.right) {
      if (a.empty()) throw Error("syntax pattern '" + name + "' has an empty anchor");
    }
    const auto gap = e.value("gap", 50);
    if (gap < 0) throw Error("syntax pattern '" + name + "' has a negative gap");
    const auto cls = pattern_class_from_string(e.value("class", std::string("cooccurrence")));
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.name == name; });
    if (it == out.end()) {
      out.push_back({name, {std::move(form)}, static_cast<std::size_t>(gap), cls});
    } else {
      it->forms.push_back(std::move(form));
    }
  }
  return out;
}

}  // namespace

std::vector<SyntaxPattern> syntax_catalog_from_json(const json& j) {
  try {
    return parse_catalog(j);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed syntax catalog: ") + e.what());
  }
}

std::vector<SyntaxPattern> load_syntax_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open syntax catalog " + path.string());
  try {
    return syntax_catalog_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error("malformed syntax catalog " + path.string() + ": " + e.what());
  }
}

std::vector<SyntaxPattern> builtin_syntax_catalog() {
  using C = PatternClass;
  const std::vector<std::string> ops = {"and", "or"};
  return {
      {"and...and", {{{"and"}, {"and"}}}, 50, C::cooccurrence},
      {"or...or", {{{"or"}, {"or"}}}, 50, C::cooccurrence},
      {"and...or|or...and", {{{"and"}, {"or"}}, {{"or"}, {"and"}}}, 50, C::cooccurrence},
      {"no...(and|or)", {{{"no"}, ops}}, 50, C::negation},
      {"not...(and|or)", {{{"not"}, ops}}, 50, C::negation},
      {"notwithstanding...(and|or)", {{{"notwithstanding"}, ops}}, 50, C::negation},
      {"(and|or)...but not", {{ops, {"but not"}}}, 50, C::opposition},
      {"(and|or)...except", {{ops, {"except"}}}, 50, C::opposition},
      {"(and|or)...unless", {{ops, {"unless"}}}, 50, C::opposition},
      {"and/or", {{{"and/or"}, {}}}, 50, C::redundant},
      {", or...or both", {{{", or"}, {"or both"}}}, 50, C::redundant},
  };
}

json to_json(const std::vector<SyntaxPattern>& catalog) {
  json out = json::array();
  for (const auto& p : catalog) {
    for (const auto& f : p.forms) {
      out.push_back({{"name", p.name},
                     {"left", f.left},
                     {"right", f.right},
                     {"gap", p.gap},
                     {"class", to_string(p.cls)}});
    }
  }
  return out;
}

void set_gap(std::vector<SyntaxPattern>& catalog, std::size_t gap) {
  for (auto& p : catalog) p.gap = gap;
}

std::vector<SyntaxMatch> find_matches(const Snapshot& s, const std::vector<SyntaxPattern>& catalog) {
  struct Keyed {
    SyntaxMatch m;
    std::size_t pattern_index;
  };
  std::vector<Keyed> all;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& e = s.at(i);
    if (e.text.empty()) continue;
    const auto lowered = ascii_lower(e.text);
    for (std::size_t k = 0; k < catalog.size(); ++k) {
      for (const auto& span : match_pattern(catalog[k], lowered)) {
        all.push_back({{catalog[k].name, e.id, span, excerpt_around(e.text, span), s.label(), i}, k});
      }
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Keyed& a, const Keyed& b) {
    if (a.m.order != b.m.order) return a.m.order < b.m.order;
    if (a.m.span.begin != b.m.span.begin) return a.m.span.begin < b.m.span.begin;
    return a.pattern_index < b.pattern_index;
  });
  std::vector<SyntaxMatch> out;
  out.reserve(all.size());
  for (auto& k : all) out.push_back(std::move(k.m));
  return out;
}

std::vector<PatternCount> pattern_counts(const Snapshot& s, const std::vector<SyntaxPattern>& catalog,
                                         const std::vector<SyntaxMatch>& matches) {
  std::vector<std::pair<std::string, std::size_t>> scopes = {{"*", s.total_tokens()}};
  std::map<std::size_t, std::size_t> scope_of_root;
  for (const auto& r : s.roots()) {
    const auto idx = s.index_of(r);
    scope_of_root[idx] = scopes.size();
    scopes.emplace_back(r, s.inclusive_tokens(idx));
  }
  std::map<std::string, std::size_t> pattern_row;
  for (std::size_t k = 0; k < catalog.size(); ++k) pattern_row.emplace(catalog[k].name, k);

  std::vector<std::vector<std::size_t>> abs(catalog.size(), std::vector<std::size_t>(scopes.size(), 0));
  for (const auto& m : matches) {
    auto it = pattern_row.find(m.pattern);
    if (it == pattern_row.end()) continue;
    ++abs[it->second][0];
    ++abs[it->second][scope_of_root.at(s.root_index(m.order))];
  }
  std::vector<PatternCount> out;
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    for (std::size_t c = 0; c < scopes.size(); ++c) {
      PatternCount pc{catalog[k].name, scopes[c].first, abs[k][c], scopes[c].second, std::nullopt};
      if (pc.tokens > 0) pc.per_1000 = 1000.0 * static_cast<double>(pc.abs) / static_cast<double>(pc.tokens);
      out.push_back(std::move(pc));
    }
  }
  return out;
}

std::vector<PatternCount> pattern_counts(const Snapshot& s, const std::vector<SyntaxPattern>& catalog) {
  return pattern_counts(s, catalog, find_matches(s, catalog));
}

std::vector<SyntaxMatch> sample_candidates(const std::vector<SyntaxMatch>& matches, std::size_t n,
                                           std::uint64_t seed) {
  if (matches.empty()) throw Error("no candidates to sample");
  if (n == 0) throw Error("sample size must be at least 1");
  std::vector<SyntaxMatch> out;
  std::mt19937_64 rng(seed);
  std::sample(matches.begin(), matches.end(), std::back_inserter(out), n, rng);
  return out;
}

void write_review_sheet(std::ostream& out, const std::vector<SyntaxMatch>& sample) {
  csv::RowWriter w(out);
  w.text("pattern").text("location").text("excerpt").text("verdict").end();
  for (const auto& m : sample) {
    const auto location = m.snapshot + ":" + m.element + ":" + std::to_string(m.span.begin) + "-" +
                          std::to_string(m.span.end);
    w.text(m.pattern).text(location).text(m.excerpt).text("").end();
  }
}

std::vector<SmellFinding> syntax_findings(const std::vector<SyntaxMatch>& matches) {
  std::vector<SmellFinding> out;
  for (const auto& m : matches) {
    SmellFinding f;
    f.kind = SmellKind::ambiguous_syntax;
    f.snapshot = m.snapshot;
    f.element = m.element;
    f.span = m.span;
    f.metrics = {{"begin", static_cast<double>(m.span.begin)}, {"end", static_cast<double>(m.span.end)}};
    f.excerpt = m.excerpt;
    f.annotation = m.pattern;
    f.order = m.order;
    out.push_back(std::move(f));
  }
  return out;
}

json to_json(const SyntaxMatch& m) {
  return {{"pattern", m.pattern},
          {"element", m.element},
          {"begin", m.span.begin},
          {"end", m.span.end},
          {"excerpt", m.excerpt},
          {"snapshot", m.snapshot}};
}

}  // namespace lawsmells
