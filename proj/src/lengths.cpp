#include "lawsmells/lengths.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

#include "lawsmells/csv.hpp"

namespace lawsmells {

using nlohmann::json;

namespace {

std::string short_excerpt(const Snapshot& s, std::size_t index) {
  const auto& e = s.at(index);
  if (e.heading && !e.heading->empty()) return *e.heading;
  auto text = element_text(s, e.id, true);
  return excerpt_around(text, {0, std::min<std::size_t>(text.size(), 80)}, 0);
}

SmellFinding long_finding(const Snapshot& s, const LengthRecord& r, std::size_t threshold) {
  SmellFinding f;
  f.kind = SmellKind::long_element;
  f.snapshot = s.label();
  f.element = r.id;
  f.order = r.order;
  f.metrics = {{"tokens", static_cast<double>(r.inclusive_tokens)},
               {"threshold", static_cast<double>(threshold)}};
  f.excerpt = short_excerpt(s, r.order);
  return f;
}

}  // namespace

std::vector<LengthRecord> measure_lengths(const Snapshot& s, std::string_view kind) {
  std::vector<LengthRecord> out;
  for (auto i : s.elements_of_kind(kind)) {
    LengthRecord r;
    const auto& e = s.at(i);
    r.id = e.id;
    r.kind = e.kind;
    r.inclusive_tokens = s.inclusive_tokens(i);
    r.heading = e.heading;
    r.order = i;
    for (auto p = s.parent_index(i); p != Snapshot::npos; p = s.parent_index(p)) {
      r.ancestors.push_back(s.at(p).id);
    }
    std::reverse(r.ancestors.begin(), r.ancestors.end());
    out.push_back(std::move(r));
  }
  if (out.empty()) {
    std::cerr << "warning: no elements of kind '" << kind << "' in snapshot '" << s.label() << "'\n";
  }
  return out;
}

std::vector<LengthRecord> top_k(std::vector<LengthRecord> records, std::size_t k) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.inclusive_tokens > b.inclusive_tokens;
  });
  if (records.size() > k) records.resize(k);
  return records;
}

std::vector<SmellFinding> flag_long_absolute(const Snapshot& s,
                                             const std::vector<LengthRecord>& records,
                                             std::size_t threshold) {
  if (threshold == 0) throw Error("page threshold must be positive");
  std::vector<SmellFinding> out;
  for (const auto& r : records) {
    if (r.inclusive_tokens > threshold) out.push_back(long_finding(s, r, threshold));
  }
  return out;
}

std::vector<CcdfPoint> ccdf(const std::vector<LengthRecord>& records) {
  if (records.empty()) throw Error("ccdf of an empty record list");
  std::vector<std::size_t> lengths;
  for (const auto& r : records) lengths.push_back(r.inclusive_tokens);
  std::sort(lengths.begin(), lengths.end());
  const auto n = static_cast<double>(lengths.size());
  std::vector<CcdfPoint> out;
  for (auto it = lengths.begin(); it != lengths.end();) {
    auto next = std::upper_bound(it, lengths.end(), *it);
    const auto above = static_cast<double>(lengths.end() - next);
    out.push_back({*it, above / n});
    it = next;
  }
  return out;
}

void write_ccdf_csv(std::ostream& out, const std::vector<CcdfPoint>& points) {
  csv::RowWriter w(out);
  w.text("length").text("fraction").end();
  for (const auto& p : points) w.integer(static_cast<long long>(p.length)).number(p.fraction).end();
}

std::size_t nearest_rank(std::vector<std::size_t> values, double q) {
  if (values.empty()) throw Error("quantile of an empty group");
  if (!(q > 0.0 && q <= 1.0)) throw Error("quantile must lie in (0, 1]");
  std::sort(values.begin(), values.end());
  auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(values.size()) + 1e-9));
  k = std::clamp<std::size_t>(k, 1, values.size());
  return values[k - 1];
}

std::vector<SmellFinding> flag_long_relative(const Snapshot& s,
                                             const std::vector<LengthRecord>& records,
                                             std::string_view scope_kind, const RelativeRule& rule) {
  std::map<std::size_t, std::vector<const LengthRecord*>> groups;  // by scope position
  for (const auto& r : records) {
    const auto idx = s.index_of(r.id);
    const auto parent = idx == Snapshot::npos ? Snapshot::npos : s.parent_index(idx);
    const auto scope = parent == Snapshot::npos ? Snapshot::npos : s.ancestor_of_kind(parent, scope_kind);
    if (scope == Snapshot::npos) {
      throw Error("element '" + r.id + "' has no ancestor of kind '" + std::string(scope_kind) + "'");
    }
    groups[scope].push_back(&r);
  }
  std::vector<SmellFinding> out;
  for (const auto& [scope, members] : groups) {
    std::size_t threshold = rule.n;
    if (rule.mode != RelativeRule::Mode::tokens) {
      std::vector<std::size_t> values;
      for (const auto* r : members) values.push_back(r->inclusive_tokens);
      const auto qt = nearest_rank(values, rule.q);
      threshold = rule.mode == RelativeRule::Mode::quantile ? qt : std::max(qt, rule.n);
    }
    for (const auto* r : members) {
      if (r->inclusive_tokens > threshold) {
        auto f = long_finding(s, *r, threshold);
        f.annotation = "scope " + s.at(scope).id;
        out.push_back(std::move(f));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.order < b.order; });
  return out;
}

namespace {

IcicleNode icicle_at(const Snapshot& s, std::size_t index) {
  IcicleNode n;
  n.id = s.at(index).id;
  n.heading = s.at(index).heading;
  n.size = s.inclusive_tokens(index);
  for (auto c : s.child_indices(index)) n.children.push_back(icicle_at(s, c));
  return n;
}

}  // namespace

IcicleNode icicle_tree(const Snapshot& s, std::string_view root) {
  const auto idx = s.index_of(root);
  if (idx == Snapshot::npos) throw CorpusError("unknown element id '" + std::string(root) + "'");
  return icicle_at(s, idx);
}

json to_json(const IcicleNode& n) {
  json children = json::array();
  for (const auto& c : n.children) children.push_back(to_json(c));
  return {{"id", n.id},
          {"heading", n.heading ? json(*n.heading) : json(nullptr)},
          {"size", n.size},
          {"children", std::move(children)}};
}

IcicleNode icicle_from_json(const json& j) {
  IcicleNode n;
  n.id = j.at("id").get<std::string>();
  if (j.contains("heading") && !j.at("heading").is_null()) n.heading = j.at("heading").get<std::string>();
  n.size = j.at("size").get<std::size_t>();
  for (const auto& c : j.at("children")) n.children.push_back(icicle_from_json(c));
  return n;
}

}  // namespace lawsmells
