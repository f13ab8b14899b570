#include "lawsmells/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_set>

namespace lawsmells {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw CorpusError(what); }

}  // namespace

Snapshot Snapshot::build(std::string label, std::vector<std::string> roots,
                         std::vector<Element> elements,
                         std::vector<Reference> references,
                         DanglingPolicy on_dangling, LoadReport* report) {
  std::unordered_map<std::string, std::size_t> by_id;
  by_id.reserve(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].id.empty()) fail("element " + std::to_string(i) + " has an empty id");
    if (!by_id.emplace(elements[i].id, i).second) {
      fail("duplicate element id '" + elements[i].id + "'");
    }
  }

  // Parent links from children lists; every element has at most one parent.
  std::vector<std::size_t> parent_of(elements.size(), npos);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& child : elements[i].children) {
      auto it = by_id.find(child);
      if (it == by_id.end()) {
        fail("element '" + elements[i].id + "' lists unknown child '" + child + "'");
      }
      if (parent_of[it->second] != npos) {
        if (parent_of[it->second] == i) {
          fail("element '" + elements[i].id + "' lists child '" + child + "' twice");
        }
        fail("element '" + child + "' has more than one parent");
      }
      parent_of[it->second] = i;
    }
  }

  std::unordered_set<std::string> root_set;
  for (const auto& r : roots) {
    auto it = by_id.find(r);
    if (it == by_id.end()) fail("unknown root '" + r + "'");
    if (!root_set.insert(r).second) fail("root '" + r + "' listed twice");
    if (parent_of[it->second] != npos) {
      fail("root '" + r + "' is also the child of '" +
           elements[parent_of[it->second]].id + "'");
    }
  }

  // Pre-order traversal from the roots; anything unreached is either part of a
  // cycle or an orphan.
  std::vector<std::size_t> order;
  order.reserve(elements.size());
  std::vector<char> seen(elements.size(), 0);
  for (const auto& r : roots) {
    std::vector<std::size_t> stack{by_id.at(r)};
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      seen[cur] = 1;
      order.push_back(cur);
      const auto& kids = elements[cur].children;
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(by_id.at(*it));
    }
  }
  if (order.size() != elements.size()) {
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (seen[i]) continue;
      // Walk up; a parent chain that never reaches a root loops.
      std::unordered_set<std::size_t> chain;
      std::size_t cur = i;
      while (cur != npos && !seen[cur]) {
        if (!chain.insert(cur).second) {
          fail("hierarchy cycle through element '" + elements[cur].id + "'");
        }
        cur = parent_of[cur];
      }
      fail("element '" + elements[i].id + "' is not reachable from any root");
    }
  }

  Snapshot s;
  s.label_ = std::move(label);
  s.roots_ = std::move(roots);
  s.elements_.reserve(elements.size());
  for (auto idx : order) s.elements_.push_back(std::move(elements[idx]));
  for (std::size_t i = 0; i < s.elements_.size(); ++i) s.index_.emplace(s.elements_[i].id, i);

  const auto n = s.elements_.size();
  s.parent_.assign(n, npos);
  s.children_.assign(n, {});
  s.root_.assign(n, npos);
  s.subtree_end_.assign(n, 0);
  s.depth_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& e = s.elements_[i];
    e.parent.reset();
    for (const auto& c : e.children) {
      auto ci = s.index_.at(c);
      s.children_[i].push_back(ci);
      s.parent_[ci] = i;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (s.parent_[i] == npos) {
      s.root_[i] = i;
    } else {
      s.root_[i] = s.root_[s.parent_[i]];
      s.depth_[i] = s.depth_[s.parent_[i]] + 1;
      s.elements_[i].parent = s.elements_[s.parent_[i]].id;
    }
  }
  s.own_tokens_.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.own_tokens_[i] = tokenize(s.elements_[i].text).size();
  s.inclusive_tokens_ = s.own_tokens_;
  for (std::size_t i = n; i-- > 0;) {
    s.subtree_end_[i] = i + 1;
    for (auto c : s.children_[i]) {
      s.inclusive_tokens_[i] += s.inclusive_tokens_[c];
      s.subtree_end_[i] = std::max(s.subtree_end_[i], s.subtree_end_[c]);
    }
  }

  LoadReport local;
  for (auto& ref : references) {
    const bool has_source = s.index_.count(ref.source) > 0;
    const bool has_target = s.index_.count(ref.target) > 0;
    if (!has_source || !has_target) {
      if (on_dangling == DanglingPolicy::error) {
        fail("dangling reference " + ref.source + " -> " + ref.target);
      }
      ++local.dropped_references;
      continue;
    }
    if (ref.source == ref.target) ++local.self_references;
    s.references_.push_back(std::move(ref));
  }
  if (report) *report = local;
  return s;
}

bool Snapshot::contains(std::string_view id) const {
  return index_.find(std::string(id)) != index_.end();
}

std::size_t Snapshot::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? npos : it->second;
}

std::size_t Snapshot::checked_index(std::string_view id) const {
  auto i = index_of(id);
  if (i == npos) throw CorpusError("unknown element id '" + std::string(id) + "'");
  return i;
}

const Element& Snapshot::at(std::string_view id) const {
  return elements_[checked_index(id)];
}

std::size_t Snapshot::ancestor_of_kind(std::size_t index, std::string_view kind) const {
  for (auto cur = index; cur != npos; cur = parent_[cur]) {
    if (elements_[cur].kind == kind) return cur;
  }
  return npos;
}

std::size_t Snapshot::total_tokens() const {
  return std::accumulate(own_tokens_.begin(), own_tokens_.end(), std::size_t{0});
}

std::vector<std::size_t> Snapshot::elements_of_kind(std::string_view kind) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].kind == kind) out.push_back(i);
  }
  return out;
}

Snapshot snapshot_from_json(const json& doc, DanglingPolicy on_dangling,
                            LoadReport* report) {
  auto require = [](const json& obj, const char* key, json::value_t type,
                    const std::string& where) -> const json& {
    if (!obj.is_object() || !obj.contains(key)) {
      fail("malformed document: " + where + " is missing '" + key + "'");
    }
    const auto& v = obj.at(key);
    if (v.type() != type) {
      fail("malformed document: " + where + "." + key + " has the wrong type");
    }
    return v;
  };
  if (!doc.is_object()) fail("malformed document: top level must be an object");

  const auto label = require(doc, "label", json::value_t::string, "document").get<std::string>();
  std::vector<std::string> roots;
  for (const auto& r : require(doc, "roots", json::value_t::array, "document")) {
    if (!r.is_string()) fail("malformed document: roots must be strings");
    roots.push_back(r.get<std::string>());
  }

  std::vector<Element> elements;
  const auto& elems = require(doc, "elements", json::value_t::array, "document");
  elements.reserve(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const auto& e = elems[i];
    const std::string where = "elements[" + std::to_string(i) + "]";
    Element el;
    el.id = require(e, "id", json::value_t::string, where).get<std::string>();
    el.kind = require(e, "kind", json::value_t::string, where).get<std::string>();
    el.label = require(e, "label", json::value_t::string, where).get<std::string>();
    if (e.contains("heading") && !e.at("heading").is_null()) {
      if (!e.at("heading").is_string()) fail("malformed document: " + where + ".heading");
      el.heading = e.at("heading").get<std::string>();
    }
    if (e.contains("text")) {
      if (!e.at("text").is_string()) fail("malformed document: " + where + ".text");
      el.text = e.at("text").get<std::string>();
    }
    if (e.contains("children")) {
      if (!e.at("children").is_array()) fail("malformed document: " + where + ".children");
      for (const auto& c : e.at("children")) {
        if (!c.is_string()) fail("malformed document: " + where + ".children");
        el.children.push_back(c.get<std::string>());
      }
    }
    elements.push_back(std::move(el));
  }

  std::vector<Reference> refs;
  if (doc.contains("references")) {
    const auto& rs = require(doc, "references", json::value_t::array, "document");
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const std::string where = "references[" + std::to_string(i) + "]";
      Reference r;
      r.source = require(rs[i], "source", json::value_t::string, where).get<std::string>();
      r.target = require(rs[i], "target", json::value_t::string, where).get<std::string>();
      if (rs[i].contains("raw") && rs[i].at("raw").is_string()) {
        r.raw = rs[i].at("raw").get<std::string>();
      }
      refs.push_back(std::move(r));
    }
  }
  return Snapshot::build(label, std::move(roots), std::move(elements), std::move(refs),
                         on_dangling, report);
}

json snapshot_to_json(const Snapshot& s) {
  json elems = json::array();
  for (const auto& e : s.elements()) {
    json j;
    j["id"] = e.id;
    j["kind"] = e.kind;
    j["label"] = e.label;
    j["heading"] = e.heading ? json(*e.heading) : json(nullptr);
    j["text"] = e.text;
    j["children"] = e.children;
    elems.push_back(std::move(j));
  }
  json refs = json::array();
  for (const auto& r : s.references()) {
    refs.push_back({{"source", r.source}, {"target", r.target}, {"raw", r.raw}});
  }
  return {{"label", s.label()}, {"roots", s.roots()}, {"elements", std::move(elems)},
          {"references", std::move(refs)}};
}

Snapshot load_snapshot(const std::filesystem::path& path, DanglingPolicy on_dangling,
                       LoadReport* report) {
  std::ifstream in(path);
  if (!in) fail("cannot open corpus file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("malformed document " + path.string() + ": " + e.what());
  }
  return snapshot_from_json(doc, on_dangling, report);
}

void save_snapshot(const Snapshot& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << snapshot_to_json(s).dump(1) << '\n';
}

TokenStream element_tokens(const Snapshot& s, std::string_view id,
                           bool include_descendants) {
  const auto first = s.index_of(id);
  if (first == Snapshot::npos) throw CorpusError("unknown element id '" + std::string(id) + "'");
  const auto last = include_descendants ? s.subtree_end(first) : first + 1;
  TokenStream out;
  out.origin = std::string(id);
  // Spans index the own texts joined in document order by a single newline.
  std::size_t offset = 0;
  for (auto i = first; i < last; ++i) {
    const auto& text = s.at(i).text;
    auto part = tokenize(text);
    out.tokens.insert(out.tokens.end(), std::make_move_iterator(part.tokens.begin()),
                      std::make_move_iterator(part.tokens.end()));
    for (const auto& sp : part.spans) out.spans.push_back({sp.begin + offset, sp.end + offset});
    offset += text.size() + 1;
  }
  return out;
}

std::string element_text(const Snapshot& s, std::string_view id, bool include_descendants) {
  const auto first = s.index_of(id);
  if (first == Snapshot::npos) throw CorpusError("unknown element id '" + std::string(id) + "'");
  const auto last = include_descendants ? s.subtree_end(first) : first + 1;
  std::string out;
  for (auto i = first; i < last; ++i) {
    if (i != first) out.push_back('\n');
    out += s.at(i).text;
  }
  return out;
}

}  // namespace lawsmells
