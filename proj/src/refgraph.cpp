#include "lawsmells/refgraph.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <set>

#include "lawsmells/csv.hpp"

namespace lawsmells {

using nlohmann::json;

namespace {

bool non_blank(std::string_view s) {
  return s.find_first_not_of(" \t\n\r\f\v") != std::string_view::npos;
}

std::string describe(const Snapshot& s, std::size_t i) {
  const auto& e = s.at(i);
  if (e.heading && !e.heading->empty()) return e.label + " " + *e.heading;
  return e.label;
}

}  // namespace

std::size_t MultiGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& o : out_) n += o.size();
  return n;
}

MultiGraph build_prepared_graph(const Snapshot& s, const TreeConfig& cfg) {
  MultiGraph g;
  g.snapshot_ = &s;
  const auto n = s.size();
  g.alive_.assign(n, true);
  g.wraps_text_.assign(n, false);
  g.out_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    g.wraps_text_[i] = non_blank(s.at(i).text);
    if (s.inclusive_tokens(i) > cfg.max_node_tokens) {
      g.alive_[i] = false;
      ++g.pruned_nodes;
    }
  }
  for (const auto& r : s.references()) {
    const auto src = s.index_of(r.source);
    const auto dst = s.index_of(r.target);
    if (src == dst) {
      ++g.dropped_self_loops;
      continue;
    }
    if (!g.alive_[src] || !g.alive_[dst]) {
      ++g.dropped_pruned_edges;
      continue;
    }
    if (s.child_indices(dst).empty()) {
      g.out_[src].push_back(dst);
      continue;
    }
    // Descendants of a surviving node are no larger, so they survive as well.
    for (auto d = dst; d < s.subtree_end(dst); ++d) {
      if (!g.wraps_text_[d]) continue;
      if (d == src) {
        ++g.dropped_self_loops;
        continue;
      }
      g.out_[src].push_back(d);
    }
  }
  for (auto& o : g.out_) std::stable_sort(o.begin(), o.end());
  return g;
}

ReferenceTree reference_tree(const MultiGraph& g, std::string_view root, std::string_view sequence_kind) {
  const auto idx = g.snapshot().index_of(root);
  if (idx == Snapshot::npos) throw Error("unknown tree root '" + std::string(root) + "'");
  return reference_tree(g, idx, sequence_kind);
}

ReferenceTree reference_tree(const MultiGraph& g, std::size_t root, std::string_view sequence_kind) {
  const auto& s = g.snapshot();
  if (root >= g.size()) throw Error("tree root out of range");
  if (!g.alive(root)) throw Error("tree root '" + s.at(root).id + "' was pruned");

  ReferenceTree t;
  t.root = root;
  std::vector<std::size_t> depth(g.size(), Snapshot::npos);
  depth[root] = 0;
  t.nodes.push_back(root);
  t.node_depth.push_back(0);
  for (std::size_t head = 0; head < t.nodes.size(); ++head) {
    const auto u = t.nodes[head];
    for (auto v : g.out_edges(u)) {
      if (depth[v] != Snapshot::npos) {
        ++t.cycle_edges;
        continue;
      }
      depth[v] = depth[u] + 1;
      t.nodes.push_back(v);
      t.node_depth.push_back(depth[v]);
      t.edges.push_back({u, v, depth[v]});
      t.depth = std::max(t.depth, depth[v]);
    }
  }
  t.size = t.edges.size() + t.cycle_edges;
  std::set<std::size_t> seq, top;
  for (auto v : t.nodes) {
    t.weight += s.own_tokens(v);
    const auto a = s.ancestor_of_kind(v, sequence_kind);
    if (a != Snapshot::npos) seq.insert(a);
    top.insert(s.root_index(v));
  }
  t.distinct_sequence = seq.size();
  t.distinct_top = top.size();
  return t;
}

TreeScan scan_trees(const MultiGraph& g, const TreeConfig& cfg) {
  const auto& s = g.snapshot();
  TreeScan scan;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.alive(i) || g.out_edges(i).empty()) continue;
    const auto t = reference_tree(g, i, cfg.sequence_kind);
    const auto& scope = s.at(s.root_index(i)).id;
    scan.trees.push_back({s.at(i).id, scope, t.size, t.depth});
    ++scan.histogram[{scope, t.size}];

    SmellFinding base;
    base.snapshot = s.label();
    base.element = s.at(i).id;
    base.order = i;
    base.excerpt = describe(s, i);
    if (cfg.size_x && t.size > *cfg.size_x) {
      auto f = base;
      f.kind = SmellKind::large_reference_tree;
      f.metrics = {{"size", static_cast<double>(t.size)},
                   {"tree_edges", static_cast<double>(t.edges.size())},
                   {"cycle_edges", static_cast<double>(t.cycle_edges)},
                   {"depth", static_cast<double>(t.depth)},
                   {"weight", static_cast<double>(t.weight)},
                   {"distinct_sequence", static_cast<double>(t.distinct_sequence)},
                   {"distinct_top", static_cast<double>(t.distinct_top)},
                   {"threshold", static_cast<double>(*cfg.size_x)}};
      scan.large_trees.push_back(std::move(f));
    }
    if (t.depth > cfg.chain_x) {
      auto f = base;
      f.kind = SmellKind::long_reference_chain;
      f.metrics = {{"depth", static_cast<double>(t.depth)},
                   {"size", static_cast<double>(t.size)},
                   {"threshold", static_cast<double>(cfg.chain_x)}};
      scan.long_chains.push_back(std::move(f));
    }
  }
  return scan;
}

void write_tree_edges(std::ostream& out, const MultiGraph& g, const ReferenceTree& t) {
  const auto& s = g.snapshot();
  out << "# root=" << s.at(t.root).id << "\n"
      << "# size=" << t.size << "\n"
      << "# tree_edges=" << t.edges.size() << "\n"
      << "# cycle_edges=" << t.cycle_edges << "\n"
      << "# depth=" << t.depth << "\n"
      << "# weight=" << t.weight << "\n"
      << "# distinct_sequence=" << t.distinct_sequence << "\n"
      << "# distinct_top=" << t.distinct_top << "\n"
      << "# parallel_edges=counted_per_multiplicity\n";
  csv::RowWriter w(out);
  w.text("parent").text("child").text("depth").end();
  for (const auto& e : t.edges) {
    w.text(s.at(e.parent).id).text(s.at(e.child).id).integer(static_cast<long long>(e.depth)).end();
  }
}

void write_histogram_csv(std::ostream& out, const TreeScan& scan) {
  csv::RowWriter w(out);
  w.text("scope").text("size").text("count").end();
  for (const auto& [key, count] : scan.histogram) {
    w.text(key.first).integer(static_cast<long long>(key.second)).integer(static_cast<long long>(count)).end();
  }
}

json two_layer_json(const MultiGraph& g, const ReferenceTree& t) {
  const auto& s = g.snapshot();
  auto node = [&](std::size_t i, std::size_t d) {
    return json{{"id", s.at(i).id}, {"label", s.at(i).label}, {"depth", d}, {"children", json::array()}};
  };
  json root = node(t.root, 0);
  std::map<std::size_t, std::size_t> first_layer;  // node -> position in root children
  for (const auto& e : t.edges) {
    if (e.depth == 1) {
      first_layer[e.child] = root["children"].size();
      root["children"].push_back(node(e.child, 1));
    } else if (e.depth == 2) {
      root["children"][first_layer.at(e.parent)]["children"].push_back(node(e.child, 2));
    }
  }
  return root;
}

json to_json(const MultiGraph& g, const ReferenceTree& t) {
  const auto& s = g.snapshot();
  json edges = json::array();
  for (const auto& e : t.edges) {
    edges.push_back({{"parent", s.at(e.parent).id}, {"child", s.at(e.child).id}, {"depth", e.depth}});
  }
  return {{"root", s.at(t.root).id},
          {"size", t.size},
          {"tree_edges", t.edges.size()},
          {"cycle_edges", t.cycle_edges},
          {"depth", t.depth},
          {"weight", t.weight},
          {"distinct_sequence", t.distinct_sequence},
          {"distinct_top", t.distinct_top},
          {"edges", std::move(edges)}};
}

}  // namespace lawsmells
