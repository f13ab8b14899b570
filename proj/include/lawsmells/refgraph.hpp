#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lawsmells/corpus.hpp"
#include "lawsmells/finding.hpp"

namespace lawsmells {

struct TreeConfig {
  std::size_t max_node_tokens = 1000;
  std::size_t chain_x = 3;
  std::optional<std::size_t> size_x;  // no large-tree findings when unset
  std::string sequence_kind = "section";
};

/// Reference multigraph after pruning and lowering. Node indices are document
/// positions in the snapshot, which must outlive the graph.
class MultiGraph {
 public:
  const Snapshot& snapshot() const { return *snapshot_; }
  std::size_t size() const { return alive_.size(); }
  bool alive(std::size_t i) const { return alive_[i]; }
  bool wraps_text(std::size_t i) const { return wraps_text_[i]; }
  /// Reference targets of `i`, sorted by document position; parallel edges
  /// appear once per multiplicity.
  const std::vector<std::size_t>& out_edges(std::size_t i) const { return out_[i]; }
  std::size_t edge_count() const;

  std::size_t pruned_nodes = 0;
  std::size_t dropped_self_loops = 0;
  std::size_t dropped_pruned_edges = 0;

 private:
  friend MultiGraph build_prepared_graph(const Snapshot& s, const TreeConfig& cfg);
  const Snapshot* snapshot_ = nullptr;
  std::vector<bool> alive_;
  std::vector<bool> wraps_text_;
  std::vector<std::vector<std::size_t>> out_;
};

/// (1) reference multigraph over all elements, self-references dropped;
/// (2) nodes with more than max_node_tokens inclusive tokens removed with
/// their incident edges; (3) an edge to an element with children replaced by
/// one edge to every element of that subtree whose own text is non-blank.
/// Self-loops produced by lowering are dropped too.
MultiGraph build_prepared_graph(const Snapshot& s, const TreeConfig& cfg = {});
/// The graph keeps a pointer to its snapshot; a temporary would dangle.
MultiGraph build_prepared_graph(Snapshot&& s, const TreeConfig& cfg = {}) = delete;

struct TreeEdge {
  std::size_t parent = 0;
  std::size_t child = 0;
  std::size_t depth = 0;  // depth of the child
};

struct ReferenceTree {
  std::size_t root = 0;
  std::vector<std::size_t> nodes;        // BFS order, root first
  std::vector<std::size_t> node_depth;   // parallel to nodes
  std::vector<TreeEdge> edges;           // first-visit edges
  std::size_t cycle_edges = 0;
  std::size_t size = 0;                  // edges.size() + cycle_edges
  std::size_t depth = 0;
  std::size_t weight = 0;                // own tokens over nodes
  std::size_t distinct_sequence = 0;     // distinct sequence-kind ancestors
  std::size_t distinct_top = 0;          // distinct forest roots
};

/// Breadth-first tree over reference edges. Throws Error for a pruned or
/// unknown root.
ReferenceTree reference_tree(const MultiGraph& g, std::string_view root,
                             std::string_view sequence_kind = "section");
ReferenceTree reference_tree(const MultiGraph& g, std::size_t root,
                             std::string_view sequence_kind = "section");

struct TreeSummary {
  std::string root;
  std::string scope;  // forest root above `root`
  std::size_t size = 0;
  std::size_t depth = 0;
};

struct TreeScan {
  std::vector<SmellFinding> large_trees;
  std::vector<SmellFinding> long_chains;
  std::vector<TreeSummary> trees;  // every node with an outgoing reference
  std::map<std::pair<std::string, std::size_t>, std::size_t> histogram;  // (scope, size) -> trees
};

TreeScan scan_trees(const MultiGraph& g, const TreeConfig& cfg = {});

/// Metrics as "# key=value" lines, then CSV parent,child,depth.
void write_tree_edges(std::ostream& out, const MultiGraph& g, const ReferenceTree& t);
/// CSV scope,size,count.
void write_histogram_csv(std::ostream& out, const TreeScan& scan);
/// Root plus the first two layers as nested {id, label, depth, children}.
nlohmann::json two_layer_json(const MultiGraph& g, const ReferenceTree& t);
nlohmann::json to_json(const MultiGraph& g, const ReferenceTree& t);

}  // namespace lawsmells
