#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

namespace lawsmells {

enum class Linkage { ward, average };

/// Square symmetric matrix, row-major.
using DistanceMatrix = std::vector<std::vector<double>>;

/// One agglomeration step. Cluster ids follow the usual convention: leaves are
/// 0..n-1 and the cluster created by merge k is n+k.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double distance = 0.0;
  std::size_t size = 0;
};

struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;
  /// Leaves in display order (left subtree first).
  std::vector<std::size_t> leaf_order;
};

/// 1 - cos(a, b). Zero vectors are at distance 1 from everything except
/// another zero vector.
double cosine_distance(std::span<const double> a, std::span<const double> b);

/// 1 - Pearson correlation. A constant vector has undefined correlation; it is
/// placed at distance 0 from an identical vector and 1 from anything else.
double correlation_distance(std::span<const double> a, std::span<const double> b);

template <typename Metric>
DistanceMatrix pairwise(const std::vector<std::vector<double>>& rows, Metric metric) {
  DistanceMatrix d(rows.size(), std::vector<double>(rows.size(), 0.0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      d[i][j] = d[j][i] = metric(rows[i], rows[j]);
    }
  }
  return d;
}

/// Naive O(n^3) agglomerative clustering with Lance-Williams updates. Ties in
/// distance go to the pair whose smallest leaf indices are smallest.
Dendrogram agglomerate(const DistanceMatrix& distances, Linkage linkage);

nlohmann::json to_json(const Dendrogram& d);

}  // namespace lawsmells
