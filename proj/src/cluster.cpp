#include "lawsmells/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lawsmells/corpus.hpp"

namespace lawsmells {

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return (na == 0 && nb == 0) ? 0.0 : 1.0;
  const double d = 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
  return std::max(0.0, d);
}

double correlation_distance(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0 || vb == 0) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end()) ? 0.0 : 1.0;
  }
  const double d = 1.0 - cov / std::sqrt(va * vb);
  return std::clamp(d, 0.0, 2.0);
}

Dendrogram agglomerate(const DistanceMatrix& distances, Linkage linkage) {
  const auto n = distances.size();
  for (const auto& row : distances) {
    if (row.size() != n) throw Error("distance matrix is not square");
  }
  Dendrogram out;
  out.leaves = n;
  if (n == 0) return out;

  struct Cluster {
    std::size_t id;
    std::size_t size;
    std::size_t min_leaf;
  };
  // Active clusters are kept sorted by smallest leaf, which makes the
  // first-found minimum the tie-break winner.
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({i, 1, i});
  DistanceMatrix d = distances;  // indexed by position in `active`

  std::vector<std::pair<std::size_t, std::size_t>> children;  // per merge
  while (active.size() > 1) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        if (d[i][j] < best) {
          best = d[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    const auto& s = active[bi];
    const auto& t = active[bj];
    const auto merged_size = s.size + t.size;

    std::vector<double> row(active.size(), 0.0);
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (k == bi || k == bj) continue;
      const auto nv = static_cast<double>(active[k].size);
      const auto ns = static_cast<double>(s.size);
      const auto nt = static_cast<double>(t.size);
      if (linkage == Linkage::average) {
        row[k] = (ns * d[bi][k] + nt * d[bj][k]) / (ns + nt);
      } else {
        const double total = nv + ns + nt;
        const double sq = ((nv + ns) / total) * d[bi][k] * d[bi][k] +
                          ((nv + nt) / total) * d[bj][k] * d[bj][k] -
                          (nv / total) * best * best;
        row[k] = std::sqrt(std::max(0.0, sq));
      }
    }

    out.merges.push_back({s.id, t.id, best, merged_size});
    children.emplace_back(s.id, t.id);
    Cluster merged{n + out.merges.size() - 1, merged_size, std::min(s.min_leaf, t.min_leaf)};

    // bi < bj and active is sorted by min_leaf, so the merged cluster takes
    // position bi and keeps the order intact.
    for (std::size_t k = 0; k < active.size(); ++k) {
      d[bi][k] = d[k][bi] = row[k];
    }
    d[bi][bi] = 0.0;
    active[bi] = merged;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    d.erase(d.begin() + static_cast<std::ptrdiff_t>(bj));
    for (auto& r : d) r.erase(r.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  std::vector<std::size_t> stack{n + out.merges.size() - 1};
  if (out.merges.empty()) stack = {0};
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    if (id < n) {
      out.leaf_order.push_back(id);
    } else {
      const auto& [l, r] = children[id - n];
      stack.push_back(r);
      stack.push_back(l);
    }
  }
  return out;
}

nlohmann::json to_json(const Dendrogram& d) {
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& m : d.merges) {
    merges.push_back({{"left", m.left}, {"right", m.right}, {"distance", m.distance},
                      {"size", m.size}});
  }
  return {{"leaves", d.leaves}, {"merges", std::move(merges)}, {"leaf_order", d.leaf_order}};
}

}  // namespace lawsmells
