#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "lawsmells/cluster.hpp"

using namespace lawsmells;

namespace {

using Row = std::vector<double>;

// Every leaf appears exactly once across the merge tree and the leaf order
// is a permutation.
void check_structure(const Dendrogram& d) {
  REQUIRE(d.merges.size() + 1 == d.leaves);
  std::vector<std::size_t> size(d.leaves, 1);
  std::vector<bool> used(d.leaves + d.merges.size(), false);
  for (const auto& m : d.merges) {
    REQUIRE(m.left < size.size());
    REQUIRE(m.right < size.size());
    CHECK_FALSE(used[m.left]);
    CHECK_FALSE(used[m.right]);
    used[m.left] = used[m.right] = true;
    size.push_back(size[m.left] + size[m.right]);
    CHECK(m.size == size.back());
  }
  auto order = d.leaf_order;
  std::sort(order.begin(), order.end());
  std::vector<std::size_t> iota(d.leaves);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(order == iota);
}

}  // namespace

TEST_CASE("cosine distance") {
  CHECK(cosine_distance(Row{1, 0}, Row{0, 1}) == doctest::Approx(1.0));
  CHECK(cosine_distance(Row{1, 2}, Row{2, 4}) == doctest::Approx(0.0));
  CHECK(cosine_distance(Row{1, 1}, Row{1, 0}) == doctest::Approx(1 - 1 / std::sqrt(2.0)));
  CHECK(cosine_distance(Row{0, 0}, Row{1, 0}) == 1.0);
  CHECK(cosine_distance(Row{0, 0}, Row{0, 0}) == 0.0);
}

TEST_CASE("correlation distance") {
  CHECK(correlation_distance(Row{1, 2, 3}, Row{2, 4, 6}) == doctest::Approx(0.0));
  CHECK(correlation_distance(Row{1, 2, 3}, Row{3, 2, 1}) == doctest::Approx(2.0));
  CHECK(correlation_distance(Row{5, 5, 5}, Row{5, 5, 5}) == 0.0);
  CHECK(correlation_distance(Row{5, 5, 5}, Row{1, 2, 3}) == 1.0);
  // hand value: x = (1,2,3,4), y = (1,3,2,4); r = 0.8
  CHECK(correlation_distance(Row{1, 2, 3, 4}, Row{1, 3, 2, 4}) == doctest::Approx(0.2));
}

TEST_CASE("average linkage on a line") {
  // points 0, 1, 5: {0,1} first at 1, then with 5 at mean(5,4) = 4.5
  DistanceMatrix d = {{0, 1, 5}, {1, 0, 4}, {5, 4, 0}};
  auto den = agglomerate(d, Linkage::average);
  check_structure(den);
  CHECK(den.merges[0].left == 0);
  CHECK(den.merges[0].right == 1);
  CHECK(den.merges[0].distance == doctest::Approx(1.0));
  CHECK(den.merges[1].distance == doctest::Approx(4.5));
}

TEST_CASE("ward linkage on a line") {
  // Lance-Williams for Ward on distances: d(k, ij) = sqrt(((ni+nk) d_ik^2 + (nj+nk) d_jk^2 - nk d_ij^2) / (ni+nj+nk))
  DistanceMatrix d = {{0, 1, 5}, {1, 0, 4}, {5, 4, 0}};
  auto den = agglomerate(d, Linkage::ward);
  check_structure(den);
  const double expected = std::sqrt((2 * 25.0 + 2 * 16.0 - 1.0) / 3.0);
  CHECK(den.merges[1].distance == doctest::Approx(expected));
}

TEST_CASE("ties go to the smallest leaf indices") {
  DistanceMatrix d(4, std::vector<double>(4, 1.0));
  for (int i = 0; i < 4; ++i) d[i][i] = 0;
  auto den = agglomerate(d, Linkage::average);
  CHECK(den.merges[0].left == 0);
  CHECK(den.merges[0].right == 1);
}

TEST_CASE("collinear columns merge at correlation distance zero") {
  std::vector<Row> cols = {{1, 2, 3, 0}, {3, 1, 0, 2}, {2, 4, 6, 0}};
  auto den = agglomerate(pairwise(cols, [](const Row& a, const Row& b) { return correlation_distance(a, b); }),
                         Linkage::average);
  check_structure(den);
  CHECK(den.merges[0].distance == doctest::Approx(0.0));
  CHECK(std::set<std::size_t>{den.merges[0].left, den.merges[0].right} == std::set<std::size_t>{0, 2});
}

TEST_CASE("property: structure and monotone heights on random data") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 12;
    std::vector<Row> rows(n, Row(5));
    for (auto& r : rows)
      for (auto& v : r) v = u(rng);
    for (auto linkage : {Linkage::ward, Linkage::average}) {
      auto den = agglomerate(pairwise(rows, [](const Row& a, const Row& b) { return cosine_distance(a, b); }),
                             linkage);
      check_structure(den);
      // both linkages are reducible, so heights never decrease
      for (std::size_t i = 1; i < den.merges.size(); ++i) {
        CHECK(den.merges[i].distance >= den.merges[i - 1].distance - 1e-12);
      }
    }
  }
}

TEST_CASE("json export") {
  DistanceMatrix d = {{0, 1}, {1, 0}};
  auto j = to_json(agglomerate(d, Linkage::ward));
  CHECK(j["leaves"] == 2);
  CHECK(j["merges"].size() == 1);
  CHECK(j["leaf_order"].size() == 2);
}
