#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "dagp/graph.hpp"
#include "support.hpp"

using namespace dagp;

namespace {

// Independent oracle: all reverse topological orders by permutation
// enumeration; the ascending-id Kahn rule picks the lexicographically
// smallest one.
std::vector<Vertex> lex_min_reverse_topological(const WeightedDag& g) {
  std::vector<Vertex> perm(g.vertex_count());
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::vector<Vertex> best;
  do {
    std::vector<std::size_t> pos(g.vertex_count());
    for (std::size_t i = 0; i < perm.size(); ++i) pos[perm[i]] = i;
    bool valid = true;
    for (ArcId a = 0; a < g.arc_count(); ++a)
      if (pos[g.arc(a).head] >= pos[g.arc(a).tail]) valid = false;
    if (valid && (best.empty() || perm < best)) best = perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("graph construction validates its invariants") {
  CHECK_THROWS_AS(WeightedDag(2, {{0, 0, 1}}), Error);            // self loop
  CHECK_THROWS_AS(WeightedDag(2, {{0, 1, 1}, {0, 1, 2}}), Error);  // duplicate
  CHECK_THROWS_AS(WeightedDag(2, {{0, 1, 0}}), Error);            // zero weight
  CHECK_THROWS_AS(WeightedDag(2, {{0, 2, 1}}), Error);            // bad id
  CHECK_THROWS_AS(WeightedDag(2, {{0, 1, 1}, {1, 0, 1}}), Error);  // cycle
  WeightedDag g(3, {{0, 1, 2}, {1, 2, 3}});
  CHECK(g.vertex_count() == 3);
  CHECK(g.arc_count() == 2);
  CHECK(g.total_weight() == 5);
  CHECK(g.find_arc(0, 1) == 0);
  CHECK(g.find_arc(1, 0) == kNoArc);
}

TEST_CASE("reverse topological order") {
  SECTION("single vertex") {
    WeightedDag g(1, {});
    CHECK(reverse_topological_order(g) == std::vector<Vertex>{0});
  }
  SECTION("path") {
    WeightedDag g(3, {{0, 1, 1}, {1, 2, 1}});
    CHECK(reverse_topological_order(g) == std::vector<Vertex>{2, 1, 0});
  }
  SECTION("fork uses ascending-id tie-break") {
    WeightedDag g(3, {{0, 1, 1}, {0, 2, 1}});
    CHECK(reverse_topological_order(g) == lex_min_reverse_topological(g));
    CHECK(reverse_topological_order(g) == std::vector<Vertex>{1, 2, 0});
  }
  SECTION("matches the enumeration oracle on random small graphs") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
      WeightedDag g = testing::random_dag(rng, 6, 12, 3);
      CHECK(reverse_topological_order(g) == lex_min_reverse_topological(g));
    }
  }
  SECTION("is a permutation respecting all arcs") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
      WeightedDag g = testing::random_dag(rng, 12, 30, 3);
      auto order = reverse_topological_order(g);
      REQUIRE(order.size() == g.vertex_count());
      std::vector<std::size_t> pos(g.vertex_count());
      std::vector<char> seen(g.vertex_count(), 0);
      for (std::size_t i2 = 0; i2 < order.size(); ++i2) {
        REQUIRE(!seen[order[i2]]);
        seen[order[i2]] = 1;
        pos[order[i2]] = i2;
      }
      for (ArcId a = 0; a < g.arc_count(); ++a)
        CHECK(pos[g.arc(a).head] < pos[g.arc(a).tail]);
    }
  }
}

TEST_CASE("sinks") {
  WeightedDag path(3, {{0, 1, 1}, {1, 2, 1}});
  CHECK(sinks(path) == std::vector<Vertex>{2});

  WeightedDag fig = testing::two_sink_fixture();
  CHECK(sinks(fig) == std::vector<Vertex>{6, 7});

  WeightedDag empty(3, {});
  CHECK(sinks(empty) == std::vector<Vertex>{0, 1, 2});
}

TEST_CASE("weak components") {
  WeightedDag path(3, {{0, 1, 1}, {1, 2, 1}});
  auto parts = weak_components(path, PartitioningSet::of(path, {1}));
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == std::vector<Vertex>{0, 1});
  CHECK(parts[1] == std::vector<Vertex>{2});

  WeightedDag fig = testing::two_sink_fixture();
  CHECK(weak_components(fig, PartitioningSet{}).size() == 1);

  std::vector<ArcId> all(path.arc_count());
  std::iota(all.begin(), all.end(), ArcId{0});
  CHECK(weak_components(path, PartitioningSet::of(path, all)).size() == 3);

  CHECK_THROWS_AS(PartitioningSet::of(path, {99}), Error);
}

TEST_CASE("partitioning-set validity") {
  SECTION("already partitioned graph accepts the empty set") {
    WeightedDag g(3, {{0, 1, 1}, {1, 2, 1}});
    CHECK(is_valid_partitioning_set(g, PartitioningSet{}));
  }
  SECTION("two-sink diamond") {
    WeightedDag g(3, {{0, 1, 3}, {0, 2, 1}});  // a -> s1, a -> s2
    CHECK_FALSE(is_valid_partitioning_set(g, PartitioningSet{}));
    CHECK(is_valid_partitioning_set(g, PartitioningSet::of(g, {1})));
    // Brute force over all four subsets.
    for (std::uint32_t mask = 0; mask < 4; ++mask) {
      std::vector<ArcId> ids;
      for (ArcId a = 0; a < 2; ++a)
        if (mask >> a & 1) ids.push_back(a);
      auto s = PartitioningSet::of(g, ids);
      bool expect = mask == 1 || mask == 2 || mask == 3;  // not both kept
      CHECK(is_valid_partitioning_set(g, s) == expect);
    }
  }
}

TEST_CASE("reachability characterization agrees with validity") {
  WeightedDag g(3, {{0, 1, 1}, {1, 2, 1}});
  CHECK(reaches_exactly_one_sink(g, PartitioningSet{}));
  WeightedDag diamond(3, {{0, 1, 1}, {0, 2, 1}});
  CHECK_FALSE(reaches_exactly_one_sink(diamond, PartitioningSet{}));

  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 1000) {
    WeightedDag r = testing::random_dag(rng, 12, 24, 4);
    auto s = PartitioningSet::of(r, testing::random_arc_subset(rng, r));
    CHECK(is_valid_partitioning_set(r, s) == reaches_exactly_one_sink(r, s));
    ++checked;
  }
}

TEST_CASE("minimalize") {
  SECTION("rejects invalid input") {
    WeightedDag diamond(3, {{0, 1, 1}, {0, 2, 1}});
    CHECK_THROWS_AS(minimalize(diamond, PartitioningSet{}), Error);
  }
  SECTION("keeps already-minimal sets") {
    WeightedDag diamond(3, {{0, 1, 1}, {0, 2, 1}});
    auto s = PartitioningSet::of(diamond, {1});
    CHECK(minimalize(diamond, s) == s);
  }
  SECTION("single-sink star collapses to the empty set") {
    WeightedDag star(4, {{1, 0, 1}, {2, 0, 1}, {3, 0, 1}});
    std::vector<ArcId> all{0, 1, 2};
    auto s = PartitioningSet::of(star, all);
    CHECK(minimalize(star, s).empty());
  }
  SECTION("minimal sets do not introduce new sinks") {
    std::mt19937_64 rng(23);
    int checked = 0;
    while (checked < 1000) {
      WeightedDag g = testing::random_dag(rng, 12, 24, 4);
      auto s = PartitioningSet::of(g, testing::random_arc_subset(rng, g));
      if (!is_valid_partitioning_set(g, s)) continue;
      auto minimal = minimalize(g, s);
      CHECK(is_valid_partitioning_set(g, minimal));
      // Sink set preservation: sinks of g minus minimal == sinks of g.
      std::vector<std::size_t> outdeg(g.vertex_count());
      for (Vertex v = 0; v < g.vertex_count(); ++v) outdeg[v] = g.outdegree(v);
      for (ArcId a : minimal.arcs()) --outdeg[g.arc(a).tail];
      std::vector<Vertex> remaining_sinks;
      for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (outdeg[v] == 0) remaining_sinks.push_back(v);
      CHECK(remaining_sinks == sinks(g));
      ++checked;
    }
  }
}
