#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <sstream>

#include "dagp/oracle.hpp"
#include "dagp/reduction.hpp"
#include "support.hpp"

using namespace dagp;

namespace {

std::string dump(const WeightedDag& g) {
  std::stringstream out;
  write_instance(out, g);
  return out.str();
}

// Replays a reduction log on the original graph: apply merges, drop the
// deleted vertices, compact ids. Must reproduce the reduced graph.
WeightedDag replay(const WeightedDag& g, const ReductionLog& log) {
  std::map<std::pair<Vertex, Vertex>, Weight> arcs;
  for (ArcId a = 0; a < g.arc_count(); ++a)
    arcs[{g.arc(a).tail, g.arc(a).head}] = g.weight(a);
  for (const MergeEvent& e : log.merges) {
    const Arc removed = g.arc(e.removed_arc);
    REQUIRE(removed.tail == e.tail);
    arcs.erase({removed.tail, removed.head});
    arcs[{e.tail, e.sink}] += e.added_weight;
  }
  std::vector<char> dropped(g.vertex_count(), 0);
  for (const VertexDeletion& d : log.deletions) dropped[d.vertex] = 1;
  std::vector<WeightedArc> kept;
  for (auto [key, w] : arcs) {
    auto [tail, head] = key;
    if (dropped[tail] || dropped[head]) continue;
    kept.push_back({log.new_of_old[tail], log.new_of_old[head], w});
  }
  return WeightedDag(log.old_of_new.size(), std::move(kept));
}

}  // namespace

TEST_CASE("sink labels") {
  SECTION("single-sink DAG labels everything with that sink") {
    WeightedDag g(4, {{1, 0, 1}, {2, 1, 1}, {3, 1, 1}});
    auto labels = compute_sink_labels(g);
    for (Vertex v = 0; v < 4; ++v) CHECK(labels.label[v] == 0);
  }
  SECTION("two-sink fixture") {
    WeightedDag g = testing::two_sink_fixture();
    auto labels = compute_sink_labels(g);
    CHECK(labels.label[2] == 6);        // w reaches only s1
    CHECK(labels.multiple(3));          // v reaches both sinks
    CHECK(labels.multiple(4));          // e feeds v
    CHECK(labels.label[5] == 7);        // f reaches only s2
    CHECK(labels.label[6] == 6);
    CHECK(labels.label[7] == 7);
  }
  SECTION("neighbors with distinct unique sinks give an empty intersection") {
    WeightedDag g(5, {{4, 2, 1}, {4, 3, 1}, {2, 0, 1}, {3, 1, 1}});
    auto labels = compute_sink_labels(g);
    CHECK(labels.label[2] == 0);
    CHECK(labels.label[3] == 1);
    CHECK(labels.multiple(4));
  }
}

TEST_CASE("redirect sweep") {
  SECTION("two-sink fixture folds v's arcs onto the sinks") {
    WeightedDag g = testing::two_sink_fixture();
    ReduceResult r = apply_rule1(g, compute_sink_labels(g));
    CHECK(r.graph.vertex_count() == 8);
    CHECK(r.graph.arc_count() == 8);
    ArcId to_s1 = r.graph.find_arc(3, 6);
    ArcId to_s2 = r.graph.find_arc(3, 7);
    REQUIRE(to_s1 != kNoArc);
    REQUIRE(to_s2 != kNoArc);
    CHECK(r.graph.weight(to_s1) == 1);  // redirected (v,w)
    CHECK(r.graph.weight(to_s2) == 2);  // (v,s2) absorbed (v,f)
    CHECK(r.graph.find_arc(3, 2) == kNoArc);
    CHECK(r.graph.find_arc(3, 5) == kNoArc);
    CHECK(r.graph.find_arc(5, 7) != kNoArc);  // f keeps its own arc
    CHECK(r.log.merges.size() == 2);
  }
  SECTION("single-sink DAG is untouched") {
    WeightedDag g(4, {{1, 0, 1}, {2, 1, 1}, {3, 1, 1}});
    ReduceResult r = apply_rule1(g, compute_sink_labels(g));
    CHECK(dump(r.graph) == dump(g));
    CHECK(r.log.merges.empty());
  }
  SECTION("arcs straight into sinks are not redirected") {
    WeightedDag g(3, {{0, 1, 1}, {0, 2, 1}});
    ReduceResult r = apply_rule1(g, compute_sink_labels(g));
    CHECK(dump(r.graph) == dump(g));
  }
}

TEST_CASE("deletion sweep") {
  SECTION("fixture loses every vertex that reaches only one sink") {
    WeightedDag g = testing::two_sink_fixture();
    ReduceResult r1 = apply_rule1(g, compute_sink_labels(g));
    ReduceResult r2 = apply_rule2(r1.graph, compute_sink_labels(r1.graph));
    // Survivors: v, e and the two sinks, compacted in id order.
    CHECK(r2.graph.vertex_count() == 4);
    CHECK(r2.graph.arc_count() == 3);
    CHECK(r2.log.old_of_new == std::vector<Vertex>{3, 4, 6, 7});
    ArcId to_s1 = r2.graph.find_arc(0, 2);
    ArcId to_s2 = r2.graph.find_arc(0, 3);
    REQUIRE(to_s1 != kNoArc);
    REQUIRE(to_s2 != kNoArc);
    CHECK(r2.graph.weight(to_s1) == 1);
    CHECK(r2.graph.weight(to_s2) == 2);
    CHECK(r2.graph.find_arc(1, 0) != kNoArc);  // e -> v survives
  }
  SECTION("single-sink DAG keeps only the isolated sink") {
    WeightedDag g(4, {{1, 0, 1}, {2, 1, 1}, {3, 1, 1}});
    ReduceResult r = reduce(g);
    CHECK(r.graph.vertex_count() == 1);
    CHECK(r.graph.arc_count() == 0);
  }
  SECTION("graph whose non-sinks all reach multiple sinks is unchanged") {
    WeightedDag g(3, {{2, 0, 1}, {2, 1, 1}});
    ReduceResult r = apply_rule2(g, compute_sink_labels(g));
    CHECK(dump(r.graph) == dump(g));
    CHECK(r.log.deletions.empty());
  }
}

TEST_CASE("reduce chains both rules and reaches a fixpoint") {
  WeightedDag g = testing::two_sink_fixture();
  ReduceResult r = reduce(g);
  CHECK(r.graph.vertex_count() == 4);
  CHECK(r.graph.arc_count() == 3);

  ReduceResult again = reduce(r.graph);
  CHECK(dump(again.graph) == dump(r.graph));
  CHECK(again.log.identity());

  std::mt19937_64 rng(101);
  for (int i = 0; i < 200; ++i) {
    WeightedDag h = testing::random_dag(rng, 10, 20, 5);
    ReduceResult once = reduce(h);
    ReduceResult twice = reduce(once.graph);
    CHECK(dump(twice.graph) == dump(once.graph));

    // Post-conditions: no redirectable arc, no deletable vertex.
    auto labels = compute_sink_labels(once.graph);
    for (ArcId a = 0; a < once.graph.arc_count(); ++a) {
      Vertex v = once.graph.arc(a).tail;
      Vertex w = once.graph.arc(a).head;
      bool rule1_applicable = labels.multiple(v) && labels.unique(w) &&
                              once.graph.outdegree(w) > 0;
      CHECK_FALSE(rule1_applicable);
    }
    for (Vertex v = 0; v < once.graph.vertex_count(); ++v)
      if (once.graph.outdegree(v) > 0) CHECK(labels.multiple(v));
  }
}

TEST_CASE("reduction preserves the optimal weight") {
  std::mt19937_64 rng(113);
  for (int i = 0; i < 500; ++i) {
    WeightedDag g = testing::random_dag(rng, 10, 20, 5);
    ReduceResult r = reduce(g);
    CHECK(brute_force_min(r.graph).weight == brute_force_min(g).weight);
  }
}

TEST_CASE("reduction log replays and lifts witnesses") {
  SECTION("identity log lifts unchanged") {
    WeightedDag g(3, {{2, 0, 1}, {2, 1, 1}});
    ReduceResult r = reduce(g);
    REQUIRE(r.log.identity());
    auto s = PartitioningSet::of(g, {1});
    CHECK(lift_witness(g, r.log, s) == s);
  }
  SECTION("fixture witness expands through the merge") {
    WeightedDag g = testing::two_sink_fixture();
    ReduceResult r = reduce(g);
    ArcId merged = r.graph.find_arc(0, 3);  // (v, s2), weight 2
    REQUIRE(merged != kNoArc);
    auto reduced_witness = PartitioningSet::of(r.graph, {merged});
    REQUIRE(is_valid_partitioning_set(r.graph, reduced_witness));
    auto lifted = lift_witness(g, r.log, reduced_witness);
    CHECK(lifted.total_weight() == 2);
    CHECK(lifted.size() == 2);
    CHECK(lifted.contains(g.find_arc(3, 7)));  // (v, s2)
    CHECK(lifted.contains(g.find_arc(3, 5)));  // (v, f)
    CHECK(is_valid_partitioning_set(g, lifted));
  }
  SECTION("lifting an unknown arc fails") {
    WeightedDag g = testing::two_sink_fixture();
    ReduceResult r = reduce(g);
    std::vector<ArcId> ids{static_cast<ArcId>(r.graph.arc_count() - 1 + 1)};
    CHECK_THROWS_AS(lift_witness(g, r.log, PartitioningSet::of(g, ids)), Error);
  }
  SECTION("random instances: replay matches, lifted witnesses are valid") {
    std::mt19937_64 rng(127);
    for (int i = 0; i < 300; ++i) {
      WeightedDag g = testing::random_dag(rng, 10, 20, 5);
      ReduceResult r = reduce(g);
      CHECK(dump(replay(g, r.log)) == dump(r.graph));

      std::vector<char> seen(g.arc_count(), 0);
      for (const MergeEvent& e : r.log.merges) {
        CHECK(!seen[e.removed_arc]);
        seen[e.removed_arc] = 1;
      }

      if (r.graph.arc_count() <= 18) {
        auto best = brute_force_min(r.graph);
        auto lifted = lift_witness(g, r.log, best.witness);
        CHECK(lifted.total_weight() == best.weight);
        CHECK(is_valid_partitioning_set(g, lifted));
      }
    }
  }
}
