#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dagp/exact.hpp"
#include "dagp/generators.hpp"
#include "dagp/oracle.hpp"
#include "support.hpp"

using namespace dagp;

namespace {

SearchConfig decision(ReductionMode mode, Weight k) {
  SearchConfig cfg;
  cfg.mode = mode;
  cfg.budget = k;
  return cfg;
}

constexpr ReductionMode kModes[] = {ReductionMode::None, ReductionMode::Initial,
                                    ReductionMode::Interleaved};

}  // namespace

TEST_CASE("decision solver on hand instances") {
  SECTION("already-partitioned graph at budget zero") {
    WeightedDag g(3, {{0, 1, 1}, {1, 2, 1}});
    for (ReductionMode mode : kModes) {
      DecisionResult r = solve_decision(g, decision(mode, 0));
      REQUIRE(r.status == SolveStatus::Yes);
      CHECK(r.witness->empty());
      CHECK(r.stats.nodes_expanded >= 1);
    }
  }
  SECTION("weighted diamond: no at 0, yes at 1 via the light arc") {
    WeightedDag g(3, {{0, 1, 3}, {0, 2, 1}});
    REQUIRE(brute_force_min(g).weight == 1);  // 4 subsets checked inside
    for (ReductionMode mode : kModes) {
      CHECK(solve_decision(g, decision(mode, 0)).status == SolveStatus::No);
      DecisionResult r = solve_decision(g, decision(mode, 1));
      REQUIRE(r.status == SolveStatus::Yes);
      CHECK(r.witness->total_weight() == 1);
      CHECK(is_valid_partitioning_set(g, *r.witness));
    }
  }
  SECTION("empty graph") {
    WeightedDag g(0, {});
    DecisionResult r = solve_decision(g, decision(ReductionMode::None, 0));
    CHECK(r.status == SolveStatus::Yes);
  }
}

TEST_CASE("sat gadget instance solves at its budget") {
  // One clause over two variables; satisfiable, so the budget is enough.
  CnfFormula cnf;
  cnf.variable_count = 2;
  cnf.clauses = {{1, -2}};
  SatInstance inst = from_3sat(cnf);
  REQUIRE(inst.budget == 10);
  for (ReductionMode mode : kModes) {
    DecisionResult r = solve_decision(inst.graph, decision(mode, inst.budget));
    REQUIRE(r.status == SolveStatus::Yes);
    CHECK(is_valid_partitioning_set(inst.graph, *r.witness));
    // Within budget, so no heavy arc can be part of the witness.
    for (ArcId a : r.witness->arcs())
      CHECK(inst.graph.weight(a) < inst.budget + 1);
  }
}

TEST_CASE("minimize matches the brute-force oracle in all modes") {
  WeightedDag single(4, {{1, 0, 1}, {2, 1, 1}, {3, 1, 1}});
  for (ReductionMode mode : kModes)
    CHECK(solve_minimize(single, mode).weight == 0);

  std::mt19937_64 rng(211);
  for (int i = 0; i < 300; ++i) {
    WeightedDag g = testing::random_dag(rng, 10, 20, 5);
    const Weight expected = brute_force_min(g).weight;
    for (ReductionMode mode : kModes) {
      MinimizeResult r = solve_minimize(g, mode);
      REQUIRE(r.status == SolveStatus::Yes);
      CHECK(r.weight == expected);
      REQUIRE(r.witness.has_value());
      CHECK(r.witness->total_weight() == expected);
      CHECK(is_valid_partitioning_set(g, *r.witness));
    }
  }
}

TEST_CASE("decision answers match the oracle for budgets around the optimum") {
  std::mt19937_64 rng(223);
  for (int i = 0; i < 120; ++i) {
    WeightedDag g = testing::random_dag(rng, 9, 16, 4);
    const Weight opt = brute_force_min(g).weight;
    for (Weight k = 0; k <= opt + 2; ++k) {
      const bool expect_yes = k >= opt;
      for (ReductionMode mode : kModes) {
        DecisionResult r = solve_decision(g, decision(mode, k));
        REQUIRE(r.status != SolveStatus::LimitReached);
        CHECK((r.status == SolveStatus::Yes) == expect_yes);
        if (r.status == SolveStatus::Yes) {
          CHECK(r.witness->total_weight() <= k);
          CHECK(is_valid_partitioning_set(g, *r.witness));
        }
      }
    }
  }
}

TEST_CASE("node limit yields a distinct outcome") {
  // Needs branching, so a single node cannot settle it.
  WeightedDag g = testing::two_sink_fixture();
  SearchConfig cfg = decision(ReductionMode::None, 0);
  cfg.node_limit = 1;
  DecisionResult r = solve_decision(g, cfg);
  CHECK(r.status == SolveStatus::LimitReached);

  cfg.node_limit = std::nullopt;
  cfg.budget = 0;
  CHECK(solve_decision(g, cfg).status == SolveStatus::No);

  MinimizeResult m = solve_minimize(g, ReductionMode::None, 1);
  CHECK(m.status == SolveStatus::LimitReached);
}

TEST_CASE("search-tree size stays within the branching bound") {
  std::mt19937_64 rng(227);
  for (int i = 0; i < 100; ++i) {
    WeightedDag g = testing::random_dag(rng, 9, 16, 1);  // unit weights
    const Weight opt = brute_force_min(g).weight;
    for (Weight k = 0; k <= opt + 2; ++k) {
      for (ReductionMode mode : kModes) {
        DecisionResult r = solve_decision(g, decision(mode, k));
        REQUIRE(r.status != SolveStatus::LimitReached);
        CHECK(r.stats.nodes_expanded <= (std::uint64_t{1} << (k + 1)));
      }
    }
  }
}

TEST_CASE("witnesses are deterministic per mode") {
  std::mt19937_64 rng(229);
  for (int i = 0; i < 30; ++i) {
    WeightedDag g = testing::random_dag(rng, 10, 18, 4);
    for (ReductionMode mode : kModes) {
      MinimizeResult a = solve_minimize(g, mode);
      MinimizeResult b = solve_minimize(g, mode);
      CHECK(a.weight == b.weight);
      CHECK(a.witness->arcs() == b.witness->arcs());
    }
  }
}

TEST_CASE("interleaved stride knob keeps answers intact") {
  std::mt19937_64 rng(233);
  for (int i = 0; i < 50; ++i) {
    WeightedDag g = testing::random_dag(rng, 9, 16, 4);
    const Weight opt = brute_force_min(g).weight;
    for (std::size_t stride : {std::size_t{2}, std::size_t{3}}) {
      SearchConfig cfg = decision(ReductionMode::Interleaved, opt);
      cfg.reduce_stride = stride;
      DecisionResult r = solve_decision(g, cfg);
      REQUIRE(r.status == SolveStatus::Yes);
      CHECK(is_valid_partitioning_set(g, *r.witness));
      if (opt > 0) {
        cfg.budget = opt - 1;
        CHECK(solve_decision(g, cfg).status == SolveStatus::No);
      }
    }
  }
}
