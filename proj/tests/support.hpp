#pragma once

// Shared helpers for the test suites: seeded random instances and the
// small fixtures used across modules.

#include <algorithm>
#include <random>
#include <vector>

#include "dagp/graph.hpp"
#include "dagp/io.hpp"

namespace dagp::testing {

// Random DAG: arcs oriented from later to earlier position in a random
// vertex permutation, so acyclicity holds by construction.
inline WeightedDag random_dag(std::mt19937_64& rng, std::size_t max_n,
                              std::size_t max_m, Weight max_w) {
  std::uniform_int_distribution<std::size_t> nd(1, max_n);
  const std::size_t n = nd(rng);
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      pairs.emplace_back(perm[j], perm[i]);  // later position -> earlier
  std::shuffle(pairs.begin(), pairs.end(), rng);

  std::uniform_int_distribution<std::size_t> md(0, std::min(max_m, pairs.size()));
  const std::size_t m = md(rng);
  std::uniform_int_distribution<Weight> wd(1, max_w);
  std::vector<WeightedArc> arcs;
  for (std::size_t i = 0; i < m; ++i)
    arcs.push_back({pairs[i].first, pairs[i].second, wd(rng)});
  return WeightedDag(n, std::move(arcs));
}

// Random instance whose underlying undirected graph is a tree: a random
// Prufer-style tree with every edge oriented at random.
inline WeightedDag random_tree_instance(std::mt19937_64& rng, std::size_t max_n,
                                        Weight max_w) {
  std::uniform_int_distribution<std::size_t> nd(2, max_n);
  const std::size_t n = nd(rng);
  std::uniform_int_distribution<Weight> wd(1, max_w);
  std::vector<WeightedArc> arcs;
  for (Vertex v = 1; v < n; ++v) {
    std::uniform_int_distribution<Vertex> pd(0, v - 1);
    Vertex parent = pd(rng);
    if (rng() & 1)
      arcs.push_back({v, parent, wd(rng)});
    else
      arcs.push_back({parent, v, wd(rng)});
  }
  return WeightedDag(n, std::move(arcs));
}

// Random subset of arc ids.
inline std::vector<ArcId> random_arc_subset(std::mt19937_64& rng,
                                            const WeightedDag& g) {
  std::vector<ArcId> ids;
  for (ArcId a = 0; a < g.arc_count(); ++a)
    if (rng() & 1) ids.push_back(a);
  return ids;
}

// Random graph of width at most `width` together with a valid tree
// decomposition: grow bags k-tree style (copy a bag, swap one vertex for
// a fresh one), then keep each coverable arc with probability ~1/2,
// oriented from the newer vertex to the older one.
struct DecomposedInstance {
  WeightedDag graph;
  TreeDecomposition td;
};

inline DecomposedInstance random_decomposed(std::mt19937_64& rng,
                                            std::size_t width, std::size_t n,
                                            Weight max_w, double arc_prob = 0.5) {
  const std::size_t base = std::min(n, width + 1);
  TreeDecomposition td;
  td.graph_vertex_count = n;
  std::vector<Vertex> first_bag;
  for (Vertex v = 0; v < base; ++v) first_bag.push_back(v);
  td.bags.push_back(first_bag);
  for (Vertex v = static_cast<Vertex>(base); v < n; ++v) {
    std::uniform_int_distribution<std::size_t> bd(0, td.bags.size() - 1);
    std::size_t parent = bd(rng);
    std::vector<Vertex> bag = td.bags[parent];
    std::uniform_int_distribution<std::size_t> sd(0, bag.size() - 1);
    if (bag.size() == width + 1) bag.erase(bag.begin() + sd(rng));
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    td.edges.emplace_back(parent, td.bags.size());
    td.bags.push_back(std::move(bag));
  }
  td.declared_width = width;

  std::set<std::pair<Vertex, Vertex>> candidates;
  for (const auto& bag : td.bags)
    for (std::size_t i = 0; i < bag.size(); ++i)
      for (std::size_t j = i + 1; j < bag.size(); ++j)
        candidates.insert({std::max(bag[i], bag[j]), std::min(bag[i], bag[j])});

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<Weight> wd(1, max_w);
  std::vector<WeightedArc> arcs;
  for (auto [tail, head] : candidates)
    if (coin(rng) < arc_prob) arcs.push_back({tail, head, wd(rng)});
  return DecomposedInstance{WeightedDag(n, std::move(arcs)), std::move(td)};
}

// Figure fixture used across the reduction and solver tests: two sinks,
// one vertex that reaches both, and a tail feeding it.
//   ids: a=0 b=1 w=2 v=3 e=4 f=5 s1=6 s2=7
inline WeightedDag two_sink_fixture() {
  return WeightedDag(8, {{0, 6, 1},
                         {1, 6, 1},
                         {2, 1, 1},
                         {2, 0, 1},
                         {3, 2, 1},
                         {3, 7, 1},
                         {3, 5, 1},
                         {4, 3, 1},
                         {5, 7, 1}});
}

}  // namespace dagp::testing
