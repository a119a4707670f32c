#pragma once

// Greedy single-pass heuristic: every vertex keeps the sink that is most
// expensive to disconnect from and cuts the arcs toward all other sinks.
// Optimal whenever the underlying undirected graph is a tree.

#include <vector>

#include "dagp/graph.hpp"
#include "dagp/reduction.hpp"

namespace dagp {

inline PartitioningSet heuristic_partition_raw(const WeightedDag& g,
                                               std::vector<ArcId>& scratch) {
  const std::size_t n = g.vertex_count();
  std::vector<Vertex> label(n, kNoVertex);

  // Per-vertex accumulation of kept-arc weight by neighbor sink, using a
  // stamped scratch array over sink ids.
  std::vector<Weight> acc(n, 0);
  std::vector<Vertex> touched;
  scratch.clear();

  for (Vertex v : reverse_topological_order(g)) {
    if (g.outdegree(v) == 0) {
      label[v] = v;
      continue;
    }
    touched.clear();
    for (ArcId a : g.out_arcs(v)) {
      Vertex s = label[g.arc(a).head];
      if (acc[s] == 0) touched.push_back(s);
      acc[s] += g.weight(a);
    }
    Vertex best = kNoVertex;
    Weight best_weight = 0;
    for (Vertex s : touched) {
      // Strictly heavier wins; ties go to the smallest sink id.
      if (best == kNoVertex || acc[s] > best_weight ||
          (acc[s] == best_weight && s < best)) {
        best = s;
        best_weight = acc[s];
      }
    }
    for (Vertex s : touched) acc[s] = 0;
    label[v] = best;
    for (ArcId a : g.out_arcs(v))
      if (label[g.arc(a).head] != best) scratch.push_back(a);
  }
  return PartitioningSet::of(g, scratch);
}

/// One reverse-topological pass over g; runs in O(n+m). With pre_reduce,
/// the instance is shrunk first and the witness lifted back, mirroring
/// the measured variant that pays the reduction cost up front.
inline PartitioningSet heuristic_partition(const WeightedDag& g,
                                           bool pre_reduce = false) {
  std::vector<ArcId> scratch;
  if (!pre_reduce) return heuristic_partition_raw(g, scratch);
  ReduceResult red = reduce(g);
  PartitioningSet s = heuristic_partition_raw(red.graph, scratch);
  return lift_witness(g, red.log, s);
}

}  // namespace dagp
