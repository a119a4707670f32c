#pragma once

// Linear-time data reduction: redirect arcs whose heads reach a single
// sink onto that sink, then delete non-sink vertices that reach only one
// sink. A replayable log supports lifting witnesses back to the input.

#include <cassert>
#include <vector>

#include "dagp/graph.hpp"

namespace dagp {

/// Per-vertex label: the unique sink reachable, or kNoVertex ("multiple").
/// For a sink s the label is s itself.
struct SinkReachability {
  std::vector<Vertex> label;

  bool unique(Vertex v) const { return label[v] != kNoVertex; }
  bool multiple(Vertex v) const { return label[v] == kNoVertex; }
};

inline SinkReachability compute_sink_labels(const WeightedDag& g) {
  SinkReachability r;
  r.label.assign(g.vertex_count(), kNoVertex);
  for (Vertex v : reverse_topological_order(g)) {
    if (g.outdegree(v) == 0) {
      r.label[v] = v;
      continue;
    }
    // Intersection of singleton-or-empty neighbor label sets.
    Vertex acc = kNoVertex;
    bool empty = false;
    for (ArcId a : g.out_arcs(v)) {
      Vertex lw = r.label[g.arc(a).head];
      if (lw == kNoVertex || (acc != kNoVertex && lw != acc)) {
        empty = true;
        break;
      }
      acc = lw;
    }
    r.label[v] = empty ? kNoVertex : acc;
  }
  return r;
}

struct MergeEvent {
  ArcId removed_arc;  // original arc (v,w) folded away
  Vertex tail;        // v
  Vertex sink;        // s: weight moved onto (v,s)
  Weight added_weight;
  bool created_arc;   // (v,s) was absent before the first merge onto it
};

struct VertexDeletion {
  Vertex vertex;
  std::vector<ArcId> incident_arcs;  // original out-arcs removed with it
};

/// Provenance of one reduce() run. Replaying merges and deletions on the
/// original graph reproduces the reduced graph exactly.
struct ReductionLog {
  std::size_t original_vertex_count = 0;
  std::size_t original_arc_count = 0;
  std::vector<MergeEvent> merges;
  std::vector<VertexDeletion> deletions;
  std::vector<Vertex> old_of_new;               // reduced id -> original id
  std::vector<Vertex> new_of_old;               // original id -> reduced id or kNoVertex
  std::vector<std::vector<ArcId>> arc_origins;  // reduced arc -> original arcs

  bool identity() const { return merges.empty() && deletions.empty(); }
};

struct ReduceResult {
  WeightedDag graph;
  ReductionLog log;
};

namespace detail {

struct PendingArc {
  Vertex tail;
  Vertex head;
  Weight weight;
  std::vector<ArcId> origins;
};

// One redirect sweep. Emits the surviving arc list; vertex set unchanged.
inline std::vector<PendingArc> redirect_arcs(const WeightedDag& g,
                                             const SinkReachability& labels,
                                             std::vector<MergeEvent>& merges) {
  const std::size_t n = g.vertex_count();
  std::vector<PendingArc> pending;
  pending.reserve(g.arc_count());

  // Reusable per-tail slot array, stamped instead of cleared.
  std::vector<std::size_t> slot(n, SIZE_MAX);
  std::vector<Vertex> stamped;

  for (Vertex v = 0; v < n; ++v) {
    if (labels.unique(v)) {
      for (ArcId a : g.out_arcs(v))
        pending.push_back({v, g.arc(a).head, g.weight(a), {a}});
      continue;
    }
    stamped.clear();
    std::size_t first = pending.size();
    // Direct arcs to sinks first, so merges find them in constant time.
    for (ArcId a : g.out_arcs(v)) {
      Vertex w = g.arc(a).head;
      if (g.outdegree(w) == 0) {
        slot[w] = pending.size();
        stamped.push_back(w);
        pending.push_back({v, w, g.weight(a), {a}});
      }
    }
    for (ArcId a : g.out_arcs(v)) {
      Vertex w = g.arc(a).head;
      if (g.outdegree(w) == 0) continue;
      if (labels.multiple(w)) {
        pending.push_back({v, w, g.weight(a), {a}});
        continue;
      }
      Vertex s = labels.label[w];
      bool created = slot[s] == SIZE_MAX;
      if (created) {
        slot[s] = pending.size();
        stamped.push_back(s);
        pending.push_back({v, s, 0, {}});
      }
      PendingArc& target = pending[slot[s]];
      target.weight += g.weight(a);
      target.origins.push_back(a);
      merges.push_back({a, v, s, g.weight(a), created});
    }
    for (Vertex s : stamped) slot[s] = SIZE_MAX;
    // Canonical head order within each tail.
    std::sort(pending.begin() + first, pending.end(),
              [](const PendingArc& x, const PendingArc& y) {
                return x.head < y.head;
              });
  }
  return pending;
}

inline ReduceResult assemble(const WeightedDag& g,
                             std::vector<PendingArc> pending,
                             std::vector<MergeEvent> merges,
                             const std::vector<char>& drop_vertex) {
  const std::size_t n = g.vertex_count();
  ReductionLog log;
  log.original_vertex_count = n;
  log.original_arc_count = g.arc_count();
  log.merges = std::move(merges);

  log.new_of_old.assign(n, kNoVertex);
  for (Vertex v = 0; v < n; ++v) {
    if (drop_vertex[v]) {
      log.deletions.push_back({v, {}});
      auto& incident = log.deletions.back().incident_arcs;
      for (ArcId a : g.out_arcs(v)) incident.push_back(a);
    } else {
      log.new_of_old[v] = static_cast<Vertex>(log.old_of_new.size());
      log.old_of_new.push_back(v);
    }
  }

  std::vector<WeightedArc> arcs;
  arcs.reserve(pending.size());
  for (PendingArc& p : pending) {
    if (drop_vertex[p.tail] || drop_vertex[p.head]) continue;
    arcs.push_back(
        WeightedArc{log.new_of_old[p.tail], log.new_of_old[p.head], p.weight});
    log.arc_origins.push_back(std::move(p.origins));
  }
  return ReduceResult{WeightedDag(log.old_of_new.size(), std::move(arcs)),
                      std::move(log)};
}

}  // namespace detail

/// Redirect sweep only: every arc (v,w) with v reaching multiple sinks and
/// w a non-sink reaching exactly sink s is folded onto (v,s).
inline ReduceResult apply_rule1(const WeightedDag& g,
                                const SinkReachability& labels) {
  std::vector<MergeEvent> merges;
  auto pending = detail::redirect_arcs(g, labels, merges);
  std::vector<char> drop(g.vertex_count(), 0);
  return detail::assemble(g, std::move(pending), std::move(merges), drop);
}

/// Deletion sweep only. Requires the redirect sweep to have been applied
/// exhaustively; labels must match g.
inline ReduceResult apply_rule2(const WeightedDag& g,
                                const SinkReachability& labels) {
  std::vector<detail::PendingArc> pending;
  pending.reserve(g.arc_count());
  for (ArcId a = 0; a < g.arc_count(); ++a)
    pending.push_back({g.arc(a).tail, g.arc(a).head, g.weight(a), {a}});
  std::vector<char> drop(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (g.outdegree(v) > 0 && labels.unique(v)) drop[v] = 1;
  return detail::assemble(g, std::move(pending), {}, drop);
}

/// Exhaustive application of both rules in one pass: labels, redirect
/// sweep, deletion sweep. The output is a fixpoint of both rules and
/// preserves the optimal partitioning-set weight. Runs in O(n+m).
inline ReduceResult reduce(const WeightedDag& g) {
  auto labels = compute_sink_labels(g);
  std::vector<MergeEvent> merges;
  auto pending = detail::redirect_arcs(g, labels, merges);
  // Redirecting never changes which sinks a vertex reaches, so the
  // labels stay valid for the deletion sweep.
  std::vector<char> drop(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (g.outdegree(v) > 0 && labels.unique(v)) drop[v] = 1;
  return detail::assemble(g, std::move(pending), std::move(merges), drop);
}

/// Expands a witness for the reduced graph into a witness for the original
/// graph of equal total weight.
inline PartitioningSet lift_witness(const WeightedDag& original,
                                    const ReductionLog& log,
                                    const PartitioningSet& reduced_set) {
  std::vector<ArcId> ids;
  for (ArcId a : reduced_set.arcs()) {
    if (a >= log.arc_origins.size())
      throw Error("witness references an arc absent from the reduced graph");
    for (ArcId o : log.arc_origins[a]) ids.push_back(o);
  }
  auto lifted = PartitioningSet::of(original, std::move(ids));
  assert(lifted.total_weight() == reduced_set.total_weight());
  return lifted;
}

}  // namespace dagp
