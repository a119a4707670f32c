#pragma once

// Weighted-DAG core: graph representation, orderings, component analysis,
// and partitioning-set validation shared by all solvers.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dagp {

using Vertex = std::uint32_t;
using ArcId = std::uint32_t;
using Weight = std::uint64_t;

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
inline constexpr ArcId kNoArc = std::numeric_limits<ArcId>::max();

// Headroom so that weight sums and the k+1 budget trick never wrap.
inline constexpr Weight kMaxTotalWeight = Weight{1} << 62;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Arc {
  Vertex tail = 0;
  Vertex head = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct WeightedArc {
  Vertex tail = 0;
  Vertex head = 0;
  Weight weight = 1;
};

/// Immutable simple DAG with positive integer arc weights.
/// Vertex ids are dense and 0-based; arc ids index the arc sequence.
class WeightedDag {
 public:
  WeightedDag() = default;

  WeightedDag(std::size_t vertex_count, std::vector<WeightedArc> arcs) {
    n_ = vertex_count;
    arcs_.reserve(arcs.size());
    weights_.reserve(arcs.size());
    Weight total = 0;
    for (const WeightedArc& a : arcs) {
      if (a.tail >= n_ || a.head >= n_)
        throw Error("arc endpoint out of range");
      if (a.tail == a.head) throw Error("self-loop rejected");
      if (a.weight == 0) throw Error("arc weight must be at least one");
      if (a.weight > kMaxTotalWeight - total)
        throw Error("total arc weight overflows");
      total += a.weight;
      arcs_.push_back(Arc{a.tail, a.head});
      weights_.push_back(a.weight);
    }
    total_weight_ = total;
    build_adjacency();
    check_simple();
    check_acyclic();
  }

  std::size_t vertex_count() const { return n_; }
  std::size_t arc_count() const { return arcs_.size(); }
  Arc arc(ArcId a) const { return arcs_[a]; }
  Weight weight(ArcId a) const { return weights_[a]; }
  Weight total_weight() const { return total_weight_; }

  std::span<const ArcId> out_arcs(Vertex v) const {
    return {out_ids_.data() + out_off_[v], out_off_[v + 1] - out_off_[v]};
  }
  std::span<const ArcId> in_arcs(Vertex v) const {
    return {in_ids_.data() + in_off_[v], in_off_[v + 1] - in_off_[v]};
  }
  std::size_t outdegree(Vertex v) const {
    return out_off_[v + 1] - out_off_[v];
  }
  std::size_t indegree(Vertex v) const { return in_off_[v + 1] - in_off_[v]; }

  /// Arc id of (tail, head) or kNoArc. Linear in outdegree(tail).
  ArcId find_arc(Vertex tail, Vertex head) const {
    for (ArcId a : out_arcs(tail))
      if (arcs_[a].head == head) return a;
    return kNoArc;
  }

 private:
  void build_adjacency() {
    out_off_.assign(n_ + 1, 0);
    in_off_.assign(n_ + 1, 0);
    for (const Arc& a : arcs_) {
      ++out_off_[a.tail + 1];
      ++in_off_[a.head + 1];
    }
    std::partial_sum(out_off_.begin(), out_off_.end(), out_off_.begin());
    std::partial_sum(in_off_.begin(), in_off_.end(), in_off_.begin());
    out_ids_.resize(arcs_.size());
    in_ids_.resize(arcs_.size());
    std::vector<std::size_t> opos(out_off_.begin(), out_off_.end() - 1);
    std::vector<std::size_t> ipos(in_off_.begin(), in_off_.end() - 1);
    for (ArcId a = 0; a < arcs_.size(); ++a) {
      out_ids_[opos[arcs_[a].tail]++] = a;
      in_ids_[ipos[arcs_[a].head]++] = a;
    }
  }

  void check_simple() const {
    // Adjacency lists preserve arc-id order, so equal heads are found by
    // sorting a per-vertex copy only when the degree exceeds one.
    std::vector<Vertex> heads;
    for (Vertex v = 0; v < n_; ++v) {
      if (outdegree(v) < 2) continue;
      heads.clear();
      for (ArcId a : out_arcs(v)) heads.push_back(arcs_[a].head);
      std::sort(heads.begin(), heads.end());
      if (std::adjacent_find(heads.begin(), heads.end()) != heads.end())
        throw Error("duplicate arc rejected");
    }
  }

  void check_acyclic() const {
    std::vector<std::size_t> indeg(n_);
    for (Vertex v = 0; v < n_; ++v) indeg[v] = indegree(v);
    std::vector<Vertex> queue;
    queue.reserve(n_);
    for (Vertex v = 0; v < n_; ++v)
      if (indeg[v] == 0) queue.push_back(v);
    std::size_t processed = 0;
    while (processed < queue.size()) {
      Vertex v = queue[processed++];
      for (ArcId a : out_arcs(v))
        if (--indeg[arcs_[a].head] == 0) queue.push_back(arcs_[a].head);
    }
    if (processed != n_) throw Error("not a DAG: cycle detected");
  }

  std::size_t n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<Weight> weights_;
  Weight total_weight_ = 0;
  std::vector<std::size_t> out_off_, in_off_;
  std::vector<ArcId> out_ids_, in_ids_;
};

/// Arc subset with cached total weight; the solution/witness type.
class PartitioningSet {
 public:
  PartitioningSet() = default;

  static PartitioningSet of(const WeightedDag& g, std::vector<ArcId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    Weight total = 0;
    for (ArcId a : ids) {
      if (a >= g.arc_count()) throw Error("unknown arc id in partitioning set");
      total += g.weight(a);
    }
    PartitioningSet s;
    s.arcs_ = std::move(ids);
    s.total_weight_ = total;
    return s;
  }

  const std::vector<ArcId>& arcs() const { return arcs_; }
  Weight total_weight() const { return total_weight_; }
  std::size_t size() const { return arcs_.size(); }
  bool empty() const { return arcs_.empty(); }
  bool contains(ArcId a) const {
    return std::binary_search(arcs_.begin(), arcs_.end(), a);
  }

  /// Membership mask over all arcs of g.
  std::vector<char> mask(const WeightedDag& g) const {
    std::vector<char> m(g.arc_count(), 0);
    for (ArcId a : arcs_) m[a] = 1;
    return m;
  }

  friend bool operator==(const PartitioningSet&, const PartitioningSet&) =
      default;

 private:
  std::vector<ArcId> arcs_;
  Weight total_weight_ = 0;
};

/// Reverse topological order: for every arc (u,v), v appears before u.
/// Kahn's method on outdegrees with ascending-id tie-breaking.
inline std::vector<Vertex> reverse_topological_order(const WeightedDag& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> pending(n);
  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
  for (Vertex v = 0; v < n; ++v) {
    pending[v] = g.outdegree(v);
    if (pending[v] == 0) ready.push(v);
  }
  std::vector<Vertex> order;
  order.reserve(n);
  while (!ready.empty()) {
    Vertex v = ready.top();
    ready.pop();
    order.push_back(v);
    for (ArcId a : g.in_arcs(v))
      if (--pending[g.arc(a).tail] == 0) ready.push(g.arc(a).tail);
  }
  if (order.size() != n) throw Error("not a DAG: cycle detected");
  return order;
}

inline std::vector<Vertex> sinks(const WeightedDag& g) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (g.outdegree(v) == 0) out.push_back(v);
  return out;
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), Vertex{0});
  }
  Vertex find(Vertex v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller root wins so component ids are stable.
    if (a < b)
      parent_[b] = a;
    else
      parent_[a] = b;
  }

 private:
  std::vector<Vertex> parent_;
};

// Component id (smallest member vertex) per vertex, ignoring deleted arcs.
inline std::vector<Vertex> component_ids(const WeightedDag& g,
                                         const std::vector<char>& deleted) {
  UnionFind uf(g.vertex_count());
  for (ArcId a = 0; a < g.arc_count(); ++a)
    if (!deleted[a]) uf.unite(g.arc(a).tail, g.arc(a).head);
  std::vector<Vertex> ids(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) ids[v] = uf.find(v);
  return ids;
}

}  // namespace detail

/// Weakly connected components of g with the given arcs removed,
/// as a partition of the vertex ids.
inline std::vector<std::vector<Vertex>> weak_components(
    const WeightedDag& g, const PartitioningSet& deleted) {
  auto ids = detail::component_ids(g, deleted.mask(g));
  std::vector<std::vector<Vertex>> parts;
  std::vector<std::size_t> slot(g.vertex_count(), SIZE_MAX);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    Vertex root = ids[v];
    if (slot[root] == SIZE_MAX) {
      slot[root] = parts.size();
      parts.emplace_back();
    }
    parts[slot[root]].push_back(v);
  }
  return parts;
}

inline std::vector<std::vector<Vertex>> weak_components(
    const WeightedDag& g, std::span<const ArcId> deleted_ids) {
  std::vector<ArcId> ids(deleted_ids.begin(), deleted_ids.end());
  return weak_components(g, PartitioningSet::of(g, std::move(ids)));
}

/// True iff every weak component of g minus s has exactly one sink of
/// the remaining graph.
inline bool is_valid_partitioning_set(const WeightedDag& g,
                                      const PartitioningSet& s) {
  const std::size_t n = g.vertex_count();
  auto deleted = s.mask(g);
  std::vector<std::size_t> outdeg(n);
  for (Vertex v = 0; v < n; ++v) outdeg[v] = g.outdegree(v);
  for (ArcId a : s.arcs()) --outdeg[g.arc(a).tail];

  auto comp = detail::component_ids(g, deleted);
  std::vector<std::uint32_t> sink_count(n, 0);
  for (Vertex v = 0; v < n; ++v)
    if (outdeg[v] == 0) ++sink_count[comp[v]];
  for (Vertex v = 0; v < n; ++v)
    if (comp[v] == v && sink_count[v] != 1) return false;
  return true;
}

/// True iff every vertex of g minus s can reach exactly one sink by
/// directed paths. Equivalent to is_valid_partitioning_set on DAGs.
inline bool reaches_exactly_one_sink(const WeightedDag& g,
                                     const PartitioningSet& s) {
  const std::size_t n = g.vertex_count();
  auto deleted = s.mask(g);
  std::vector<std::size_t> outdeg(n);
  for (Vertex v = 0; v < n; ++v) outdeg[v] = g.outdegree(v);
  for (ArcId a : s.arcs()) --outdeg[g.arc(a).tail];

  // label[v]: the unique reachable sink, or kNoVertex for "multiple".
  std::vector<Vertex> label(n, kNoVertex);
  for (Vertex v : reverse_topological_order(g)) {
    if (outdeg[v] == 0) {
      label[v] = v;
      continue;
    }
    Vertex seen = kNoVertex;
    bool multiple = false;
    for (ArcId a : g.out_arcs(v)) {
      if (deleted[a]) continue;
      Vertex lw = label[g.arc(a).head];
      if (lw == kNoVertex || (seen != kNoVertex && lw != seen)) {
        multiple = true;
        break;
      }
      seen = lw;
    }
    if (multiple) return false;
    label[v] = seen;
  }
  return true;
}

/// Inclusion-minimal subset of a valid partitioning set, obtained by
/// restoring arcs in ascending id order whenever validity is preserved.
inline PartitioningSet minimalize(const WeightedDag& g,
                                  const PartitioningSet& s) {
  if (!is_valid_partitioning_set(g, s))
    throw Error("minimalize requires a valid partitioning set");
  std::vector<ArcId> kept(s.arcs().begin(), s.arcs().end());
  for (ArcId a : s.arcs()) {
    std::vector<ArcId> trial;
    trial.reserve(kept.size());
    for (ArcId b : kept)
      if (b != a) trial.push_back(b);
    auto candidate = PartitioningSet::of(g, trial);
    if (is_valid_partitioning_set(g, candidate)) kept = std::move(trial);
  }
  return PartitioningSet::of(g, std::move(kept));
}

}  // namespace dagp
