#pragma once

// Search-tree decision solver: process vertices in reverse topological
// order; sinks and unanimous vertices are labeled without branching;
// otherwise branch on every feasible sink. Three reduction modes, plus a
// minimization wrapper driving the decision procedure.

#include <chrono>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dagp/graph.hpp"
#include "dagp/reduction.hpp"

namespace dagp {

enum class ReductionMode { None, Initial, Interleaved };

struct SearchConfig {
  ReductionMode mode = ReductionMode::Interleaved;
  Weight budget = 0;
  std::optional<std::uint64_t> node_limit;
  std::optional<std::chrono::milliseconds> time_limit;
  bool collect_witness = true;
  // Interleaved mode re-reduces at branch depths divisible by the stride.
  std::size_t reduce_stride = 1;
};

struct SearchStats {
  std::uint64_t nodes_expanded = 0;
  std::size_t max_depth = 0;
  std::chrono::milliseconds wall_time{0};
};

enum class SolveStatus { Yes, No, LimitReached };

struct DecisionResult {
  SolveStatus status = SolveStatus::No;
  std::optional<PartitioningSet> witness;
  SearchStats stats;
};

struct MinimizeResult {
  SolveStatus status = SolveStatus::Yes;  // Yes, or LimitReached if capped
  Weight weight = 0;
  std::optional<PartitioningSet> witness;
  SearchStats stats;
};

namespace detail {

class Deadline {
 public:
  Deadline(std::optional<std::uint64_t> node_limit,
           std::optional<std::chrono::milliseconds> time_limit)
      : node_cap_(node_limit ? *node_limit : UINT64_MAX) {
    if (time_limit)
      time_cap_ = std::chrono::steady_clock::now() + *time_limit;
  }

  // Called with the running node count; false once a limit is hit.
  bool admit(std::uint64_t nodes_now) {
    if (nodes_now > node_cap_) return false;
    if (time_cap_ && (nodes_now & 0xff) == 0 &&
        std::chrono::steady_clock::now() >= *time_cap_)
      return false;
    return true;
  }

 private:
  std::uint64_t node_cap_;
  std::optional<std::chrono::steady_clock::time_point> time_cap_;
};

// In-place search on a fixed graph. Labels are assigned along the current
// branch and undone through a trail; an explicit stack keeps recursion
// depth off the machine stack.
class PlainSearch {
 public:
  PlainSearch(const WeightedDag& g, Weight budget, bool collect_witness,
              Deadline& deadline, SearchStats& stats)
      : g_(g),
        budget_(budget),
        collect_witness_(collect_witness),
        deadline_(deadline),
        stats_(stats),
        order_(reverse_topological_order(g)),
        label_(g.vertex_count(), kNoVertex) {}

  SolveStatus run(std::vector<ArcId>& witness_out) {
    struct Frame {
      std::size_t pos;  // order_index of the branch vertex
      std::vector<Vertex> feasible;
      std::size_t next = 0;
      std::size_t trail_mark = 0;
      std::size_t chosen_mark = 0;
      Weight weight_mark = 0;
    };
    std::vector<Frame> stack;

    // Root call.
    ++stats_.nodes_expanded;
    if (!deadline_.admit(stats_.nodes_expanded))
      return SolveStatus::LimitReached;
    Step step = advance(0);
    if (step.done) {
      if (weight_ <= budget_) {
        if (collect_witness_) witness_out = chosen_;
        return SolveStatus::Yes;
      }
      return SolveStatus::No;
    }
    if (weight_ + (step.feasible.size() - 1) <= budget_)
      stack.push_back(Frame{step.pos, std::move(step.feasible), 0,
                            trail_.size(), chosen_.size(), weight_});

    while (!stack.empty()) {
      Frame& f = stack.back();
      stats_.max_depth = std::max(stats_.max_depth, stack.size());
      unwind(f.trail_mark, f.chosen_mark, f.weight_mark);
      if (f.next == f.feasible.size()) {
        stack.pop_back();
        continue;
      }
      Vertex s = f.feasible[f.next++];
      Vertex v = order_[f.pos];
      std::size_t pos = f.pos;
      set_label(v, s);
      for (ArcId a : g_.out_arcs(v)) {
        if (label_[g_.arc(a).head] != s) {
          chosen_.push_back(a);
          weight_ += g_.weight(a);
        }
      }
      ++stats_.nodes_expanded;
      if (!deadline_.admit(stats_.nodes_expanded))
        return SolveStatus::LimitReached;
      Step child = advance(pos + 1);  // may invalidate nothing; f unused below
      if (child.done) {
        if (weight_ <= budget_) {
          if (collect_witness_) witness_out = chosen_;
          return SolveStatus::Yes;
        }
        continue;
      }
      if (weight_ + (child.feasible.size() - 1) > budget_) continue;
      stack.push_back(Frame{child.pos, std::move(child.feasible), 0,
                            trail_.size(), chosen_.size(), weight_});
    }
    return SolveStatus::No;
  }

 private:
  struct Step {
    bool done = false;
    std::size_t pos = 0;
    std::vector<Vertex> feasible;  // distinct neighbor sinks, ascending
  };

  // Labels sinks and unanimous vertices from order_[pos] onward; stops at
  // the first vertex whose out-neighbors carry distinct sinks.
  Step advance(std::size_t pos) {
    for (; pos < order_.size(); ++pos) {
      Vertex v = order_[pos];
      if (g_.outdegree(v) == 0) {
        set_label(v, v);
        continue;
      }
      auto arcs = g_.out_arcs(v);
      Vertex first = label_[g_.arc(arcs[0]).head];
      bool unanimous = true;
      for (ArcId a : arcs) {
        if (label_[g_.arc(a).head] != first) {
          unanimous = false;
          break;
        }
      }
      if (unanimous) {
        set_label(v, first);
        continue;
      }
      Step step;
      step.pos = pos;
      step.feasible.reserve(arcs.size());
      for (ArcId a : arcs) step.feasible.push_back(label_[g_.arc(a).head]);
      std::sort(step.feasible.begin(), step.feasible.end());
      step.feasible.erase(
          std::unique(step.feasible.begin(), step.feasible.end()),
          step.feasible.end());
      return step;
    }
    Step step;
    step.done = true;
    return step;
  }

  void set_label(Vertex v, Vertex s) {
    label_[v] = s;
    trail_.push_back(v);
  }

  void unwind(std::size_t trail_mark, std::size_t chosen_mark,
              Weight weight_mark) {
    while (trail_.size() > trail_mark) {
      label_[trail_.back()] = kNoVertex;
      trail_.pop_back();
    }
    chosen_.resize(chosen_mark);
    weight_ = weight_mark;
  }

  const WeightedDag& g_;
  Weight budget_;
  bool collect_witness_;
  Deadline& deadline_;
  SearchStats& stats_;
  std::vector<Vertex> order_;
  std::vector<Vertex> label_;
  std::vector<Vertex> trail_;
  std::vector<ArcId> chosen_;
  Weight weight_ = 0;
};

// First mixed vertex of an instance under the deterministic labeling
// pass, together with the labels computed so far.
struct BranchPoint {
  bool partitioned = false;
  Vertex vertex = kNoVertex;
  std::vector<Vertex> feasible;
  std::vector<Vertex> label;
};

inline BranchPoint find_branch_point(const WeightedDag& g) {
  BranchPoint bp;
  bp.label.assign(g.vertex_count(), kNoVertex);
  for (Vertex v : reverse_topological_order(g)) {
    if (g.outdegree(v) == 0) {
      bp.label[v] = v;
      continue;
    }
    Vertex first = bp.label[g.arc(g.out_arcs(v)[0]).head];
    bool unanimous = true;
    for (ArcId a : g.out_arcs(v))
      if (bp.label[g.arc(a).head] != first) {
        unanimous = false;
        break;
      }
    if (unanimous) {
      bp.label[v] = first;
      continue;
    }
    bp.vertex = v;
    for (ArcId a : g.out_arcs(v))
      bp.feasible.push_back(bp.label[g.arc(a).head]);
    std::sort(bp.feasible.begin(), bp.feasible.end());
    bp.feasible.erase(std::unique(bp.feasible.begin(), bp.feasible.end()),
                      bp.feasible.end());
    return bp;
  }
  bp.partitioned = true;
  return bp;
}

// Interleaved engine. Every node re-reduces its residual instance
// (restricted by the stride), finds the first mixed vertex, and branches
// by recursing on the instance minus the deleted arcs. Witnesses travel
// back up through per-node arc translations and reduction logs.
class InterleavedSearch {
 public:
  InterleavedSearch(Weight budget, bool collect_witness, std::size_t stride,
                    Deadline& deadline, SearchStats& stats)
      : budget_(budget),
        collect_witness_(collect_witness),
        stride_(stride == 0 ? 1 : stride),
        deadline_(deadline),
        stats_(stats) {}

  SolveStatus run(const WeightedDag& root, std::vector<ArcId>& witness_out) {
    std::vector<Frame> stack;
    ++stats_.nodes_expanded;
    if (!deadline_.admit(stats_.nodes_expanded))
      return SolveStatus::LimitReached;
    stack.push_back(make_frame(WeightedDag(root), 0, 0));

    // While delivering a witness upward, `partial` holds arc ids of the
    // top frame's active graph, already including that frame's own cuts.
    std::vector<ArcId> partial;
    bool have_witness = false;

    while (!stack.empty()) {
      Frame& f = stack.back();
      stats_.max_depth = std::max(stats_.max_depth, stack.size());

      if (have_witness) {
        std::vector<ArcId> input_ids = to_input_ids(f, partial);
        if (stack.size() == 1) {
          if (collect_witness_) witness_out = std::move(input_ids);
          return SolveStatus::Yes;
        }
        // This frame's input arcs came from the parent's active graph.
        partial.clear();
        partial.reserve(input_ids.size());
        for (ArcId a : input_ids) partial.push_back(f.child_to_active[a]);
        Frame& parent = stack[stack.size() - 2];
        partial.insert(partial.end(), parent.pending_deleted.begin(),
                       parent.pending_deleted.end());
        stack.pop_back();
        continue;
      }

      if (f.branch.partitioned) {
        if (f.spent <= budget_) {
          have_witness = true;
          partial.clear();  // nothing cut at this node
          continue;
        }
        stack.pop_back();
        continue;
      }

      if (f.next == 0 &&
          f.spent + (f.branch.feasible.size() - 1) > budget_) {
        stack.pop_back();
        continue;
      }
      if (f.next >= f.branch.feasible.size()) {
        stack.pop_back();
        continue;
      }

      Vertex s = f.branch.feasible[f.next++];
      const WeightedDag& cur = active(f);
      Vertex v = f.branch.vertex;
      std::vector<ArcId> deleted;
      Weight cost = 0;
      for (ArcId a : cur.out_arcs(v)) {
        if (f.branch.label[cur.arc(a).head] != s) {
          deleted.push_back(a);
          cost += cur.weight(a);
        }
      }
      Weight spent = f.spent + cost;
      if (spent > budget_) continue;  // cannot lead to a witness

      std::vector<char> drop(cur.arc_count(), 0);
      for (ArcId a : deleted) drop[a] = 1;
      std::vector<WeightedArc> arcs;
      std::vector<ArcId> child_to_active;
      arcs.reserve(cur.arc_count() - deleted.size());
      child_to_active.reserve(cur.arc_count() - deleted.size());
      for (ArcId a = 0; a < cur.arc_count(); ++a) {
        if (drop[a]) continue;
        arcs.push_back(
            WeightedArc{cur.arc(a).tail, cur.arc(a).head, cur.weight(a)});
        child_to_active.push_back(a);
      }
      WeightedDag child_graph(cur.vertex_count(), std::move(arcs));
      f.pending_deleted = std::move(deleted);

      ++stats_.nodes_expanded;
      if (!deadline_.admit(stats_.nodes_expanded))
        return SolveStatus::LimitReached;
      std::size_t depth = stack.size();
      Frame child = make_frame(std::move(child_graph), spent, depth);
      child.child_to_active = std::move(child_to_active);
      stack.push_back(std::move(child));  // f dangles from here on
    }

    if (have_witness) {
      if (collect_witness_) witness_out = std::move(partial);
      return SolveStatus::Yes;
    }
    return SolveStatus::No;
  }

 private:
  struct Frame {
    WeightedDag input;  // residual instance handed to this node
    Weight spent = 0;
    std::optional<ReduceResult> red;  // nullopt when the stride skips
    BranchPoint branch;
    std::size_t next = 0;
    std::vector<ArcId> pending_deleted;  // active ids cut for current child
    std::vector<ArcId> child_to_active;  // set by the parent when pushed
  };

  const WeightedDag& active(const Frame& f) const {
    return f.red ? f.red->graph : f.input;
  }

  Frame make_frame(WeightedDag input, Weight spent, std::size_t depth) {
    Frame f;
    f.input = std::move(input);
    f.spent = spent;
    if (depth % stride_ == 0) f.red = reduce(f.input);
    f.branch = find_branch_point(active(f));
    return f;
  }

  // Active-graph arc ids -> this frame's input-graph arc ids.
  std::vector<ArcId> to_input_ids(const Frame& f,
                                  const std::vector<ArcId>& active_ids) const {
    if (!f.red) return active_ids;
    std::vector<ArcId> out;
    out.reserve(active_ids.size());
    for (ArcId a : active_ids)
      for (ArcId o : f.red->log.arc_origins[a]) out.push_back(o);
    return out;
  }

  Weight budget_;
  bool collect_witness_;
  std::size_t stride_;
  Deadline& deadline_;
  SearchStats& stats_;
};

}  // namespace detail

/// Decision procedure: a witness of weight at most cfg.budget if one
/// exists, No otherwise, or LimitReached when the node or time budget ran
/// out before an answer was proven.
inline DecisionResult solve_decision(const WeightedDag& g,
                                     const SearchConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  DecisionResult result;
  detail::Deadline deadline(cfg.node_limit, cfg.time_limit);
  std::vector<ArcId> witness_ids;

  switch (cfg.mode) {
    case ReductionMode::None: {
      detail::PlainSearch search(g, cfg.budget, cfg.collect_witness, deadline,
                                 result.stats);
      result.status = search.run(witness_ids);
      if (result.status == SolveStatus::Yes && cfg.collect_witness)
        result.witness = PartitioningSet::of(g, std::move(witness_ids));
      break;
    }
    case ReductionMode::Initial: {
      ReduceResult red = reduce(g);
      detail::PlainSearch search(red.graph, cfg.budget, cfg.collect_witness,
                                 deadline, result.stats);
      result.status = search.run(witness_ids);
      if (result.status == SolveStatus::Yes && cfg.collect_witness)
        result.witness = lift_witness(
            g, red.log, PartitioningSet::of(red.graph, std::move(witness_ids)));
      break;
    }
    case ReductionMode::Interleaved: {
      detail::InterleavedSearch search(cfg.budget, cfg.collect_witness,
                                       cfg.reduce_stride, deadline,
                                       result.stats);
      result.status = search.run(g, witness_ids);
      if (result.status == SolveStatus::Yes && cfg.collect_witness)
        result.witness = PartitioningSet::of(g, std::move(witness_ids));
      break;
    }
  }
  result.stats.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

/// Minimum-weight partitioning set via exponential probing of the budget
/// (0, 1, 2, 4, ...) followed by binary search on the final interval.
inline MinimizeResult solve_minimize(
    const WeightedDag& g, ReductionMode mode,
    std::optional<std::uint64_t> node_limit = std::nullopt,
    std::optional<std::chrono::milliseconds> time_limit = std::nullopt) {
  auto start = std::chrono::steady_clock::now();
  MinimizeResult result;
  auto deadline_end =
      time_limit ? std::optional(std::chrono::steady_clock::now() + *time_limit)
                 : std::nullopt;

  auto probe = [&](Weight k) -> DecisionResult {
    SearchConfig cfg;
    cfg.mode = mode;
    cfg.budget = k;
    if (node_limit) {
      std::uint64_t used = result.stats.nodes_expanded;
      cfg.node_limit = *node_limit > used ? *node_limit - used : 0;
    }
    if (deadline_end) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          *deadline_end - std::chrono::steady_clock::now());
      cfg.time_limit = left.count() > 0 ? left : std::chrono::milliseconds(0);
    }
    DecisionResult r = solve_decision(g, cfg);
    result.stats.nodes_expanded += r.stats.nodes_expanded;
    result.stats.max_depth = std::max(result.stats.max_depth, r.stats.max_depth);
    return r;
  };

  std::optional<PartitioningSet> best;
  Weight hi = 0;
  auto finish = [&](SolveStatus status) {
    result.status = status;
    result.weight = hi;
    result.witness = std::move(best);
    result.stats.wall_time =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
    return result;
  };

  const Weight all = g.total_weight();  // deleting everything always works

  // Exponential phase: k = 0, 1, 2, 4, ... until yes.
  Weight lo = 0;  // largest budget answered "no"
  bool found = false;
  for (Weight k = 0; !found; k = (k == 0 ? 1 : k * 2)) {
    if (k > all) k = all;
    DecisionResult r = probe(k);
    if (r.status == SolveStatus::LimitReached)
      return finish(SolveStatus::LimitReached);
    if (r.status == SolveStatus::Yes) {
      hi = r.witness ? r.witness->total_weight() : k;
      best = std::move(r.witness);
      found = true;
      break;
    }
    lo = k;
    if (k == all) throw Error("internal: deleting all arcs must partition");
  }

  // Binary phase: lo answered "no", hi is achieved by a witness.
  while (hi > 0 && hi > lo + 1) {
    Weight mid = lo + (hi - lo) / 2;
    DecisionResult r = probe(mid);
    if (r.status == SolveStatus::LimitReached)
      return finish(SolveStatus::LimitReached);
    if (r.status == SolveStatus::Yes) {
      Weight w = r.witness ? r.witness->total_weight() : mid;
      hi = std::min(hi, w);
      best = std::move(r.witness);
    } else {
      lo = mid;
    }
  }
  return finish(SolveStatus::Yes);
}

}  // namespace dagp
