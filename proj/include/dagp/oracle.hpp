#pragma once

// Independent brute-force ground truth: exhaustive minimum partitioning
// sets, exhaustive partial-solution tables per decomposition node, and a
// SAT decision by assignment enumeration. Deliberately kept free of the
// solvers' machinery.

#include <map>
#include <vector>

#include "dagp/generators.hpp"
#include "dagp/graph.hpp"
#include "dagp/treewidth.hpp"

namespace dagp {

struct BruteForceResult {
  Weight weight = 0;
  PartitioningSet witness;
};

/// Enumerates all 2^m arc subsets; the minimum-weight valid one wins, ties
/// broken by the lexicographically smallest arc-id set. Enforces m <= 22.
inline BruteForceResult brute_force_min(const WeightedDag& g) {
  const std::size_t m = g.arc_count();
  if (m > 22) throw Error("brute force limited to 22 arcs");
  const std::size_t n = g.vertex_count();

  std::vector<std::size_t> outdeg_base(n);
  for (Vertex v = 0; v < n; ++v) outdeg_base[v] = g.outdegree(v);

  Weight best_weight = g.total_weight() + 1;
  std::uint32_t best_mask = 0;
  std::vector<std::size_t> outdeg(n);
  std::vector<Vertex> parent(n);
  std::vector<std::uint32_t> sink_count(n);

  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
    Weight w = 0;
    bool over = false;
    for (std::size_t a = 0; a < m && !over; ++a)
      if (mask >> a & 1) {
        w += g.weight(static_cast<ArcId>(a));
        over = w > best_weight;
      }
    if (over || w > best_weight) continue;

    // Validity: every component of the remaining graph has one sink.
    outdeg = outdeg_base;
    for (Vertex v = 0; v < n; ++v) parent[v] = v;
    auto find = [&](Vertex v) {
      while (parent[v] != v) {
        parent[v] = parent[parent[v]];
        v = parent[v];
      }
      return v;
    };
    for (std::size_t a = 0; a < m; ++a) {
      if (mask >> a & 1) {
        --outdeg[g.arc(static_cast<ArcId>(a)).tail];
        continue;
      }
      Vertex x = find(g.arc(static_cast<ArcId>(a)).tail);
      Vertex y = find(g.arc(static_cast<ArcId>(a)).head);
      if (x != y) parent[std::max(x, y)] = std::min(x, y);
    }
    std::fill(sink_count.begin(), sink_count.end(), 0);
    for (Vertex v = 0; v < n; ++v)
      if (outdeg[v] == 0) ++sink_count[find(v)];
    bool valid = true;
    for (Vertex v = 0; v < n && valid; ++v)
      if (find(v) == v && sink_count[v] != 1) valid = false;
    if (!valid) continue;

    if (w < best_weight) {
      best_weight = w;
      best_mask = mask;
    } else if (w == best_weight) {
      // Equal weight: smaller arc-id sequence wins. With both masks sorted
      // ascending by construction, the numerically smaller mask whose
      // lowest differing bit is set in the OTHER mask is lexicographically
      // smaller; comparing the id sequences directly keeps this obvious.
      std::uint32_t diff = best_mask ^ mask;
      if (diff != 0 && (mask >> __builtin_ctz(diff) & 1)) best_mask = mask;
    }
  }

  BruteForceResult result;
  std::vector<ArcId> ids;
  for (std::size_t a = 0; a < m; ++a)
    if (best_mask >> a & 1) ids.push_back(static_cast<ArcId>(a));
  result.witness = PartitioningSet::of(g, std::move(ids));
  result.weight = result.witness.total_weight();
  return result;
}

/// Exhaustive assignment enumeration; n <= 20 enforced.
inline bool sat_brute(const CnfFormula& cnf) {
  if (cnf.variable_count > 20) throw Error("sat brute force limited to 20 variables");
  const std::uint32_t assignments = std::uint32_t{1} << cnf.variable_count;
  for (std::uint32_t a = 0; a < assignments; ++a) {
    bool all = true;
    for (const auto& clause : cnf.clauses) {
      bool any = false;
      for (int lit : clause) {
        std::size_t var = static_cast<std::size_t>(lit > 0 ? lit : -lit) - 1;
        bool value = a >> var & 1;
        any |= (lit > 0) == value;
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return cnf.clauses.empty();
}

namespace detail {

// Restricted-growth-string enumeration of all partitions of {0..k-1}.
template <typename Fn>
void for_each_set_partition(std::size_t k, Fn&& fn) {
  std::vector<std::size_t> rgs(k, 0);
  std::vector<std::size_t> max_prefix(k, 0);
  for (;;) {
    fn(rgs);
    std::size_t i = k;
    while (i-- > 1) {
      if (rgs[i] <= max_prefix[i - 1]) {
        ++rgs[i];
        max_prefix[i] = std::max(max_prefix[i - 1], rgs[i]);
        for (std::size_t j = i + 1; j < k; ++j) {
          rgs[j] = 0;
          max_prefix[j] = max_prefix[j - 1];
        }
        break;
      }
      if (i == 1) return;
    }
    if (k <= 1) return;
  }
}

}  // namespace detail

/// Direct evaluation of a decomposition node's table semantics: for every
/// arc subset of the descendant-induced subgraph that is a partial
/// partitioning set, aggregate the minimum weight per satisfied pattern
/// (the canonical pattern and every admissible coarsening of it).
inline std::map<std::vector<std::uint64_t>, Weight> enumerate_partial_solutions(
    const WeightedDag& g, const std::vector<Vertex>& bag,
    const std::vector<Vertex>& descendants,
    std::vector<Pattern>* patterns_out = nullptr) {
  // Induced subgraph on the descendant set.
  std::vector<char> in_ux(g.vertex_count(), 0);
  for (Vertex v : descendants) in_ux[v] = 1;
  for (Vertex v : bag)
    if (!in_ux[v]) throw Error("bag must be contained in the descendant set");
  std::vector<ArcId> arcs;
  for (ArcId a = 0; a < g.arc_count(); ++a)
    if (in_ux[g.arc(a).tail] && in_ux[g.arc(a).head]) arcs.push_back(a);
  if (arcs.size() > 18) throw Error("partial-solution oracle limited to 18 arcs");

  std::vector<Vertex> bag_sorted = bag;
  std::sort(bag_sorted.begin(), bag_sorted.end());
  auto in_bag = [&](Vertex v) {
    return std::binary_search(bag_sorted.begin(), bag_sorted.end(), v);
  };

  auto encode = [](const Pattern& p) {
    std::vector<std::uint64_t> key;
    key.push_back(p.externals.size());
    for (Vertex v : p.externals) key.push_back(v);
    key.push_back(UINT64_MAX);
    for (auto [a, b] : p.g_arcs) key.push_back((std::uint64_t(a) << 32) | b);
    key.push_back(UINT64_MAX);
    for (auto [a, b] : p.r_arcs) key.push_back((std::uint64_t(a) << 32) | b);
    key.push_back(UINT64_MAX);
    for (const auto& part : p.parts) {
      for (Vertex v : part) key.push_back(v);
      key.push_back(UINT64_MAX - 1);
    }
    return key;
  };

  std::map<std::vector<std::uint64_t>, Weight> table;
  std::map<std::vector<std::uint64_t>, Pattern> decoded;

  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << arcs.size()); ++mask) {
    Weight w = 0;
    std::vector<char> deleted(g.arc_count(), 0);
    for (std::size_t i = 0; i < arcs.size(); ++i)
      if (mask >> i & 1) {
        deleted[arcs[i]] = 1;
        w += g.weight(arcs[i]);
      }

    // Components, remaining outdegrees, and bag-reachability inside U_x.
    detail::UnionFind uf(g.vertex_count());
    std::vector<std::size_t> outdeg(g.vertex_count(), 0);
    for (ArcId a : arcs) {
      if (deleted[a]) continue;
      uf.unite(g.arc(a).tail, g.arc(a).head);
      ++outdeg[g.arc(a).tail];
    }
    std::vector<char> reach_from_bag(g.vertex_count(), 0);
    {
      std::vector<Vertex> stack(bag_sorted.begin(), bag_sorted.end());
      for (Vertex v : bag_sorted) reach_from_bag[v] = 1;
      while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (ArcId a : g.out_arcs(v)) {
          if (deleted[a] || !in_ux[g.arc(a).head]) continue;
          if (!reach_from_bag[g.arc(a).head]) {
            reach_from_bag[g.arc(a).head] = 1;
            stack.push_back(g.arc(a).head);
          }
        }
      }
    }

    // Partial partitioning set, condition (i): no component holds two
    // remaining sinks outside the bag.
    bool ok = true;
    {
      std::map<Vertex, std::size_t> nonbag_sinks;
      std::map<Vertex, char> has_bag;
      for (Vertex v : descendants) {
        Vertex root = uf.find(v);
        if (outdeg[v] == 0 && !in_bag(v)) ++nonbag_sinks[root];
        if (in_bag(v)) has_bag[root] = 1;
      }
      for (auto [root, cnt] : nonbag_sinks)
        if (cnt > 1) ok = false;
      // Condition (ii): sinks in components meeting the bag must be
      // reachable from the bag.
      if (ok)
        for (Vertex v : descendants)
          if (outdeg[v] == 0 && has_bag[uf.find(v)] && !reach_from_bag[v])
            ok = false;
    }
    if (!ok) continue;

    // Canonical pattern of this partial solution.
    Pattern canon;
    for (ArcId a : arcs) {
      if (deleted[a]) continue;
      if (in_bag(g.arc(a).tail) && in_bag(g.arc(a).head))
        canon.r_arcs.emplace_back(g.arc(a).tail, g.arc(a).head);
    }
    std::sort(canon.r_arcs.begin(), canon.r_arcs.end());

    for (Vertex v : descendants)
      if (!in_bag(v) && outdeg[v] == 0 && reach_from_bag[v])
        canon.externals.push_back(v);
    std::sort(canon.externals.begin(), canon.externals.end());

    std::vector<Vertex> g_verts = bag_sorted;
    for (Vertex v : canon.externals)
      g_verts.insert(std::upper_bound(g_verts.begin(), g_verts.end(), v), v);

    // Reachability arcs among G's vertices via per-vertex DFS.
    for (Vertex u : g_verts) {
      std::vector<char> reached(g.vertex_count(), 0);
      std::vector<Vertex> stack{u};
      reached[u] = 1;
      while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (ArcId a : g.out_arcs(v)) {
          if (deleted[a] || !in_ux[g.arc(a).head]) continue;
          if (!reached[g.arc(a).head]) {
            reached[g.arc(a).head] = 1;
            stack.push_back(g.arc(a).head);
          }
        }
      }
      for (Vertex x : g_verts)
        if (x != u && reached[x]) canon.g_arcs.emplace_back(u, x);
    }
    std::sort(canon.g_arcs.begin(), canon.g_arcs.end());

    // Base partition: components restricted to G's vertices.
    std::vector<std::vector<Vertex>> base;
    {
      std::map<Vertex, std::size_t> slot;
      for (Vertex v : g_verts) {
        Vertex root = uf.find(v);
        auto [it, inserted] = slot.try_emplace(root, base.size());
        if (inserted) base.emplace_back();
        base[it->second].push_back(v);
      }
      detail::canonicalize_parts(base);
    }

    // Every admissible coarsening of the base partition satisfies the
    // pattern; aggregate minima over all of them.
    detail::for_each_set_partition(base.size(), [&](const std::vector<std::size_t>& rgs) {
      std::vector<std::vector<Vertex>> merged;
      std::size_t groups = 0;
      for (std::size_t r : rgs) groups = std::max(groups, r + 1);
      merged.assign(groups, {});
      for (std::size_t i = 0; i < base.size(); ++i)
        merged[rgs[i]].insert(merged[rgs[i]].end(), base[i].begin(),
                              base[i].end());
      for (const auto& part : merged) {
        std::size_t ext = 0;
        for (Vertex v : part)
          if (!in_bag(v)) ++ext;
        if (ext > 1) return;
      }
      Pattern p = canon;
      p.parts = merged;
      detail::canonicalize_parts(p.parts);
      auto key = encode(p);
      auto it = table.find(key);
      if (it == table.end() || w < it->second) {
        table[key] = w;
        decoded[key] = std::move(p);
      }
    });
  }

  if (patterns_out) {
    patterns_out->clear();
    for (auto& [key, p] : decoded) patterns_out->push_back(p);
  }
  return table;
}

/// Convenience: encode a DpTable with the oracle's key scheme for direct
/// comparison.
inline std::map<std::vector<std::uint64_t>, Weight> encode_table(
    const DpTable& table) {
  std::map<std::vector<std::uint64_t>, Weight> out;
  for (const auto& [p, w] : table) {
    std::vector<std::uint64_t> key;
    key.push_back(p.externals.size());
    for (Vertex v : p.externals) key.push_back(v);
    key.push_back(UINT64_MAX);
    for (auto [a, b] : p.g_arcs) key.push_back((std::uint64_t(a) << 32) | b);
    key.push_back(UINT64_MAX);
    for (auto [a, b] : p.r_arcs) key.push_back((std::uint64_t(a) << 32) | b);
    key.push_back(UINT64_MAX);
    for (const auto& part : p.parts) {
      for (Vertex v : part) key.push_back(v);
      key.push_back(UINT64_MAX - 1);
    }
    out[key] = w;
  }
  return out;
}

}  // namespace dagp
