#pragma once

// Dynamic program over nice tree decompositions. Table rows are patterns
// (R, G, P): the kept bag arcs, the transitively closed reachability
// graph over bag vertices plus bag-reachable sinks, and the intended
// coarse partition into final components.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dagp/graph.hpp"
#include "dagp/io.hpp"

namespace dagp {

// ---------------------------------------------------------------------
// Tree decompositions

/// Checks the three decomposition properties plus tree shape; returns the
/// width. Each violated property is reported distinctly.
inline std::size_t validate_td(const WeightedDag& g,
                               const TreeDecomposition& td) {
  const std::size_t n = g.vertex_count();
  const std::size_t bags = td.bags.size();
  if (n > 0 && bags == 0)
    throw Error("decomposition violates vertex cover: no bags");

  for (const auto& bag : td.bags)
    for (Vertex v : bag)
      if (v >= n) throw Error("decomposition names an unknown vertex");

  // Tree shape: bags-1 edges and connected.
  if (bags > 0) {
    if (td.edges.size() + 1 != bags)
      throw Error("decomposition tree must have bags-1 edges");
    detail::UnionFind uf(bags);
    for (auto [a, b] : td.edges) {
      if (a >= bags || b >= bags)
        throw Error("decomposition edge names an unknown bag");
      uf.unite(static_cast<Vertex>(a), static_cast<Vertex>(b));
    }
    for (std::size_t i = 0; i < bags; ++i)
      if (uf.find(static_cast<Vertex>(i)) != uf.find(0))
        throw Error("decomposition tree is disconnected");
  }

  // (i) every vertex occurs in some bag.
  std::vector<char> seen(n, 0);
  for (const auto& bag : td.bags)
    for (Vertex v : bag) seen[v] = 1;
  for (Vertex v = 0; v < n; ++v)
    if (!seen[v]) throw Error("decomposition violates vertex cover");

  // (ii) both endpoints of every arc share a bag.
  for (ArcId a = 0; a < g.arc_count(); ++a) {
    const Arc arc = g.arc(a);
    bool covered = false;
    for (const auto& bag : td.bags) {
      bool has_tail = false, has_head = false;
      for (Vertex v : bag) {
        has_tail |= (v == arc.tail);
        has_head |= (v == arc.head);
      }
      if (has_tail && has_head) {
        covered = true;
        break;
      }
    }
    if (!covered) throw Error("decomposition violates arc cover");
  }

  // (iii) the bags containing any fixed vertex induce a subtree:
  // connected occurrences, checked per vertex via the bag tree.
  std::vector<std::vector<std::size_t>> adj(bags);
  for (auto [a, b] : td.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::vector<std::size_t>> bags_of(n);
  for (std::size_t i = 0; i < bags; ++i)
    for (Vertex v : td.bags[i]) bags_of[v].push_back(i);
  std::vector<std::int64_t> mark(bags, -1), done(bags, -1);
  for (Vertex v = 0; v < n; ++v) {
    for (std::size_t b : bags_of[v]) mark[b] = v;
    std::vector<std::size_t> stack{bags_of[v][0]};
    std::size_t visited = 0;
    done[bags_of[v][0]] = v;
    while (!stack.empty()) {
      std::size_t b = stack.back();
      stack.pop_back();
      ++visited;
      for (std::size_t c : adj[b])
        if (done[c] != static_cast<std::int64_t>(v) &&
            mark[c] == static_cast<std::int64_t>(v)) {
          done[c] = v;
          stack.push_back(c);
        }
    }
    if (visited != bags_of[v].size())
      throw Error("decomposition violates connectivity");
  }

  std::size_t max_bag = 0;
  for (const auto& bag : td.bags) max_bag = std::max(max_bag, bag.size());
  return max_bag == 0 ? 0 : max_bag - 1;
}

struct NiceNode {
  enum class Type { Leaf, Introduce, Forget, Join };
  Type type = Type::Leaf;
  Vertex vertex = kNoVertex;  // introduced or forgotten vertex
  std::vector<Vertex> bag;    // sorted
  int child0 = -1;
  int child1 = -1;
};

struct NiceTreeDecomposition {
  std::vector<NiceNode> nodes;  // children precede parents
  int root = -1;
  std::size_t width = 0;
};

/// Standard nice form: empty root bag, leaf/introduce/forget/join nodes.
/// Along each tree edge forgets come before introduces, ascending vertex
/// id within each phase. Width is preserved.
inline NiceTreeDecomposition make_nice(const TreeDecomposition& td) {
  NiceTreeDecomposition out;
  auto add = [&](NiceNode node) {
    out.nodes.push_back(std::move(node));
    return static_cast<int>(out.nodes.size() - 1);
  };
  auto leaf = [&]() {
    return add(NiceNode{NiceNode::Type::Leaf, kNoVertex, {}, -1, -1});
  };
  // Introduce/forget chain transforming `node` (bag `from`) into bag `to`.
  auto morph = [&](int node, std::vector<Vertex> from,
                   const std::vector<Vertex>& to) {
    for (Vertex v : from) {  // ascending: bags are sorted
      if (std::binary_search(to.begin(), to.end(), v)) continue;
      std::vector<Vertex> bag;
      for (Vertex u : out.nodes[node].bag)
        if (u != v) bag.push_back(u);
      node = add(NiceNode{NiceNode::Type::Forget, v, std::move(bag), node, -1});
    }
    for (Vertex v : to) {
      if (std::binary_search(from.begin(), from.end(), v)) continue;
      std::vector<Vertex> bag = out.nodes[node].bag;
      bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
      node =
          add(NiceNode{NiceNode::Type::Introduce, v, std::move(bag), node, -1});
    }
    return node;
  };

  if (td.bags.empty()) {
    out.root = leaf();
    out.width = 0;
    return out;
  }

  std::size_t max_bag = 0;
  for (const auto& b : td.bags) max_bag = std::max(max_bag, b.size());
  out.width = max_bag == 0 ? 0 : max_bag - 1;

  const std::size_t bags = td.bags.size();
  std::vector<std::vector<std::size_t>> adj(bags);
  for (auto [a, b] : td.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::vector<Vertex>> sorted_bags = td.bags;
  for (auto& b : sorted_bags) std::sort(b.begin(), b.end());

  // Iterative post-order from bag 0.
  std::vector<int> result(bags, -1);
  std::vector<std::size_t> parent(bags, SIZE_MAX);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  parent[0] = 0;
  while (!stack.empty()) {
    auto& [b, child_idx] = stack.back();
    if (child_idx < adj[b].size()) {
      std::size_t c = adj[b][child_idx++];
      if (parent[c] == SIZE_MAX) {
        parent[c] = b;
        stack.push_back({c, 0});
      }
      continue;
    }
    // All children done: build this bag's chain.
    int cur = -1;
    for (std::size_t c : adj[b]) {
      if (c == parent[b] && b != 0) continue;
      if (parent[c] != b) continue;
      int transformed = morph(result[c], sorted_bags[c], sorted_bags[b]);
      if (cur == -1) {
        cur = transformed;
      } else {
        cur = add(NiceNode{NiceNode::Type::Join, kNoVertex, sorted_bags[b],
                           cur, transformed});
      }
    }
    if (cur == -1) cur = morph(leaf(), {}, sorted_bags[b]);
    result[b] = cur;
    stack.pop_back();
  }
  out.root = morph(result[0], sorted_bags[0], {});
  return out;
}

/// Width-1 decomposition for graphs whose underlying undirected graph is
/// a forest: one bag per vertex, child bags {v, parent v}.
inline TreeDecomposition trivial_tree_decomposition(const WeightedDag& g) {
  const std::size_t n = g.vertex_count();
  detail::UnionFind uf(n);
  std::size_t comps = n;
  for (ArcId a = 0; a < g.arc_count(); ++a) {
    if (uf.find(g.arc(a).tail) == uf.find(g.arc(a).head))
      throw Error("underlying graph is not a forest");
    uf.unite(g.arc(a).tail, g.arc(a).head);
    --comps;
  }

  TreeDecomposition td;
  td.graph_vertex_count = n;
  td.bags.assign(n, {});
  std::vector<Vertex> order;  // BFS forest, roots in ascending id order
  std::vector<Vertex> tree_parent(n, kNoVertex);
  std::vector<char> seen(n, 0);
  std::vector<Vertex> roots;
  for (Vertex r = 0; r < n; ++r) {
    if (seen[r]) continue;
    roots.push_back(r);
    seen[r] = 1;
    std::vector<Vertex> queue{r};
    std::size_t head = 0;
    while (head < queue.size()) {
      Vertex v = queue[head++];
      auto push = [&](Vertex u) {
        if (!seen[u]) {
          seen[u] = 1;
          tree_parent[u] = v;
          queue.push_back(u);
        }
      };
      for (ArcId a : g.out_arcs(v)) push(g.arc(a).head);
      for (ArcId a : g.in_arcs(v)) push(g.arc(a).tail);
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    td.bags[v].push_back(v);
    if (tree_parent[v] != kNoVertex) {
      td.bags[v].push_back(tree_parent[v]);
      std::sort(td.bags[v].begin(), td.bags[v].end());
      td.edges.emplace_back(v, tree_parent[v]);
    }
  }
  for (std::size_t i = 1; i < roots.size(); ++i)
    td.edges.emplace_back(roots[i - 1], roots[i]);
  td.declared_width = n >= 2 ? 1 : 0;
  (void)comps;
  return td;
}

// ---------------------------------------------------------------------
// Patterns and tables

/// Canonical DP state at a bag: kept bag arcs R, reachability graph G over
/// bag vertices plus bag-reachable external sinks, and partition P.
/// All vertex ids are concrete graph ids; arcs and parts are sorted.
struct Pattern {
  std::vector<Vertex> externals;                  // sorted, disjoint from bag
  std::vector<std::pair<Vertex, Vertex>> r_arcs;  // sorted
  std::vector<std::pair<Vertex, Vertex>> g_arcs;  // sorted, closed
  std::vector<std::vector<Vertex>> parts;         // canonical partition

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct PatternHash {
  std::size_t operator()(const Pattern& p) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t x) {
      h ^= x + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    };
    for (Vertex v : p.externals) mix(v);
    mix(0xffffffffull);
    for (auto [a, b] : p.r_arcs) mix((std::uint64_t(a) << 32) | b);
    mix(0xfffffffeull);
    for (auto [a, b] : p.g_arcs) mix((std::uint64_t(a) << 32) | b);
    mix(0xfffffffdull);
    for (const auto& part : p.parts) {
      for (Vertex v : part) mix(v);
      mix(0xfffffffcull);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Pattern -> minimum weight of a partial solution satisfying it.
/// Absent keys mean +infinity.
using DpTable = std::unordered_map<Pattern, Weight, PatternHash>;

namespace detail {

inline void canonicalize_parts(std::vector<std::vector<Vertex>>& parts) {
  for (auto& part : parts) std::sort(part.begin(), part.end());
  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

inline std::size_t part_index(const std::vector<std::vector<Vertex>>& parts,
                              Vertex v) {
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (Vertex u : parts[i])
      if (u == v) return i;
  return SIZE_MAX;
}

// Transitive closure of an arc list over few vertices, via bitmasks.
inline std::vector<std::pair<Vertex, Vertex>> close_arcs(
    const std::vector<Vertex>& verts,  // sorted
    const std::vector<std::pair<Vertex, Vertex>>& arcs) {
  const std::size_t k = verts.size();
  auto index_of = [&](Vertex v) {
    return static_cast<std::size_t>(
        std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  std::vector<std::uint64_t> reach(k, 0);
  for (auto [a, b] : arcs) reach[index_of(a)] |= std::uint64_t(1) << index_of(b);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t r = reach[i];
      std::uint64_t m = r;
      while (m) {
        std::size_t j = static_cast<std::size_t>(__builtin_ctzll(m));
        m &= m - 1;
        r |= reach[j];
      }
      if (r != reach[i]) {
        reach[i] = r;
        changed = true;
      }
    }
  }
  std::vector<std::pair<Vertex, Vertex>> out;
  for (std::size_t i = 0; i < k; ++i) {
    std::uint64_t m = reach[i];
    while (m) {
      std::size_t j = static_cast<std::size_t>(__builtin_ctzll(m));
      m &= m - 1;
      if (j != i) out.emplace_back(verts[i], verts[j]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline void table_update(DpTable& table, Pattern pattern, Weight w) {
  auto [it, inserted] = table.try_emplace(std::move(pattern), w);
  if (!inserted && w < it->second) it->second = w;
}

inline bool has_out_arc(const Pattern& p, Vertex v) {
  for (auto [a, b] : p.g_arcs)
    if (a == v) return true;
  return false;
}

inline bool touches(const Pattern& p, Vertex v) {
  for (auto [a, b] : p.g_arcs)
    if (a == v || b == v) return true;
  return false;
}

inline bool is_external(const Pattern& p, Vertex v) {
  return std::binary_search(p.externals.begin(), p.externals.end(), v);
}

}  // namespace detail

/// Table of the empty bag: the empty pattern at weight zero.
inline DpTable dp_leaf() {
  DpTable table;
  table.emplace(Pattern{}, 0);
  return table;
}

/// Forget node: v leaves the bag. Patterns fall into four cases (isolated
/// singleton; sink turning external; plain interior vertex; external sink
/// fed only by v); anything else is dropped.
inline DpTable dp_forget(const DpTable& child, Vertex v) {
  DpTable table;
  for (const auto& [p, w] : child) {
    Pattern q;
    q.r_arcs.reserve(p.r_arcs.size());
    for (auto arc : p.r_arcs)
      if (arc.first != v && arc.second != v) q.r_arcs.push_back(arc);

    const bool isolated = !detail::touches(p, v);
    const bool sink = !detail::has_out_arc(p, v);
    const std::size_t pi = detail::part_index(p.parts, v);

    if (isolated) {
      // Case: isolated vertex alone in its part.
      if (pi == SIZE_MAX || p.parts[pi].size() != 1) continue;
      q.externals = p.externals;
      q.g_arcs = p.g_arcs;
      q.parts = p.parts;
      q.parts.erase(q.parts.begin() + static_cast<std::ptrdiff_t>(pi));
      detail::table_update(table, std::move(q), w);
      continue;
    }
    if (sink) {
      // Case: non-isolated sink becomes an external sink. Its part must
      // not already hold an external.
      bool clean = true;
      for (Vertex u : p.parts[pi]) clean &= !detail::is_external(p, u);
      if (!clean) continue;
      q.externals = p.externals;
      q.externals.insert(
          std::upper_bound(q.externals.begin(), q.externals.end(), v), v);
      q.g_arcs = p.g_arcs;
      q.parts = p.parts;
      detail::table_update(table, std::move(q), w);
      continue;
    }

    // v has out-arcs. Externals fed only by v block the plain case.
    Vertex lone_sink = kNoVertex;
    bool multiple_lone = false;
    for (Vertex u : p.externals) {
      bool from_v = false, from_other = false;
      for (auto [a, b] : p.g_arcs) {
        if (b != u) continue;
        if (a == v)
          from_v = true;
        else
          from_other = true;
      }
      if (from_v && !from_other) {
        if (lone_sink != kNoVertex) multiple_lone = true;
        lone_sink = u;
      }
    }
    if (multiple_lone) continue;  // cannot arise from a valid pattern

    if (lone_sink == kNoVertex) {
      // Case: plain interior vertex; drop it from G and its part.
      q.externals = p.externals;
      for (auto arc : p.g_arcs)
        if (arc.first != v && arc.second != v) q.g_arcs.push_back(arc);
      q.parts = p.parts;
      auto& part = q.parts[pi];
      part.erase(std::find(part.begin(), part.end(), v));
      detail::canonicalize_parts(q.parts);
      detail::table_update(table, std::move(q), w);
      continue;
    }

    // Case: external sink u reachable only via v; both leave together,
    // which is sound only when {u, v} is a part of its own.
    if (pi == SIZE_MAX || p.parts[pi].size() != 2) continue;
    if (detail::part_index(p.parts, lone_sink) != pi) continue;
    q.externals.reserve(p.externals.size() - 1);
    for (Vertex u : p.externals)
      if (u != lone_sink) q.externals.push_back(u);
    for (auto arc : p.g_arcs)
      if (arc.first != v && arc.second != v && arc.first != lone_sink &&
          arc.second != lone_sink)
        q.g_arcs.push_back(arc);
    q.parts = p.parts;
    q.parts.erase(q.parts.begin() + static_cast<std::ptrdiff_t>(pi));
    detail::table_update(table, std::move(q), w);
  }
  return table;
}

/// Introduce node: v joins the bag. Every subset of v's bag arcs may be
/// kept; kept arcs must lead into a single part, which v then joins. With
/// no kept arcs v may join any part or start its own.
inline DpTable dp_introduce(const DpTable& child, Vertex v,
                            const std::vector<Vertex>& child_bag,
                            const WeightedDag& g) {
  // Bag arcs incident to v.
  struct BagArc {
    Vertex tail, head, other;
    Weight weight;
  };
  std::vector<BagArc> incident;
  for (ArcId a : g.out_arcs(v)) {
    Vertex h = g.arc(a).head;
    if (std::binary_search(child_bag.begin(), child_bag.end(), h))
      incident.push_back({v, h, h, g.weight(a)});
  }
  for (ArcId a : g.in_arcs(v)) {
    Vertex t = g.arc(a).tail;
    if (std::binary_search(child_bag.begin(), child_bag.end(), t))
      incident.push_back({t, v, t, g.weight(a)});
  }
  Weight incident_weight = 0;
  for (const BagArc& a : incident) incident_weight += a.weight;

  std::vector<Vertex> bag_x = child_bag;
  bag_x.insert(std::upper_bound(bag_x.begin(), bag_x.end(), v), v);

  DpTable table;
  for (const auto& [p, w] : child) {
    std::vector<Vertex> g_verts = bag_x;
    for (Vertex u : p.externals)
      g_verts.insert(std::upper_bound(g_verts.begin(), g_verts.end(), u), u);

    const std::size_t subsets = std::size_t{1} << incident.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      Weight kept_weight = 0;
      std::size_t shared_part = SIZE_MAX;
      bool ok = true;
      for (std::size_t i = 0; i < incident.size() && ok; ++i) {
        if (!(mask >> i & 1)) continue;
        kept_weight += incident[i].weight;
        std::size_t pi = detail::part_index(p.parts, incident[i].other);
        if (shared_part == SIZE_MAX)
          shared_part = pi;
        else if (shared_part != pi)
          ok = false;
      }
      if (!ok) continue;

      Pattern q;
      q.externals = p.externals;
      q.r_arcs = p.r_arcs;
      q.g_arcs = p.g_arcs;
      for (std::size_t i = 0; i < incident.size(); ++i) {
        if (!(mask >> i & 1)) continue;
        q.r_arcs.emplace_back(incident[i].tail, incident[i].head);
        q.g_arcs.emplace_back(incident[i].tail, incident[i].head);
      }
      std::sort(q.r_arcs.begin(), q.r_arcs.end());
      q.g_arcs = detail::close_arcs(g_verts, q.g_arcs);
      const Weight updated = w + incident_weight - kept_weight;

      if (mask == 0) {
        // v is isolated: try every part, then a singleton part.
        for (std::size_t pi = 0; pi <= p.parts.size(); ++pi) {
          Pattern r = q;
          r.parts = p.parts;
          if (pi < p.parts.size())
            r.parts[pi].push_back(v);
          else
            r.parts.push_back({v});
          detail::canonicalize_parts(r.parts);
          detail::table_update(table, std::move(r), updated);
        }
      } else {
        q.parts = p.parts;
        if (shared_part == SIZE_MAX) continue;  // defensive; cannot happen
        q.parts[shared_part].push_back(v);
        detail::canonicalize_parts(q.parts);
        detail::table_update(table, std::move(q), updated);
      }
    }
  }
  return table;
}

/// Join node: combine child patterns with identical kept bag arcs and
/// identical bag partitions. Deleted bag arcs are counted twice by the
/// children; the update compensates with the bag-arc weight.
inline DpTable dp_join(const DpTable& left, const DpTable& right,
                       const std::vector<Vertex>& bag, const WeightedDag& g) {
  Weight bag_arc_weight = 0;
  for (Vertex v : bag)
    for (ArcId a : g.out_arcs(v))
      if (std::binary_search(bag.begin(), bag.end(), g.arc(a).head))
        bag_arc_weight += g.weight(a);

  auto bag_partition = [&](const Pattern& p) {
    std::vector<std::vector<Vertex>> parts;
    for (const auto& part : p.parts) {
      std::vector<Vertex> keep;
      for (Vertex v : part)
        if (std::binary_search(bag.begin(), bag.end(), v)) keep.push_back(v);
      if (!keep.empty()) parts.push_back(std::move(keep));
    }
    detail::canonicalize_parts(parts);
    return parts;
  };

  struct KeyHash {
    std::size_t operator()(const Pattern& p) const { return PatternHash{}(p); }
  };
  // Bucket the right table by (R, bag partition), encoded as a Pattern key.
  std::unordered_map<Pattern, std::vector<const std::pair<const Pattern, Weight>*>,
                     KeyHash>
      buckets;
  for (const auto& entry : right) {
    Pattern key;
    key.r_arcs = entry.first.r_arcs;
    key.parts = bag_partition(entry.first);
    buckets[key].push_back(&entry);
  }

  DpTable table;
  for (const auto& [pl, wl] : left) {
    Weight r_weight = 0;
    for (auto [a, b] : pl.r_arcs) {
      ArcId id = g.find_arc(a, b);
      r_weight += g.weight(id);
    }
    Pattern key;
    key.r_arcs = pl.r_arcs;
    key.parts = bag_partition(pl);
    auto it = buckets.find(key);
    if (it == buckets.end()) continue;

    for (const auto* entry : it->second) {
      const Pattern& pr = entry->first;
      const Weight wr = entry->second;

      std::vector<Vertex> g_verts = bag;
      for (Vertex u : pl.externals)
        g_verts.insert(std::upper_bound(g_verts.begin(), g_verts.end(), u), u);
      for (Vertex u : pr.externals)
        g_verts.insert(std::upper_bound(g_verts.begin(), g_verts.end(), u), u);

      std::vector<std::pair<Vertex, Vertex>> arcs = pl.g_arcs;
      arcs.insert(arcs.end(), pr.g_arcs.begin(), pr.g_arcs.end());
      std::sort(arcs.begin(), arcs.end());
      arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

      Pattern q;
      q.g_arcs = detail::close_arcs(g_verts, arcs);
      q.r_arcs = pl.r_arcs;
      q.externals = pl.externals;
      for (Vertex u : pr.externals)
        q.externals.insert(
            std::upper_bound(q.externals.begin(), q.externals.end(), u), u);

      // Rebuild the partition: shared bag parts, externals attached to the
      // part of their in-neighbors.
      q.parts = key.parts;
      bool ok = true;
      for (Vertex u : q.externals) {
        std::size_t target = SIZE_MAX;
        for (auto [a, b] : q.g_arcs) {
          if (b != u) continue;
          std::size_t pi = detail::part_index(q.parts, a);
          if (pi == SIZE_MAX) continue;  // another external cannot reach u
          if (target == SIZE_MAX) target = pi;
          if (target != pi) {
            ok = false;
            break;
          }
        }
        if (!ok || target == SIZE_MAX) {
          ok = false;
          break;
        }
        q.parts[target].push_back(u);
      }
      if (!ok) continue;
      // At most one external sink per intended component.
      for (const auto& part : q.parts) {
        std::size_t ext = 0;
        for (Vertex u : part) ext += detail::is_external(q, u) ? 1 : 0;
        if (ext > 1) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      detail::canonicalize_parts(q.parts);
      detail::table_update(table, std::move(q),
                           wl + wr - bag_arc_weight + r_weight);
    }
  }
  return table;
}

// ---------------------------------------------------------------------
// Driver

/// Per-node pattern-count bound used as a smoke check.
inline long double pattern_count_bound(std::size_t width) {
  const long double t = static_cast<long double>(width);
  auto choose2 = [](long double x) { return x * (x - 1) / 2; };
  return std::pow(3.0L, choose2(2 * t + 2)) * std::pow(3.0L, choose2(t + 1)) *
         std::pow(2 * t + 2, 2 * t + 2);
}

/// Bottom-up evaluation; returns one table per nice node.
inline std::vector<DpTable> run_dp(const WeightedDag& g,
                                   const NiceTreeDecomposition& ntd) {
  std::vector<DpTable> tables(ntd.nodes.size());
  const long double bound = pattern_count_bound(ntd.width);
  for (std::size_t i = 0; i < ntd.nodes.size(); ++i) {
    const NiceNode& node = ntd.nodes[i];
    switch (node.type) {
      case NiceNode::Type::Leaf:
        tables[i] = dp_leaf();
        break;
      case NiceNode::Type::Forget:
        tables[i] = dp_forget(tables[node.child0], node.vertex);
        break;
      case NiceNode::Type::Introduce:
        tables[i] = dp_introduce(tables[node.child0], node.vertex,
                                 ntd.nodes[node.child0].bag, g);
        break;
      case NiceNode::Type::Join:
        tables[i] =
            dp_join(tables[node.child0], tables[node.child1], node.bag, g);
        break;
    }
    if (static_cast<long double>(tables[i].size()) > bound)
      throw Error("internal: table exceeds the pattern-count bound");
  }
  return tables;
}

inline constexpr std::size_t kDefaultWidthCap = 6;

/// Minimum partitioning-set weight via the decomposition DP.
inline Weight solve_treewidth_min(const WeightedDag& g,
                                  const TreeDecomposition& td,
                                  std::size_t width_cap = kDefaultWidthCap) {
  std::size_t width = validate_td(g, td);
  if (width > width_cap)
    throw Error("decomposition width " + std::to_string(width) +
                " exceeds the cap of " + std::to_string(width_cap));
  NiceTreeDecomposition ntd = make_nice(td);
  std::vector<DpTable> tables = run_dp(g, ntd);
  const DpTable& root = tables[static_cast<std::size_t>(ntd.root)];
  auto it = root.find(Pattern{});
  if (root.size() != 1 || it == root.end())
    throw Error("internal: root table must hold exactly the empty pattern");
  return it->second;
}

inline bool solve_treewidth_decision(const WeightedDag& g,
                                     const TreeDecomposition& td, Weight k,
                                     std::size_t width_cap = kDefaultWidthCap) {
  return solve_treewidth_min(g, td, width_cap) <= k;
}

}  // namespace dagp
