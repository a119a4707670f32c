#pragma once

// Seeded instance families: preferential-attachment citation networks,
// multi-component instances with an embedded partitioning set, the
// 3-SAT gadget graph, and the weighted-to-unit-weight rewrite.

#include <cstdint>
#include <istream>
#include <random>
#include <set>
#include <vector>

#include "dagp/graph.hpp"
#include "dagp/io.hpp"

namespace dagp {

struct GenSpec {
  std::size_t components = 1;
  std::size_t vertices_per_component = 1;  // vertices added after the sinks
  std::size_t outdegree = 1;
  std::size_t sinks_per_component = 1;
  std::size_t embedded_arcs = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Appends one preferential-attachment component into `arcs`, vertices
// offset..offset+sinks+extra-1. Returns one past the last vertex id used.
inline Vertex grow_pref_attach(std::vector<WeightedArc>& arcs, Vertex offset,
                               std::size_t sinks, std::size_t extra,
                               std::size_t outdegree, std::mt19937_64& rng) {
  // One pool entry per vertex at creation plus one per received arc makes
  // a uniform pool draw proportional to indegree+1.
  std::vector<Vertex> pool;
  pool.reserve(sinks + extra * (outdegree + 1));
  Vertex next = offset;
  for (std::size_t i = 0; i < sinks; ++i) pool.push_back(next++);
  std::vector<Vertex> targets;
  for (std::size_t i = 0; i < extra; ++i) {
    Vertex v = next++;
    targets.clear();
    for (std::size_t d = 0; d < outdegree; ++d) {
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      Vertex t = pool[pick(rng)];
      // Duplicate draws are dropped, so v may end up with fewer arcs.
      bool dup = false;
      for (Vertex u : targets) dup |= (u == t);
      if (dup) continue;
      targets.push_back(t);
      arcs.push_back(WeightedArc{v, t, 1});
      pool.push_back(t);
    }
    pool.push_back(v);
  }
  return next;
}

}  // namespace detail

/// Preferential-attachment DAG: `sink_count` seed sinks, then `extra`
/// vertices each drawing `outdegree` targets among the earlier vertices
/// with probability proportional to indegree+1. Unit weights; arcs point
/// from newer to older vertices.
inline WeightedDag gen_pref_attach(std::size_t sink_count, std::size_t extra,
                                   std::size_t outdegree, std::uint64_t seed) {
  if (sink_count == 0) throw Error("need at least one seed sink");
  if (outdegree == 0) throw Error("outdegree must be at least one");
  std::mt19937_64 rng(seed);
  std::vector<WeightedArc> arcs;
  Vertex n = detail::grow_pref_attach(arcs, 0, sink_count, extra, outdegree, rng);
  return WeightedDag(n, std::move(arcs));
}

struct EmbeddedInstance {
  WeightedDag graph;
  std::vector<ArcId> embedded;  // the injected cross-component arcs
};

/// Several single-sink preferential-attachment components plus
/// `embedded_arcs` random cross-component arcs, each pointing from a
/// globally newer vertex to a globally older one so the result stays
/// acyclic. The embedded set is itself a partitioning set, so the optimum
/// is at most its size.
inline EmbeddedInstance gen_embedded(const GenSpec& spec) {
  if (spec.components == 0) throw Error("need at least one component");
  if (spec.embedded_arcs > 0 && spec.components < 2)
    throw Error("embedded arcs need at least two components");
  std::mt19937_64 rng(spec.seed);

  std::vector<WeightedArc> arcs;
  Vertex next = 0;
  for (std::size_t c = 0; c < spec.components; ++c)
    next = detail::grow_pref_attach(arcs, next, spec.sinks_per_component,
                                    spec.vertices_per_component,
                                    spec.outdegree, rng);
  const Vertex n = next;
  const std::size_t per_comp = spec.sinks_per_component + spec.vertices_per_component;

  auto component_of = [&](Vertex v) { return v / per_comp; };

  // Distinct ordered cross pairs (newer -> older).
  std::size_t cross_pairs = 0;
  for (std::size_t i = 1; i < spec.components; ++i)
    cross_pairs += per_comp * per_comp * i;
  if (spec.embedded_arcs > cross_pairs)
    throw Error("more embedded arcs requested than distinct cross pairs");

  std::set<std::pair<Vertex, Vertex>> used;
  std::vector<ArcId> embedded;
  std::uniform_int_distribution<Vertex> pick(0, n - 1);
  while (used.size() < spec.embedded_arcs) {
    Vertex a = pick(rng);
    Vertex b = pick(rng);
    if (component_of(a) == component_of(b)) continue;
    if (a < b) std::swap(a, b);  // tail is the globally newer vertex
    if (!used.insert({a, b}).second) continue;
    embedded.push_back(static_cast<ArcId>(arcs.size()));
    arcs.push_back(WeightedArc{a, b, 1});
  }
  return EmbeddedInstance{WeightedDag(n, std::move(arcs)), std::move(embedded)};
}

struct CnfFormula {
  std::size_t variable_count = 0;
  std::vector<std::vector<int>> clauses;  // nonzero literals, |lit| <= n
};

/// DIMACS CNF: `c` comments, `p cnf <vars> <clauses>`, then 0-terminated
/// literal lists, possibly spanning lines.
inline CnfFormula parse_dimacs(std::istream& in) {
  detail::RecordReader reader(in);
  std::vector<std::string_view> f;
  if (!reader.next(f)) throw ParseError(reader.line(), "missing header");
  if (f.size() != 4 || f[0] != "p" || f[1] != "cnf")
    throw ParseError(reader.line(), "expected 'p cnf <vars> <clauses>' header");
  auto vars = detail::parse_int<std::size_t>(f[2], reader.line(), "variable count");
  auto num_clauses =
      detail::parse_int<std::size_t>(f[3], reader.line(), "clause count");

  CnfFormula cnf;
  cnf.variable_count = vars;
  std::vector<int> clause;
  while (reader.next(f)) {
    for (auto tok : f) {
      int lit = detail::parse_int<int>(tok, reader.line(), "literal");
      if (lit == 0) {
        if (clause.empty()) throw ParseError(reader.line(), "empty clause");
        cnf.clauses.push_back(clause);
        clause.clear();
        continue;
      }
      if (static_cast<std::size_t>(lit > 0 ? lit : -lit) > vars)
        throw ParseError(reader.line(), "literal out of range");
      clause.push_back(lit);
    }
  }
  if (!clause.empty()) throw ParseError(reader.line(), "unterminated clause");
  if (cnf.clauses.size() != num_clauses)
    throw ParseError(reader.line(), "clause count does not match header");
  return cnf;
}

struct SatInstance {
  WeightedDag graph;
  Weight budget;  // 4n + 2m
  // Vertex layout: f, f', t, t', then four vertices per variable
  // (x^t, x^f, x, negated x), then one vertex per clause.
  Vertex f, f_prime, t, t_prime;
  std::vector<Vertex> var_true_gate, var_false_gate, var_pos, var_neg;
  std::vector<Vertex> clause_vertex;
};

/// 3-SAT gadget graph: satisfiable iff the instance admits a partitioning
/// set of weight at most 4n+2m. Heavy arcs carry weight 4n+2m+1 and can
/// never be deleted within the budget.
inline SatInstance from_3sat(const CnfFormula& cnf) {
  for (const auto& clause : cnf.clauses) {
    if (clause.empty()) throw Error("empty clause");
    if (clause.size() > 3) throw Error("clause with more than three literals");
  }
  const std::size_t n = cnf.variable_count;
  const std::size_t m = cnf.clauses.size();
  SatInstance inst;
  inst.budget = 4 * static_cast<Weight>(n) + 2 * static_cast<Weight>(m);
  const Weight heavy = inst.budget + 1;

  Vertex next = 0;
  inst.f = next++;
  inst.f_prime = next++;
  inst.t = next++;
  inst.t_prime = next++;
  for (std::size_t i = 0; i < n; ++i) {
    inst.var_true_gate.push_back(next++);
    inst.var_false_gate.push_back(next++);
    inst.var_pos.push_back(next++);
    inst.var_neg.push_back(next++);
  }
  for (std::size_t j = 0; j < m; ++j) inst.clause_vertex.push_back(next++);

  std::vector<WeightedArc> arcs;
  arcs.push_back({inst.f, inst.f_prime, heavy});
  arcs.push_back({inst.t, inst.t_prime, heavy});
  for (std::size_t i = 0; i < n; ++i) {
    arcs.push_back({inst.t, inst.var_true_gate[i], heavy});
    arcs.push_back({inst.f, inst.var_false_gate[i], heavy});
    arcs.push_back({inst.var_true_gate[i], inst.var_pos[i], 1});
    arcs.push_back({inst.var_true_gate[i], inst.var_neg[i], 1});
    arcs.push_back({inst.var_false_gate[i], inst.var_pos[i], 1});
    arcs.push_back({inst.var_false_gate[i], inst.var_neg[i], 1});
    arcs.push_back({inst.var_pos[i], inst.f_prime, 1});
    arcs.push_back({inst.var_neg[i], inst.f_prime, 1});
    arcs.push_back({inst.var_pos[i], inst.t_prime, 1});
    arcs.push_back({inst.var_neg[i], inst.t_prime, 1});
  }
  for (std::size_t j = 0; j < m; ++j) {
    arcs.push_back({inst.t, inst.clause_vertex[j], heavy});
    std::set<std::pair<Vertex, Vertex>> seen;  // duplicate literals collapse
    for (int lit : cnf.clauses[j]) {
      std::size_t i = static_cast<std::size_t>(lit > 0 ? lit : -lit) - 1;
      Vertex target = lit > 0 ? inst.var_pos[i] : inst.var_neg[i];
      if (seen.insert({inst.clause_vertex[j], target}).second)
        arcs.push_back({inst.clause_vertex[j], target, 1});
    }
  }
  inst.graph = WeightedDag(next, std::move(arcs));
  return inst;
}

/// Rewrites every arc of weight w > 1 into a unit arc plus w-1 parallel
/// two-arc paths through fresh vertices; preserves the optimum weight.
inline WeightedDag unitize(const WeightedDag& g) {
  constexpr std::uint64_t kMaxVertices = 100'000'000;
  std::uint64_t extra = 0;
  for (ArcId a = 0; a < g.arc_count(); ++a) extra += g.weight(a) - 1;
  if (g.vertex_count() + extra > kMaxVertices)
    throw Error("unit-weight rewrite would exceed the vertex limit");

  std::vector<WeightedArc> arcs;
  arcs.reserve(g.arc_count() + 2 * extra);
  Vertex next = static_cast<Vertex>(g.vertex_count());
  for (ArcId a = 0; a < g.arc_count(); ++a) {
    const Arc arc = g.arc(a);
    arcs.push_back({arc.tail, arc.head, 1});
    for (Weight i = 1; i < g.weight(a); ++i) {
      Vertex u = next++;
      arcs.push_back({arc.tail, u, 1});
      arcs.push_back({u, arc.head, 1});
    }
  }
  return WeightedDag(next, std::move(arcs));
}

}  // namespace dagp
