#pragma once

// Command-line surface. Exit codes: 0 solved/YES, 1 NO, 2 timeout or
// node-limit, 3 usage error, 4 input/parse error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dagp/bench.hpp"
#include "dagp/exact.hpp"
#include "dagp/generators.hpp"
#include "dagp/graph.hpp"
#include "dagp/heuristic.hpp"
#include "dagp/io.hpp"
#include "dagp/oracle.hpp"
#include "dagp/reduction.hpp"
#include "dagp/treewidth.hpp"

namespace dagp {

namespace cli_detail {

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("DAGPART_SEED")) {
    char* end = nullptr;
    std::uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return 1;
}

inline void print_solution(std::ostream& out, const WeightedDag& g,
                           const PartitioningSet& s, const SearchStats& stats,
                           bool witness) {
  out << "c nodes=" << stats.nodes_expanded << " time_ms="
      << stats.wall_time.count() << '\n';
  if (witness) {
    write_solution(out, g, s);
  } else {
    out << "s dagp " << s.total_weight() << ' ' << s.size() << '\n';
  }
}

struct SolveOptions {
  std::string input;
  std::string algo = "exact-interleaved";
  std::optional<Weight> budget;
  bool minimize = false;
  std::string td_file;
  bool witness = false;
  bool pre_reduce = false;
  std::optional<double> timeout_secs;
  std::optional<std::uint64_t> node_limit;
};

inline int cmd_solve(const SolveOptions& opt, std::ostream& out,
                     std::ostream& err) {
  WeightedDag g = read_instance_file(opt.input);
  std::optional<std::chrono::milliseconds> time_limit;
  if (opt.timeout_secs)
    time_limit = std::chrono::milliseconds(
        static_cast<std::int64_t>(*opt.timeout_secs * 1000));

  auto exact_mode = [&]() {
    if (opt.algo == "exact") return ReductionMode::None;
    if (opt.algo == "exact-dr") return ReductionMode::Initial;
    return ReductionMode::Interleaved;
  };

  if (opt.algo == "heuristic") {
    auto start = std::chrono::steady_clock::now();
    PartitioningSet s = heuristic_partition(g, opt.pre_reduce);
    SearchStats stats;
    stats.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    print_solution(out, g, s, stats, opt.witness);
    if (opt.budget && s.total_weight() > *opt.budget) return 1;
    return 0;
  }

  if (opt.algo == "brute") {
    auto start = std::chrono::steady_clock::now();
    BruteForceResult r = brute_force_min(g);
    SearchStats stats;
    stats.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    if (opt.budget && r.weight > *opt.budget) {
      out << "c nodes=0 time_ms=" << stats.wall_time.count() << '\n';
      return 1;
    }
    print_solution(out, g, r.witness, stats, opt.witness);
    return 0;
  }

  if (opt.algo == "treewidth") {
    if (opt.td_file.empty()) {
      err << "error: --algo treewidth requires --td FILE\n";
      return 3;
    }
    auto start = std::chrono::steady_clock::now();
    TreeDecomposition td = read_tree_decomposition_file(opt.td_file);
    Weight w = solve_treewidth_min(g, td);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    out << "c nodes=0 time_ms=" << ms.count() << '\n';
    out << "s dagp " << w << " 0\n";
    if (opt.budget && w > *opt.budget) return 1;
    return 0;
  }

  if (opt.algo == "exact" || opt.algo == "exact-dr" ||
      opt.algo == "exact-interleaved") {
    if (!opt.minimize && !opt.budget) {
      err << "error: decision mode requires --budget (or pass --minimize)\n";
      return 3;
    }
    if (opt.minimize) {
      MinimizeResult r =
          solve_minimize(g, exact_mode(), opt.node_limit, time_limit);
      if (r.status == SolveStatus::LimitReached) {
        out << "c nodes=" << r.stats.nodes_expanded << " time_ms="
            << r.stats.wall_time.count() << '\n';
        return 2;
      }
      print_solution(out, g, *r.witness, r.stats, opt.witness);
      return 0;
    }
    SearchConfig cfg;
    cfg.mode = exact_mode();
    cfg.budget = *opt.budget;
    cfg.node_limit = opt.node_limit;
    cfg.time_limit = time_limit;
    DecisionResult r = solve_decision(g, cfg);
    switch (r.status) {
      case SolveStatus::Yes:
        print_solution(out, g, *r.witness, r.stats, opt.witness);
        return 0;
      case SolveStatus::No:
        out << "c nodes=" << r.stats.nodes_expanded << " time_ms="
            << r.stats.wall_time.count() << '\n';
        return 1;
      case SolveStatus::LimitReached:
        out << "c nodes=" << r.stats.nodes_expanded << " time_ms="
            << r.stats.wall_time.count() << '\n';
        return 2;
    }
  }
  err << "error: unknown algorithm '" << opt.algo << "'\n";
  return 3;
}

}  // namespace cli_detail

/// Entry point shared by the binary and the tests.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"DAG partitioning toolkit"};
  app.require_subcommand(1);

  // solve
  cli_detail::SolveOptions solve_opt;
  double timeout_raw = -1;
  std::uint64_t node_limit_raw = 0;
  auto* solve = app.add_subcommand("solve", "run a solver on an instance");
  solve->add_option("--input", solve_opt.input, "instance file")->required();
  solve->add_option("--algo", solve_opt.algo,
                    "exact|exact-dr|exact-interleaved|heuristic|treewidth|brute")
      ->check(CLI::IsMember({"exact", "exact-dr", "exact-interleaved",
                             "heuristic", "treewidth", "brute"}));
  Weight budget_raw = 0;
  solve->add_option("--budget", budget_raw, "decision budget k");
  solve->add_flag("--minimize", solve_opt.minimize, "search for the optimum");
  solve->add_option("--td", solve_opt.td_file, "tree decomposition file");
  solve->add_flag("--witness", solve_opt.witness, "print the deleted arcs");
  solve->add_flag("--pre-reduce", solve_opt.pre_reduce,
                  "heuristic only: reduce first, lift the witness back");
  solve->add_option("--timeout", timeout_raw, "cooperative time limit (s)");
  solve->add_option("--node-limit", node_limit_raw, "search node cap");

  // reduce
  std::string red_input, red_output;
  bool red_stats = false;
  auto* red = app.add_subcommand("reduce", "apply the data reduction rules");
  red->add_option("--input", red_input, "instance file")->required();
  red->add_option("--output", red_output, "reduced instance file")->required();
  red->add_flag("--stats", red_stats, "print 'r dagp <n> <m>'");

  // gen
  auto* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);
  GenSpec spec;
  spec.seed = cli_detail::default_seed();
  std::string gen_output, embedded_out;
  auto* pa = gen->add_subcommand("pa", "preferential-attachment instance");
  pa->add_option("--components", spec.components, "component count");
  pa->add_option("--vertices", spec.vertices_per_component,
                 "vertices added per component")
      ->required();
  pa->add_option("--outdegree", spec.outdegree, "arcs drawn per new vertex")
      ->required();
  pa->add_option("--sinks", spec.sinks_per_component, "seed sinks per component");
  pa->add_option("--embed", spec.embedded_arcs, "embedded cross arcs");
  pa->add_option("--seed", spec.seed, "rng seed");
  pa->add_option("--output", gen_output, "instance file")->required();
  pa->add_option("--embedded-out", embedded_out,
                 "write the embedded arc set as a solution file");

  std::string cnf_input, cnf_output;
  auto* gcnf = gen->add_subcommand("cnf", "3-SAT gadget instance from DIMACS");
  gcnf->add_option("--input", cnf_input, "DIMACS CNF file")->required();
  gcnf->add_option("--output", cnf_output, "instance file")->required();

  std::string unit_input, unit_output;
  auto* gunit = gen->add_subcommand("unitize", "rewrite to unit weights");
  gunit->add_option("--input", unit_input, "instance file")->required();
  gunit->add_option("--output", unit_output, "instance file")->required();

  // verify
  std::string ver_input, ver_solution;
  auto* ver = app.add_subcommand("verify", "check a solution file");
  ver->add_option("--input", ver_input, "instance file")->required();
  ver->add_option("--solution", ver_solution, "solution file")->required();

  // bench
  std::string bench_suite, bench_csv;
  unsigned bench_jobs = 1;
  double bench_timeout = -1;
  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--suite", bench_suite, "suite file")->required();
  bench->add_option("--csv", bench_csv, "output csv")->required();
  bench->add_option("--jobs", bench_jobs, "worker threads");
  bench->add_option("--timeout", bench_timeout, "per-row time limit (s)");

  std::vector<const char*> ptrs;
  ptrs.push_back("dagp");
  for (const auto& a : args) ptrs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 3;
  }

  try {
    if (solve->parsed()) {
      if (solve->count("--budget") > 0) solve_opt.budget = budget_raw;
      if (timeout_raw >= 0) solve_opt.timeout_secs = timeout_raw;
      if (node_limit_raw > 0) solve_opt.node_limit = node_limit_raw;
      return cli_detail::cmd_solve(solve_opt, out, err);
    }
    if (red->parsed()) {
      WeightedDag g = read_instance_file(red_input);
      ReduceResult result = reduce(g);
      std::ofstream f(red_output);
      if (!f) throw Error("cannot write " + red_output);
      write_instance(f, result.graph);
      if (red_stats)
        out << "r dagp " << result.graph.vertex_count() << ' '
            << result.graph.arc_count() << '\n';
      return 0;
    }
    if (gen->parsed()) {
      if (pa->parsed()) {
        std::ofstream f(gen_output);
        if (!f) throw Error("cannot write " + gen_output);
        if (spec.components == 1 && spec.embedded_arcs == 0) {
          WeightedDag g = gen_pref_attach(spec.sinks_per_component,
                                          spec.vertices_per_component,
                                          spec.outdegree, spec.seed);
          write_instance(f, g);
        } else {
          EmbeddedInstance inst = gen_embedded(spec);
          write_instance(f, inst.graph);
          if (!embedded_out.empty()) {
            std::ofstream ef(embedded_out);
            if (!ef) throw Error("cannot write " + embedded_out);
            write_solution(ef, inst.graph,
                           PartitioningSet::of(inst.graph, inst.embedded));
          }
        }
        return 0;
      }
      if (gcnf->parsed()) {
        std::ifstream in(cnf_input);
        if (!in) throw Error("cannot open " + cnf_input);
        CnfFormula cnf = parse_dimacs(in);
        SatInstance inst = from_3sat(cnf);
        std::ofstream f(cnf_output);
        if (!f) throw Error("cannot write " + cnf_output);
        f << "c budget " << inst.budget << '\n';
        write_instance(f, inst.graph);
        out << "budget " << inst.budget << '\n';
        return 0;
      }
      if (gunit->parsed()) {
        WeightedDag g = read_instance_file(unit_input);
        WeightedDag u = unitize(g);
        std::ofstream f(unit_output);
        if (!f) throw Error("cannot write " + unit_output);
        write_instance(f, u);
        return 0;
      }
    }
    if (ver->parsed()) {
      WeightedDag g = read_instance_file(ver_input);
      std::ifstream in(ver_solution);
      if (!in) throw Error("cannot open " + ver_solution);
      SolutionFile sol = read_solution(in, g);
      if (sol.declared_weight != sol.set.total_weight()) {
        err << "declared weight " << sol.declared_weight
            << " does not match recomputed weight " << sol.set.total_weight()
            << '\n';
        return 1;
      }
      if (!is_valid_partitioning_set(g, sol.set)) {
        err << "not a valid partitioning set\n";
        return 1;
      }
      out << "ok weight " << sol.set.total_weight() << '\n';
      return 0;
    }
    if (bench->parsed()) {
      std::ifstream in(bench_suite);
      if (!in) throw Error("cannot open " + bench_suite);
      auto entries = parse_suite(in);
      std::optional<std::chrono::milliseconds> limit;
      if (bench_timeout >= 0)
        limit = std::chrono::milliseconds(
            static_cast<std::int64_t>(bench_timeout * 1000));
      auto records = run_bench(entries, bench_jobs, limit);
      std::ofstream f(bench_csv);
      if (!f) throw Error("cannot write " + bench_csv);
      write_bench_csv(f, records);
      return 0;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  }
  return 3;
}

}  // namespace dagp
