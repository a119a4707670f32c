#pragma once

// Benchmark harness: runs (instance, algorithm, budget) rows from a suite
// file and emits one CSV record per row. Rows may run on worker threads;
// output order always follows suite position.

#include <chrono>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dagp/exact.hpp"
#include "dagp/graph.hpp"
#include "dagp/heuristic.hpp"
#include "dagp/io.hpp"
#include "dagp/oracle.hpp"
#include "dagp/reduction.hpp"
#include "dagp/treewidth.hpp"

namespace dagp {

inline constexpr const char* kBenchCsvSchema =
    "# dagp bench csv v1\n"
    "instance,n,m,red_n,red_m,algo,k,weight,status,time_ms,nodes\n";

struct SuiteEntry {
  std::string instance;
  std::string algo;  // exact | exact-dr | exact-interleaved | heuristic | brute
  std::optional<Weight> budget;  // absent: minimize
};

/// Suite file: comment lines start with '#'; each record is
/// `<instance-path> <algo> <budget|->`.
inline std::vector<SuiteEntry> parse_suite(std::istream& in) {
  std::vector<SuiteEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = detail::split_fields(line);
    if (fields.empty() || fields[0][0] == '#') continue;
    if (fields.size() != 3)
      throw ParseError(lineno, "expected '<instance> <algo> <budget|->'");
    SuiteEntry e;
    e.instance = std::string(fields[0]);
    e.algo = std::string(fields[1]);
    if (fields[2] != "-")
      e.budget = detail::parse_int<Weight>(fields[2], lineno, "budget");
    entries.push_back(std::move(e));
  }
  return entries;
}

struct BenchRecord {
  std::string instance;
  std::size_t n = 0, m = 0, red_n = 0, red_m = 0;
  std::string algo;
  std::optional<Weight> budget;
  std::string status;  // YES | NO | TIMEOUT | ERROR
  std::optional<Weight> weight;
  std::uint64_t time_ms = 0;
  std::uint64_t nodes = 0;
};

inline BenchRecord run_bench_entry(
    const SuiteEntry& entry,
    std::optional<std::chrono::milliseconds> time_limit) {
  BenchRecord rec;
  rec.instance = entry.instance;
  rec.algo = entry.algo;
  rec.budget = entry.budget;
  auto start = std::chrono::steady_clock::now();
  try {
    WeightedDag g = read_instance_file(entry.instance);
    rec.n = g.vertex_count();
    rec.m = g.arc_count();
    ReduceResult red = reduce(g);
    rec.red_n = red.graph.vertex_count();
    rec.red_m = red.graph.arc_count();

    auto run_exact = [&](ReductionMode mode) {
      if (entry.budget) {
        SearchConfig cfg;
        cfg.mode = mode;
        cfg.budget = *entry.budget;
        cfg.time_limit = time_limit;
        DecisionResult r = solve_decision(g, cfg);
        rec.nodes = r.stats.nodes_expanded;
        switch (r.status) {
          case SolveStatus::Yes:
            rec.status = "YES";
            rec.weight = r.witness->total_weight();
            break;
          case SolveStatus::No:
            rec.status = "NO";
            break;
          case SolveStatus::LimitReached:
            rec.status = "TIMEOUT";
            break;
        }
      } else {
        MinimizeResult r = solve_minimize(g, mode, std::nullopt, time_limit);
        rec.nodes = r.stats.nodes_expanded;
        if (r.status == SolveStatus::Yes) {
          rec.status = "YES";
          rec.weight = r.weight;
        } else {
          rec.status = "TIMEOUT";
        }
      }
    };

    if (entry.algo == "exact") {
      run_exact(ReductionMode::None);
    } else if (entry.algo == "exact-dr") {
      run_exact(ReductionMode::Initial);
    } else if (entry.algo == "exact-interleaved") {
      run_exact(ReductionMode::Interleaved);
    } else if (entry.algo == "heuristic") {
      PartitioningSet s = heuristic_partition(g);
      rec.status = "YES";
      rec.weight = s.total_weight();
    } else if (entry.algo == "brute") {
      BruteForceResult r = brute_force_min(g);
      rec.status = "YES";
      rec.weight = r.weight;
    } else {
      throw Error("unknown algorithm: " + entry.algo);
    }
  } catch (const std::exception&) {
    rec.status = "ERROR";
  }
  rec.time_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start)
          .count());
  return rec;
}

inline void write_bench_csv(std::ostream& out,
                            const std::vector<BenchRecord>& records) {
  out << kBenchCsvSchema;
  for (const BenchRecord& r : records) {
    out << r.instance << ',' << r.n << ',' << r.m << ',' << r.red_n << ','
        << r.red_m << ',' << r.algo << ',';
    if (r.budget) out << *r.budget;
    out << ',';
    if (r.weight) out << *r.weight;
    out << ',' << r.status << ',' << r.time_ms << ',' << r.nodes << '\n';
  }
}

/// Runs all entries, optionally on several worker threads. Results are
/// deterministic per entry and ordered by suite position regardless of
/// the job count.
inline std::vector<BenchRecord> run_bench(
    const std::vector<SuiteEntry>& entries, unsigned jobs,
    std::optional<std::chrono::milliseconds> time_limit) {
  std::vector<BenchRecord> records(entries.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < entries.size(); ++i)
      records[i] = run_bench_entry(entries[i], time_limit);
    return records;
  }
  std::mutex mu;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= entries.size()) return;
        i = next++;
      }
      records[i] = run_bench_entry(entries[i], time_limit);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return records;
}

}  // namespace dagp
