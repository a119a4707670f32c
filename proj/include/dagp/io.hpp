#pragma once

// Line-based text formats: instance files (`p dagp`), solution files
// (`s dagp`), and PACE-style tree decompositions (`s td`).

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dagp/graph.hpp"

namespace dagp {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct TreeDecomposition {
  std::size_t graph_vertex_count = 0;
  std::vector<std::vector<Vertex>> bags;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t declared_width = 0;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <typename Int>
Int parse_int(std::string_view tok, std::size_t line, const char* what) {
  Int value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("bad ") + what + " '" +
                               std::string(tok) + "'");
  return value;
}

// Reads logical records, skipping blank and comment lines. Tracks the
// physical line number for error messages.
class RecordReader {
 public:
  explicit RecordReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, buf_)) {
      ++line_;
      if (!buf_.empty() && buf_.back() == '\r') buf_.pop_back();
      fields = split_fields(buf_);
      if (fields.empty()) continue;
      if (fields[0] == "c") continue;
      return true;
    }
    return false;
  }

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::string buf_;
  std::size_t line_ = 0;
};

}  // namespace detail

/// Instance format: header `p dagp <n> <m>`, then m records
/// `a <u> <v> <w>` with 1-based vertex ids and weight w >= 1.
inline WeightedDag read_instance(std::istream& in) {
  detail::RecordReader reader(in);
  std::vector<std::string_view> f;
  if (!reader.next(f)) throw ParseError(reader.line(), "missing header");
  if (f.size() != 4 || f[0] != "p" || f[1] != "dagp")
    throw ParseError(reader.line(), "expected 'p dagp <n> <m>' header");
  auto n = detail::parse_int<std::uint64_t>(f[2], reader.line(), "vertex count");
  auto m = detail::parse_int<std::uint64_t>(f[3], reader.line(), "arc count");

  std::vector<WeightedArc> arcs;
  arcs.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    if (!reader.next(f))
      throw ParseError(reader.line(), "missing arc record");
    if (f.size() != 4 || f[0] != "a")
      throw ParseError(reader.line(), "expected 'a <u> <v> <w>' record");
    auto u = detail::parse_int<std::uint64_t>(f[1], reader.line(), "vertex id");
    auto v = detail::parse_int<std::uint64_t>(f[2], reader.line(), "vertex id");
    auto w = detail::parse_int<Weight>(f[3], reader.line(), "weight");
    if (u < 1 || u > n || v < 1 || v > n)
      throw ParseError(reader.line(), "vertex id out of range");
    if (w < 1) throw ParseError(reader.line(), "weight must be at least one");
    arcs.push_back(WeightedArc{static_cast<Vertex>(u - 1),
                               static_cast<Vertex>(v - 1), w});
  }
  if (reader.next(f))
    throw ParseError(reader.line(), "trailing garbage after arc records");
  try {
    return WeightedDag(static_cast<std::size_t>(n), std::move(arcs));
  } catch (const Error& e) {
    throw ParseError(reader.line(), e.what());
  }
}

inline void write_instance(std::ostream& out, const WeightedDag& g) {
  out << "p dagp " << g.vertex_count() << ' ' << g.arc_count() << '\n';
  for (ArcId a = 0; a < g.arc_count(); ++a)
    out << "a " << g.arc(a).tail + 1 << ' ' << g.arc(a).head + 1 << ' '
        << g.weight(a) << '\n';
}

/// Solution format: `s dagp <total_weight> <num_arcs>` then `d <u> <v>`
/// records naming deleted arcs by endpoints (1-based).
struct SolutionFile {
  Weight declared_weight = 0;
  PartitioningSet set;
};

inline SolutionFile read_solution(std::istream& in, const WeightedDag& g) {
  detail::RecordReader reader(in);
  std::vector<std::string_view> f;
  if (!reader.next(f)) throw ParseError(reader.line(), "missing header");
  if (f.size() != 4 || f[0] != "s" || f[1] != "dagp")
    throw ParseError(reader.line(), "expected 's dagp <weight> <count>' header");
  auto weight = detail::parse_int<Weight>(f[2], reader.line(), "weight");
  auto count = detail::parse_int<std::uint64_t>(f[3], reader.line(), "count");

  std::vector<ArcId> ids;
  ids.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!reader.next(f)) throw ParseError(reader.line(), "missing arc record");
    if (f.size() != 3 || f[0] != "d")
      throw ParseError(reader.line(), "expected 'd <u> <v>' record");
    auto u = detail::parse_int<std::uint64_t>(f[1], reader.line(), "vertex id");
    auto v = detail::parse_int<std::uint64_t>(f[2], reader.line(), "vertex id");
    if (u < 1 || u > g.vertex_count() || v < 1 || v > g.vertex_count())
      throw ParseError(reader.line(), "vertex id out of range");
    ArcId a = g.find_arc(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
    if (a == kNoArc)
      throw ParseError(reader.line(), "deleted arc does not exist in instance");
    ids.push_back(a);
  }
  if (reader.next(f))
    throw ParseError(reader.line(), "trailing garbage after arc records");
  SolutionFile sol;
  sol.declared_weight = weight;
  sol.set = PartitioningSet::of(g, std::move(ids));
  return sol;
}

inline void write_solution(std::ostream& out, const WeightedDag& g,
                           const PartitioningSet& s) {
  out << "s dagp " << s.total_weight() << ' ' << s.size() << '\n';
  for (ArcId a : s.arcs())
    out << "d " << g.arc(a).tail + 1 << ' ' << g.arc(a).head + 1 << '\n';
}

/// PACE-style decomposition: `s td <num_bags> <max_bag_size> <n>`,
/// `b <bag_id> <v...>` records, then `<id> <id>` tree edges. 1-based.
inline TreeDecomposition read_tree_decomposition(std::istream& in) {
  detail::RecordReader reader(in);
  std::vector<std::string_view> f;
  if (!reader.next(f)) throw ParseError(reader.line(), "missing header");
  if (f.size() != 5 || f[0] != "s" || f[1] != "td")
    throw ParseError(reader.line(),
                     "expected 's td <bags> <max_bag_size> <n>' header");
  auto num_bags = detail::parse_int<std::uint64_t>(f[2], reader.line(), "bag count");
  auto max_bag = detail::parse_int<std::uint64_t>(f[3], reader.line(), "bag size");
  auto n = detail::parse_int<std::uint64_t>(f[4], reader.line(), "vertex count");

  TreeDecomposition td;
  td.graph_vertex_count = n;
  td.declared_width = max_bag == 0 ? 0 : max_bag - 1;
  td.bags.assign(num_bags, {});
  std::vector<char> seen(num_bags, 0);
  for (std::uint64_t i = 0; i < num_bags; ++i) {
    if (!reader.next(f)) throw ParseError(reader.line(), "missing bag record");
    if (f.size() < 2 || f[0] != "b")
      throw ParseError(reader.line(), "expected 'b <bag_id> <v...>' record");
    auto id = detail::parse_int<std::uint64_t>(f[1], reader.line(), "bag id");
    if (id < 1 || id > num_bags)
      throw ParseError(reader.line(), "bag id out of range");
    if (seen[id - 1]) throw ParseError(reader.line(), "duplicate bag id");
    seen[id - 1] = 1;
    std::vector<Vertex>& bag = td.bags[id - 1];
    for (std::size_t j = 2; j < f.size(); ++j) {
      auto v = detail::parse_int<std::uint64_t>(f[j], reader.line(), "vertex id");
      if (v < 1 || v > n) throw ParseError(reader.line(), "vertex id out of range");
      bag.push_back(static_cast<Vertex>(v - 1));
    }
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    if (bag.size() > max_bag)
      throw ParseError(reader.line(), "bag larger than declared maximum");
  }
  while (reader.next(f)) {
    if (f.size() != 2)
      throw ParseError(reader.line(), "expected '<bag_id> <bag_id>' tree edge");
    auto a = detail::parse_int<std::uint64_t>(f[0], reader.line(), "bag id");
    auto b = detail::parse_int<std::uint64_t>(f[1], reader.line(), "bag id");
    if (a < 1 || a > num_bags || b < 1 || b > num_bags)
      throw ParseError(reader.line(), "bag id out of range");
    td.edges.emplace_back(a - 1, b - 1);
  }
  if (td.bags.size() > 0 && td.edges.size() + 1 != td.bags.size())
    throw ParseError(reader.line(), "decomposition tree must have bags-1 edges");
  return td;
}

inline void write_tree_decomposition(std::ostream& out,
                                     const TreeDecomposition& td) {
  std::size_t max_bag = 0;
  for (const auto& b : td.bags) max_bag = std::max(max_bag, b.size());
  out << "s td " << td.bags.size() << ' ' << max_bag << ' '
      << td.graph_vertex_count << '\n';
  for (std::size_t i = 0; i < td.bags.size(); ++i) {
    out << "b " << i + 1;
    for (Vertex v : td.bags[i]) out << ' ' << v + 1;
    out << '\n';
  }
  for (auto [a, b] : td.edges) out << a + 1 << ' ' << b + 1 << '\n';
}

inline WeightedDag read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file: " + path);
  return read_instance(in);
}

inline TreeDecomposition read_tree_decomposition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open decomposition file: " + path);
  return read_tree_decomposition(in);
}

}  // namespace dagp
