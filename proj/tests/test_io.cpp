#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "dagp/io.hpp"
#include "support.hpp"

using namespace dagp;

TEST_CASE("instance files round-trip") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 50; ++i) {
    WeightedDag g = testing::random_dag(rng, 10, 20, 9);
    std::stringstream buf;
    write_instance(buf, g);
    WeightedDag back = read_instance(buf);
    std::stringstream again;
    write_instance(again, back);
    std::stringstream first;
    write_instance(first, g);
    CHECK(again.str() == first.str());
  }
}

TEST_CASE("instance parser rejects malformed input") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_instance(in);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("p dagp 2\n"), ParseError);
  CHECK_THROWS_AS(parse("p dagp 2 1\n"), ParseError);              // missing arc
  CHECK_THROWS_AS(parse("p dagp 2 1\na 1 2\n"), ParseError);       // short record
  CHECK_THROWS_AS(parse("p dagp 2 1\na 1 3 1\n"), ParseError);     // bad id
  CHECK_THROWS_AS(parse("p dagp 2 1\na 1 2 0\n"), ParseError);     // zero weight
  CHECK_THROWS_AS(parse("p dagp 2 1\na 1 2 1\nx\n"), ParseError);  // garbage
  CHECK_THROWS_AS(parse("p dagp 2 2\na 1 2 1\na 1 2 1\n"), ParseError);
  CHECK_THROWS_AS(parse("p dagp 2 2\na 1 2 1\na 2 1 1\n"), ParseError);  // cycle

  // Comments and blank lines are fine anywhere.
  WeightedDag g = parse("c hello\n\np dagp 2 1\nc mid\na 1 2 3\nc end\n");
  CHECK(g.arc_count() == 1);
  CHECK(g.weight(0) == 3);

  // Line numbers point at the offending record.
  try {
    parse("c one\np dagp 2 1\na 1 3 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("solution files round-trip against an instance") {
  WeightedDag g(3, {{0, 1, 2}, {0, 2, 5}});
  auto s = PartitioningSet::of(g, {1});
  std::stringstream buf;
  write_solution(buf, g, s);
  SolutionFile sol = read_solution(buf, g);
  CHECK(sol.declared_weight == 5);
  CHECK(sol.set == s);

  std::istringstream missing("s dagp 1 1\nd 2 3\n");
  CHECK_THROWS_AS(read_solution(missing, g), ParseError);
}

TEST_CASE("tree decomposition files parse") {
  std::istringstream in(
      "c width-1 path decomposition\n"
      "s td 2 2 3\n"
      "b 1 1 2\n"
      "b 2 2 3\n"
      "1 2\n");
  TreeDecomposition td = read_tree_decomposition(in);
  REQUIRE(td.bags.size() == 2);
  CHECK(td.bags[0] == std::vector<Vertex>{0, 1});
  CHECK(td.bags[1] == std::vector<Vertex>{1, 2});
  CHECK(td.edges == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
  CHECK(td.declared_width == 1);

  std::stringstream buf;
  write_tree_decomposition(buf, td);
  TreeDecomposition back = read_tree_decomposition(buf);
  CHECK(back.bags == td.bags);
  CHECK(back.edges == td.edges);

  std::istringstream bad("s td 2 2 3\nb 1 1 2\nb 2 2 3\n");
  CHECK_THROWS_AS(read_tree_decomposition(bad), ParseError);  // missing edge
}
