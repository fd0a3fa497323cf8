#include <doctest.h>

#include <random>

#include "lincnf/constructions.hpp"
#include "lincnf/formats.hpp"
#include "oracles.hpp"

using namespace lincnf;

namespace {

std::size_t parse_error_line(std::string_view text) {
  try {
    parse_dimacs(text);
  } catch (const ParseError &e) {
    return e.line();
  }
  return 0;
}

} // namespace

TEST_SUITE("formats") {

TEST_CASE("DIMACS writer output is exact") {
  const CnfFormula f({Clause{1, -2}, Clause{2, 3}}, 2);
  CHECK(write_dimacs(f, {{"generator", "test"}}) ==
        "c meta generator=test\n"
        "c meta width=2\n"
        "p cnf 3 2\n"
        "1 -2 0\n"
        "2 3 0\n");
  CHECK_THROWS_AS(write_dimacs(f, {{"width", "3"}}), InvalidArgument);
  CHECK_THROWS_AS(write_dimacs(f, {{"bad key", "x"}}), InvalidArgument);
}

TEST_CASE("DIMACS parser accepts common layouts") {
  const ParsedCnf p = parse_dimacs("c plain comment\n"
                                   "c meta seed=7\n"
                                   "p cnf 4 3\r\n"
                                   "  1 -2\n 0 3 0\n"
                                   "0\n"
                                   "%\n");
  CHECK(p.formula.size() == 3);
  CHECK(p.formula.has_empty_clause());
  CHECK(p.formula.universe().size() == 4);
  CHECK(p.meta == Metadata{{"seed", "7"}});
}

TEST_CASE("DIMACS parse errors carry line numbers") {
  CHECK(parse_error_line("p cnf 2 1\n1 2\n") == 2);
  CHECK(parse_error_line("p cnf 2 1\n1 x 0\n") == 2);
  CHECK(parse_error_line("c\np cnf 2 1\n1 3 0\n") == 3);
  CHECK(parse_error_line("p cnf 2 2\n1 2 0\n") == 2);
  CHECK(parse_error_line("p cnf 2 1\n1 -1 0\n") == 2);
  CHECK(parse_error_line("p cnf 2 1\n1 1 0\n") == 2);
  CHECK(parse_error_line("p cnf 2\n") == 1);
  CHECK(parse_error_line("1 2 0\n") == 1);
  CHECK_THROWS_AS(parse_dimacs("c meta width=2\np cnf 2 1\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs(""), ParseError);
}

TEST_CASE("non-dense universes survive the round trip") {
  const CnfFormula f = CnfFormula::over({Clause{2, -5}}, {2, 3, 5});
  const std::string text = write_dimacs(f);
  CHECK(text.find("c meta universe=2,3,5\n") != std::string::npos);
  CHECK(parse_dimacs(text).formula == f);
}

TEST_CASE("random formula round trips") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    oracle::RawFormula raw;
    const int m = static_cast<int>(rng() % 20);
    for (int i = 0; i < m; ++i)
      raw.push_back(oracle::random_clause(rng, n, static_cast<int>(rng() % (std::min(n, 4) + 1))));
    const CnfFormula f = oracle::to_formula(raw, n);
    const std::string text = write_dimacs(f, {{"trial", std::to_string(trial)}});
    const ParsedCnf p = parse_dimacs(text);
    CHECK(p.formula == f);
    CHECK(write_dimacs(p.formula, p.meta) == text);
  }
}

TEST_CASE("hypergraph format") {
  const auto h = kuzjurin_hypergraph(3, 4);
  const std::string text = write_hypergraph(h.graph, {{"q", "4"}});
  CHECK(text.rfind("c meta q=4\nh 12 16 3\n", 0) == 0);
  const ParsedHypergraph p = parse_hypergraph(text);
  CHECK(p.graph == h.graph);
  CHECK(write_hypergraph(p.graph, p.meta) == text);
  CHECK_THROWS_AS(parse_hypergraph("h 3 1 2\n0 3\n"), ParseError);
  CHECK_THROWS_AS(parse_hypergraph("h 3 1 2\n0 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_hypergraph("h 3 2 2\n0 1\n"), ParseError);
}

TEST_CASE("tree format") {
  const CnfFormula f = complete_kcnf(3);
  const ResolutionTree t = *dpll_refute(f).tree;
  const std::string text = write_tree(t);
  const ParsedTree p = parse_tree(text);
  CHECK((p.tree == t));
  CHECK(write_tree(p.tree) == text);
  CHECK(check_tree(p.tree, f).valid);

  ResolutionTree small;
  const NodeId a = small.add_leaf(Clause{1});
  const NodeId b = small.add_leaf(Clause{-1});
  small.set_root(small.add_resolvent(a, b));
  CHECK(write_tree(small) == "t 3 2\n0 LEAF 1 0\n1 LEAF -1 0\n2 RES 1 0 1 0\n");

  CHECK_THROWS_AS(parse_tree("t 1 0\n1 LEAF 1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_tree("t 2 1\n0 LEAF 1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_tree("t 1 0\n0 RES 1 4 5 0\n"), ParseError);
  CHECK_THROWS_AS(parse_tree("t 1 0\n0 NODE 1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_tree("t 1 0\n0 LEAF 1\n"), ParseError);
}

TEST_CASE("format detection") {
  CHECK(detect_format("c x\np cnf 1 0\n") == FileFormat::Dimacs);
  CHECK(detect_format("h 0 0 2\n") == FileFormat::Hypergraph);
  CHECK(detect_format("t 1 0\n0 LEAF 0\n") == FileFormat::Tree);
  CHECK_THROWS_AS(detect_format("q\n"), ParseError);
}

}
