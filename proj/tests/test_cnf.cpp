#include <doctest.h>

#include <random>

#include "lincnf/cnf.hpp"
#include "lincnf/error.hpp"
#include "oracles.hpp"

using namespace lincnf;

TEST_SUITE("cnf") {

TEST_CASE("literal order is by variable, negative first") {
  CHECK(Literal::negative(1) < Literal::positive(1));
  CHECK(Literal::positive(1) < Literal::negative(2));
  CHECK(Literal::from_dimacs(-3).complement() == Literal::positive(3));
  CHECK_THROWS_AS(Literal::from_dimacs(0), InvalidArgument);
  CHECK_THROWS_AS(Literal::positive(0), InvalidArgument);
}

TEST_CASE("clauses reject repeats and complementary pairs") {
  CHECK_THROWS_AS((Clause{1, 1}), InvalidArgument);
  CHECK_THROWS_AS((Clause{1, -1}), InvalidArgument);
  const Clause c{3, -1, 2};
  REQUIRE(c.width() == 3);
  CHECK(c.literals()[0] == Literal::negative(1));
  CHECK(c.literals()[2] == Literal::positive(3));
  CHECK(c.literal_of(2) == Literal::positive(2));
  CHECK_FALSE(c.literal_of(4).has_value());
  CHECK(Clause{}.empty());
}

TEST_CASE("formulas are canonical sets") {
  const CnfFormula f({Clause{2, 1}, Clause{1, 2}, Clause{-1}});
  CHECK(f.size() == 2);
  CHECK(f[0] == Clause{-1});
  CHECK(f.universe() == std::vector<int>{1, 2});
  CHECK_THROWS_AS(CnfFormula({Clause{1, 2}, Clause{3}}, 2), InvalidArgument);
  CHECK_THROWS_AS(CnfFormula::with_variable_count({Clause{5}}, 3), InvalidArgument);
  CHECK(CnfFormula::with_variable_count({Clause{1}}, 4).universe().size() == 4);
}

TEST_CASE("linearity levels on the introductory examples") {
  const CnfFormula linear({Clause{-1, 2}, Clause{-2, 3}, Clause{3, 4}, Clause{-4, -1}});
  const CnfFormula weak({Clause{-1, 2}, Clause{1, 2}, Clause{2, 3}});
  const CnfFormula neither({Clause{1, 2, 3}, Clause{1, 2, -3}});
  CHECK(linearity_level(linear, 1, LinearityMode::Strict));
  CHECK(linearity_level(weak, 1, LinearityMode::Weak));
  CHECK_FALSE(linearity_level(weak, 1, LinearityMode::Strict));
  CHECK_FALSE(linearity_level(neither, 1, LinearityMode::Weak));
  CHECK_FALSE(linearity_level(neither, 1, LinearityMode::Strict));
  CHECK(linearity_level(neither, 2, LinearityMode::Weak));
  CHECK(linearity_level(neither, 3, LinearityMode::Strict));

  auto v = first_linearity_violation(weak, 1, LinearityMode::Strict);
  REQUIRE(v);
  // Canonical order: {-1,2} < {1,2} < {2,3}; the first two share x1 and x2.
  CHECK(*v == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK_THROWS_AS(linearity_level(weak, 0, LinearityMode::Strict), InvalidArgument);
}

TEST_CASE("linearity agrees with pairwise brute force") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    oracle::RawFormula raw;
    const int n = 6 + static_cast<int>(rng() % 5);
    for (int i = 0; i < 8; ++i)
      raw.push_back(oracle::random_clause(rng, n, 2 + static_cast<int>(rng() % 3)));
    const CnfFormula f = oracle::to_formula(raw, n);
    const auto canon = oracle::raw(f);
    for (int b = 1; b <= 2; ++b) {
      bool strict = true, weak = true;
      for (std::size_t i = 0; i < canon.size(); ++i)
        for (std::size_t j = i + 1; j < canon.size(); ++j) {
          int vars = 0;
          for (int x : canon[i])
            for (int y : canon[j])
              vars += std::abs(x) == std::abs(y);
          strict = strict && vars <= b;
          weak = weak && oracle::shared_literals(canon[i], canon[j]) <= b;
        }
      CHECK(linearity_level(f, b, LinearityMode::Strict) == strict);
      CHECK(linearity_level(f, b, LinearityMode::Weak) == weak);
    }
  }
}

TEST_CASE("restriction drops satisfied clauses and falsified literals") {
  const CnfFormula f({Clause{1, 2}, Clause{-1, 3}, Clause{2, 3}});
  Assignment a;
  a.assign(1, true);
  const CnfFormula g = restrict(f, a);
  CHECK(g == CnfFormula::over({Clause{3}, Clause{2, 3}}, {2, 3}));
  CHECK_FALSE(g.declared_width().has_value());
  CHECK_THROWS_AS(a.assign(1, false), InvalidArgument);
  CHECK_THROWS_AS(evaluate(f, a), InvalidArgument);
}

TEST_CASE("model counts match enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    oracle::RawFormula raw;
    const int m = static_cast<int>(rng() % 25);
    for (int i = 0; i < m; ++i)
      raw.push_back(oracle::random_clause(rng, n, 1 + static_cast<int>(rng() % std::min(n, 3))));
    const CnfFormula f = oracle::to_formula(raw, n);
    const auto expected = oracle::count_models(raw, n);
    CHECK(count_models(f) == expected);
    auto model = find_model(f);
    CHECK(model.has_value() == (expected > 0));
    if (model)
      CHECK(evaluate(f, *model));
  }
  CHECK_THROWS_AS(count_models(CnfFormula::with_variable_count({}, 30)), CapExceeded);
  CHECK(count_models(CnfFormula::with_variable_count({}, 3)) == 8);
}

TEST_CASE("degree statistics") {
  const CnfFormula f({Clause{1, 2, 3}, Clause{-1, 4, 5}, Clause{1, 4}, Clause{2}});
  const DegreeStats s = degree_stats(f, 3);
  CHECK(s.degree(1) == 3);
  CHECK(s.occ(Literal::positive(1)) == 2);
  CHECK(s.occ(Literal::negative(1)) == 1);
  CHECK(s.occ(Literal::negative(9)) == 0);
  CHECK(s.d_km1(1) == 1);
  CHECK(s.d_km1(4) == 1);
  CHECK(s.d_km1(2) == 0);
  CHECK(s.max_degree == 3);
  CHECK(s.max_occurrence == 2);
  CHECK(near_full_degree(f, 4, 3) == 1);
  CHECK(near_full_degree(f, 2, 2) == 1);
}

TEST_CASE("hypergraphs") {
  const Hypergraph h(4, 2, {{0, 1}, {1, 0}, {2, 3}, {1, 2}});
  CHECK(h.edge_count() == 3);
  CHECK(h.degrees() == std::vector<std::size_t>{1, 2, 2, 1});
  CHECK(is_linear(h));
  CHECK(within_pair_bound(h));
  CHECK(is_rich(h, 2, 2));
  CHECK_FALSE(is_rich(h, 3, 2));
  CHECK_THROWS_AS(Hypergraph(3, 2, {{0, 3}}), InvalidArgument);
  CHECK_THROWS_AS(Hypergraph(3, 2, {{0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(Hypergraph(3, 2, {{0, 1, 2}}), InvalidArgument);

  const Hypergraph tri(4, 3, {{0, 1, 2}, {0, 1, 3}});
  CHECK_FALSE(is_linear(tri));
  CHECK(is_b_linear(tri, 2));
  CHECK(first_intersection_violation(tri, 1) == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("literal hypergraph and renumbering") {
  const CnfFormula f({Clause{1, -2}, Clause{-2, 5}});
  const LiteralHypergraph lh = literal_hypergraph(f);
  CHECK(lh.graph.vertex_count() == 3);
  CHECK(lh.vertex_literal[0] == Literal::positive(1));
  CHECK(lh.graph.edge_count() == 2);
  CHECK_THROWS_AS(literal_hypergraph(CnfFormula({Clause{1}, Clause{2, 3}})), InvalidArgument);

  const Renumbering r = renumber(CnfFormula::over({Clause{3, -7}}, {3, 7}));
  CHECK(r.formula == CnfFormula({Clause{1, -2}}));
  CHECK(r.original == std::vector<int>{3, 7});
}

TEST_CASE("overlap scan") {
  CHECK_FALSE(first_overlap_violation({{1, 2}, {2, 3}, {3, 4}}, 1));
  CHECK(first_overlap_violation({{1, 2, 3}, {4, 5}, {1, 3, 5}}, 1) ==
        std::pair<std::size_t, std::size_t>{0, 2});
}

}
