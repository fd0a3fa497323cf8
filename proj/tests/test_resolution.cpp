#include <doctest.h>

#include <cmath>
#include <random>

#include "lincnf/constructions.hpp"
#include "lincnf/resolution.hpp"
#include "oracles.hpp"

using namespace lincnf;

TEST_SUITE("resolution") {

TEST_CASE("resolvents") {
  CHECK(resolve(Clause{1, 2}, Clause{-1, 3}) == Clause{2, 3});
  CHECK(resolve(Clause{1}, Clause{-1}) == Clause{});
  CHECK(resolve(Clause{1, 2}, Clause{-1, 2}) == Clause{2});
  CHECK_THROWS_AS(resolve(Clause{1, 2}, Clause{-1, -2}), InvalidArgument);
  CHECK_THROWS_AS(resolve(Clause{1, 2}, Clause{2, 3}), InvalidArgument);
  CHECK(unique_clash(Clause{1, -2}, Clause{2, 3}) == 2);
  CHECK_FALSE(unique_clash(Clause{1, 2}, Clause{-1, -2}));
}

TEST_CASE("hand-built tree on the complete 2-CNF") {
  const CnfFormula f = complete_kcnf(2);
  ResolutionTree t;
  const NodeId a = t.add_leaf(Clause{1, 2});
  const NodeId b = t.add_leaf(Clause{1, -2});
  const NodeId c = t.add_leaf(Clause{-1, 2});
  const NodeId d = t.add_leaf(Clause{-1, -2});
  const NodeId ab = t.add_resolvent(b, a); // order normalized
  const NodeId cd = t.add_resolvent(c, d);
  t.set_root(t.add_resolvent(cd, ab));
  CHECK(t.node(ab).label == Clause{1});
  CHECK(t.node(ab).resolved_var == 2);
  CHECK((*t.node(ab).children)[0] == a);
  CHECK((*t.node(t.root()).children)[0] == ab);

  const TreeReport r = check_tree(t, f);
  CHECK(r.valid);
  CHECK(r.strict);
  CHECK(r.regular);
  CHECK(r.leaf_count == 4);
  CHECK(r.node_count == 7);
  CHECK(r.depth == 2);

  // Same leaves against a formula lacking one clause.
  const CnfFormula g({Clause{1, 2}, Clause{1, -2}, Clause{-1, 2}});
  const TreeReport rg = check_tree(t, g);
  CHECK_FALSE(rg.valid);
  CHECK(rg.leaves_not_in_formula == std::vector<NodeId>{d});
}

TEST_CASE("malformed trees") {
  ResolutionTree t;
  TreeNode n;
  n.label = Clause{};
  n.children = std::array<NodeId, 2>{0, 0};
  n.resolved_var = 1;
  t.add_node(n);
  t.set_root(0);
  CHECK_THROWS_AS(check_tree(t, complete_kcnf(1)), MalformedTree);

  ResolutionTree shared;
  const NodeId leaf = shared.add_leaf(Clause{1});
  TreeNode bad;
  bad.label = Clause{};
  bad.children = std::array<NodeId, 2>{leaf, leaf};
  bad.resolved_var = 1;
  shared.set_root(shared.add_node(bad));
  CHECK_THROWS_AS(shared.compacted(), MalformedTree);

  // Wrong label: resolvent claims the empty clause from {1,2} and {-1}.
  ResolutionTree wrong;
  const NodeId p = wrong.add_leaf(Clause{1, 2});
  const NodeId q = wrong.add_leaf(Clause{-1});
  TreeNode w;
  w.label = Clause{};
  w.children = std::array<NodeId, 2>{p, q};
  w.resolved_var = 1;
  wrong.set_root(wrong.add_node(w));
  const TreeReport r = check_tree(wrong, CnfFormula({Clause{1, 2}, Clause{-1}}));
  CHECK_FALSE(r.valid);
  CHECK_FALSE(r.problems.empty());
}

TEST_CASE("irregular but valid tree") {
  // x1 resolved twice on one path: {1,2},{-1,2} -> {2}; then {2},{-2,1} -> {1}; {1},{-1} -> {}.
  const CnfFormula f({Clause{1, 2}, Clause{-1, 2}, Clause{1, -2}, Clause{-1}});
  ResolutionTree t;
  const NodeId a = t.add_resolvent(t.add_leaf(Clause{1, 2}), t.add_leaf(Clause{-1, 2}));
  const NodeId b = t.add_resolvent(a, t.add_leaf(Clause{1, -2}));
  t.set_root(t.add_resolvent(b, t.add_leaf(Clause{-1})));
  const TreeReport r = check_tree(t, f);
  CHECK(r.valid);
  CHECK_FALSE(r.regular);
}

TEST_CASE("pure splitting refutes K_k with 2^k leaves") {
  for (int k = 1; k <= 5; ++k) {
    const DpllResult r = dpll_refute(complete_kcnf(k));
    REQUIRE(r.verdict == Verdict::Unsat);
    const TreeReport rep = check_tree(*r.tree, complete_kcnf(k));
    CHECK(rep.valid);
    CHECK(rep.strict);
    CHECK(rep.regular);
    CHECK(rep.leaf_count == (std::size_t{1} << k));
    CHECK(r.stats.tree_leaves == rep.leaf_count);
  }
}

TEST_CASE("trivial inputs") {
  const DpllResult empty_clause = dpll_refute(CnfFormula({Clause{}}));
  CHECK(empty_clause.verdict == Verdict::Unsat);
  CHECK(empty_clause.tree->size() == 1);

  const DpllResult empty_formula = dpll_refute(CnfFormula::with_variable_count({}, 2));
  CHECK(empty_formula.verdict == Verdict::Sat);
  CHECK(empty_formula.model->size() == 2);

  const DpllResult sat = dpll_refute(CnfFormula({Clause{1, 2}}));
  CHECK(sat.verdict == Verdict::Sat);
  CHECK(evaluate(CnfFormula({Clause{1, 2}}), *sat.model));
}

TEST_CASE("DPLL agrees with exhaustive counting") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const int m = 1 + static_cast<int>(rng() % 40);
    oracle::RawFormula raw;
    for (int i = 0; i < m; ++i)
      raw.push_back(oracle::random_clause(rng, n, 1 + static_cast<int>(rng() % std::min(n, 4))));
    const CnfFormula f = oracle::to_formula(raw, n);
    const bool sat = oracle::count_models(raw, n) > 0;
    for (auto mode : {PropagationMode::PureSplit, PropagationMode::Unit})
      for (auto policy : {BranchPolicy::Fixed, BranchPolicy::MaxDegree, BranchPolicy::Random}) {
        DpllOptions opt;
        opt.mode = mode;
        opt.policy = policy;
        opt.seed = trial;
        const DpllResult r = dpll_refute(f, opt);
        REQUIRE(r.verdict != Verdict::Unknown);
        CHECK((r.verdict == Verdict::Sat) == sat);
        if (r.verdict == Verdict::Sat)
          CHECK(evaluate(f, *r.model));
        else {
          const TreeReport rep = check_tree(*r.tree, f);
          CHECK(rep.valid);
          if (mode == PropagationMode::PureSplit)
            CHECK(rep.regular);
        }
      }
  }
}

TEST_CASE("decision budget") {
  DpllOptions opt;
  opt.decision_budget = 3;
  const DpllResult r = dpll_refute(complete_kcnf(6), opt);
  CHECK(r.verdict == Verdict::Unknown);
  CHECK_FALSE(r.tree);
  CHECK(r.stats.decisions <= 3);
}

TEST_CASE("random policy is seeded") {
  const CnfFormula f = complete_kcnf(4);
  DpllOptions opt;
  opt.policy = BranchPolicy::Random;
  opt.seed = 99;
  CHECK((*dpll_refute(f, opt).tree == *dpll_refute(f, opt).tree));
}

TEST_CASE("treelike lower bound") {
  CHECK(treelike_lower_bound(2) == 2);
  CHECK(treelike_lower_bound(4) == 4);
  CHECK(treelike_lower_bound(6) == 16);
  CHECK(treelike_lower_bound(8) == 256);
  // Odd k: ceil(2^(2^(k/2 - 1))) checked against double evaluation where safe.
  for (int k : {3, 5, 7, 9, 11}) {
    const double v = std::pow(2.0, std::pow(2.0, k / 2.0 - 1));
    CHECK(treelike_lower_bound(k) == BigInt(static_cast<long long>(std::ceil(v))));
  }
  CHECK_THROWS_AS(treelike_lower_bound(50), CapExceeded);
}

}
