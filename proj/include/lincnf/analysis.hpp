#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lincnf/cnf.hpp"
#include "lincnf/numeric.hpp"
#include "lincnf/resolution.hpp"

namespace lincnf {

// --- weight function and the one-step walk inequality -------------------------------

// Sum over clauses of width <= k-2 of 2^(k - width).
BigInt weight(const CnfFormula &f, int k);

struct WalkStep {
  Rational lhs; // (w(F|y=0) + w(F|y=1)) / 2
  BigInt rhs;   // w(F) + 2 d_{k-1}(y, F)
  bool pass = false;
};

// Exact one-step form of the expected-weight recurrence. Throws
// InvalidArgument when F is not weakly linear or y does not occur in F.
WalkStep walk_step_check(const CnfFormula &f, int k, int y);

// max over x != y of d_{k-1}(x, F|y=value) - d_{k-1}(x, F); may be negative
// when nothing grows. Weak linearity bounds it by 2.
long near_full_growth(const CnfFormula &f, int k, int y, bool value);

struct WalkOptions {
  int k = 0;
  int length = 0;
  std::uint64_t trials = 1000;
  std::uint64_t seed = kDefaultSeed;
  BranchPolicy policy = BranchPolicy::MaxDegree;
};

struct WalkStepStats {
  int step = 0;
  double mean_weight = 0;
  double stddev_weight = 0;
  BigInt max_weight;
  std::size_t max_near_full = 0; // max over walks and x of d_{k-1}(x, F_i)
  double empty_fraction = 0;     // walks whose F_i holds the empty clause
  BigInt expectation_bound;      // 4 * C(i, 2)
  bool within_bound = false;     // mean <= bound + 3 sigma / sqrt(trials)
};

struct WalkStatistics {
  std::vector<WalkStepStats> steps; // index 0..length
  std::uint64_t degree_violations = 0; // (walk, i, x) with d_{k-1}(x,F_i) > 2i
  std::uint64_t step_check_failures = 0;
  double empty_fraction = 0;
  bool consistent = false; // no violations and every step within bound
};

// Random restriction walks: at each step the branch variable is picked by
// `policy` among the variables of the current formula and its value by a fair
// coin; a walk stops once its formula contains the empty clause or no
// variables remain. These are statistics of restriction walks, not of a
// minimal resolution tree. Throws InvalidArgument for non weakly linear F.
WalkStatistics random_walk_experiment(const CnfFormula &f, const WalkOptions &options);

// --- frequent literals ---------------------------------------------------------------

// Removes from every clause its b literals of highest occ_F, ties broken by
// canonical literal order. Throws InvalidArgument for clauses of width <= b.
CnfFormula strip_max_degree(const CnfFormula &f, int b);

// Number of literals u with occ_F(u) >= tau + 1.
std::size_t frequent_literal_count(const CnfFormula &f, std::size_t tau);

// --- richness -------------------------------------------------------------------------

struct RichBoundCheck {
  bool is_rich = false;
  std::size_t edge_count = 0;
  BigInt bound; // C(d+1, 2)
  bool pass = false;
};

// A linear (d,d)-rich hypergraph has at least C(d+1, 2) edges. Throws
// InvalidArgument for non-linear input.
RichBoundCheck rich_bound_check(const Hypergraph &h, std::size_t d);

// --- conflict graphs and kappa -------------------------------------------------------------

// Simple undirected graph with literal-labelled vertices.
class Graph {
public:
  Graph() = default;
  Graph(std::vector<Literal> labels, std::vector<std::pair<int, int>> edges);
  // Unlabelled graph on n vertices.
  static Graph unlabelled(int n, std::vector<std::pair<int, int>> edges);

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  const std::vector<Literal> &labels() const { return labels_; }
  const std::vector<std::pair<int, int>> &edges() const { return edges_; }
  bool adjacent(int u, int v) const;

  // Neighbourhood bitmasks; requires vertex_count() <= 64.
  std::vector<std::uint64_t> adjacency_masks() const;

  bool operator==(const Graph &) const = default;

private:
  std::vector<Literal> labels_;
  std::vector<std::pair<int, int>> edges_; // u < v, sorted, unique
};

// G_a: vertices are the literals of C_a; u ~ v when some leaf of a's subtree
// is labelled with a clause containing both. Throws InvalidArgument when the
// tree is not a valid refutation of F or a is not a node.
Graph conflict_graph(const ResolutionTree &t, const CnfFormula &f, NodeId a);

// How many leaves of a's subtree witness each edge of G_a.
std::map<std::pair<int, int>, std::size_t>
conflict_edge_support(const ResolutionTree &t, const CnfFormula &f, NodeId a);

inline constexpr int kDefaultKappaCap = 20;

// Minimum number of vertices whose removal leaves no i-clique.
// Throws CapExceeded above `cap` vertices, InvalidArgument for i < 1.
std::size_t kappa(const Graph &g, int i, int cap = kDefaultKappaCap);

// (kappa_1, ..., kappa_k).
std::vector<std::size_t> kappa_profile(const Graph &g, int k, int cap = kDefaultKappaCap);

struct LipschitzCheck {
  std::size_t distance = 0;
  std::vector<std::size_t> kappa_ancestor;
  std::vector<std::size_t> kappa_descendant;
  bool pass = false;
};

// kappa_i(b) <= kappa_i(a) + dist(a, b) for i = 1..k, k the largest clause
// width of F. Throws InvalidArgument when a is not an ancestor of b.
LipschitzCheck kappa_lipschitz_check(const ResolutionTree &t, const CnfFormula &f,
                                     NodeId a, NodeId b, int cap = kDefaultKappaCap);

// --- recurrences and towers ------------------------------------------------------------------

struct ThetaNu {
  int k = 0;
  int ell = 0;
  // Entries for i = ell, ell-1, ..., down to the last computed index;
  // theta[j] and nu[j] belong to index ell - j.
  std::vector<BigInt> theta;
  std::vector<Rational> nu;
  bool feasible = true;   // false when some theta_i <= 0
  bool capped = false;    // stopped because 2^(nu*theta) left the bit budget
  std::optional<int> stopped_at; // index i where computation stopped
  std::string note;

  // ceil(2^(nu_1 theta_1)) when the recursion reached i = 1 feasibly.
  std::optional<BigInt> clause_bound;
};

// theta_ell = floor((k-ell+1)/2) - 1, nu_ell = 1, and for i < ell
// theta_i = floor(2^(nu_{i+1} theta_{i+1} - 2) / theta_{i+1}) - 1,
// nu_i = (nu_{i+1} theta_{i+1} - 1) / theta_i * floor(theta_i / theta_{i+1}).
// Throws InvalidArgument unless 1 <= ell <= k.
ThetaNu theta_nu(int k, int ell, std::uint64_t bit_budget = kDefaultBitBudget);

// tower_a(0) = 1, tower_a(n+1) = a^tower_a(n); floor of the real value for
// non-integral a. nullopt once the value needs more than bit_budget bits.
// Throws InvalidArgument unless a > 1.
std::optional<BigInt> tower(const Rational &a, int n,
                            std::uint64_t bit_budget = kDefaultBitBudget);

// --- bound table ------------------------------------------------------------------------

struct RelatedBound {
  std::string name;     // short id used in reports
  std::string formula;  // symbolic form
  std::string source;   // where the bound comes from
  bool is_upper = false;
  RationalBracket value;
};

struct BoundsReport {
  int k = 0;
  int b = 1;
  RationalBracket lower_clause_bound;   // weakly b-linear formulas this small are satisfiable
  BigInt upper_clause_bound;            // some unsat b-linear formula is at most this large
  std::optional<std::uint64_t> construction_q;
  std::optional<BigInt> construction_clauses; // q^(1+b) for the chosen q
  std::optional<BigInt> treelike_bound;       // nullopt when past the bit budget
  RationalBracket focc_lower;                 // 2^k/(ek) - 1
  std::vector<RelatedBound> f_table;
  std::optional<int> known_f;                 // exact f(k) where settled
};

// Throws InvalidArgument unless k >= 2 and b >= 1.
BoundsReport size_bounds(int k, int b = 1);

} // namespace lincnf
