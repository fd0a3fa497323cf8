#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lincnf/cnf.hpp"
#include "lincnf/error.hpp"
#include "lincnf/galois.hpp"
#include "lincnf/numeric.hpp"

namespace lincnf {

// All 2^k clauses of width k over `variables` (pairwise distinct ids).
CnfFormula complete_kcnf(const std::vector<int> &variables);
CnfFormula complete_kcnf(int k); // over 1..k

inline constexpr int kRecursiveFeasibilityCap = 3;

// The tower-growth recursion: F_0 = {empty clause}; F_{k+1} takes 2^m
// variable-disjoint copies of F_k (m = |F_k|) and extends clause j of copy i
// with literal j of the i-th clause of the complete m-CNF over m fresh shared
// variables 1..m. Copy i occupies a contiguous id block after the shared ones.
// Throws CapExceeded above `cap` (the next level after 3 has 2^2059 clauses).
CnfFormula recursive_unsat_linear(int k, int cap = kRecursiveFeasibilityCap);

// Clause count of F_k without materializing it: 1, 2, 8, 2048, 2048*2^2048...
// Throws CapExceeded when the count has more than `max_bits` bits.
BigInt recursive_clause_count(int k, std::uint64_t max_bits = 1 << 20);

// Vandermonde hypergraph on k parts of q vertices each (vertex id = part*q +
// element code). Edges are the tuples (x_1..x_k) annihilated by the rows
// 0..k-b-2 of the Vandermonde matrix on the evaluation points; the first b+1
// coordinates are free, the rest solved exactly.
struct VandermondeHypergraph {
  Hypergraph graph;
  FieldPtr field;
  std::vector<std::uint32_t> evaluation_points; // element codes, one per part
  int b = 1;
};

// Linear construction: kq vertices, q^2 edges. For k = 2 the system is empty
// and every cross pair is an edge.
VandermondeHypergraph kuzjurin_hypergraph(int k, std::uint64_t q);

// b-linear construction: kq vertices, q^(1+b) edges, 1 <= b <= k-2.
VandermondeHypergraph b_linear_hypergraph(int k, std::uint64_t q, int b);

// Number of part-transversal (b+1)-subsets covered by 0, 1 and >1 edges.
// Transversal pair coverage: a correct construction has only "exactly one".
struct CoverageCounts {
  std::uint64_t uncovered = 0;
  std::uint64_t exactly_once = 0;
  std::uint64_t multiply = 0;
  std::uint64_t same_part_covered = 0; // subsets with two vertices in one part
};
CoverageCounts transversal_coverage(const VandermondeHypergraph &h);

// One clause per edge, vertex v -> variable v+1, each literal negated
// independently with probability 1/2 drawn from SplitMix64(seed).
CnfFormula random_signing(const Hypergraph &h, std::uint64_t seed);

// log2 of the expected model count 2^n (1 - 2^-k)^m.
double expected_models_log2(std::uint64_t n, std::uint64_t m, int k);

enum class TrialOutcome { UnsatVerified, Sat, Unverified };
std::string to_string(TrialOutcome o);

struct SigningTrial {
  std::uint64_t seed = 0;
  std::uint64_t trial_index = 0;
  TrialOutcome outcome = TrialOutcome::Unverified;
  std::optional<std::uint64_t> models_found; // set when counted exhaustively
  std::string verifier;                      // "count" or "dpll"
};

enum class Verifier { Auto, ModelCount, Dpll };

struct SigningSearchOptions {
  std::uint64_t base_seed = 1;
  std::uint64_t max_trials = 64;
  Verifier verifier = Verifier::Auto;
  int model_count_cap = kDefaultModelCountCap;
  std::uint64_t dpll_decision_budget = 10'000'000;
};

struct SigningSearchResult {
  CnfFormula formula;
  SigningTrial trial;
  std::vector<SigningTrial> transcript; // every trial up to and including the hit
};

class SigningExhausted : public Error {
public:
  explicit SigningExhausted(std::vector<SigningTrial> trials);
  const std::vector<SigningTrial> &trials() const { return trials_; }

private:
  std::vector<SigningTrial> trials_;
};

// Samples random_signing(h, base_seed + i) for i = 0, 1, ... and returns the
// first signing proven unsatisfiable (exhaustive count when the universe fits
// the cap, DPLL refutation otherwise). Throws SigningExhausted after
// max_trials.
SigningSearchResult search_unsat_signing(const Hypergraph &h,
                                         const SigningSearchOptions &options = {});

} // namespace lincnf
