#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lincnf {

// A literal in DIMACS convention: +v for x_v, -v for its negation.
// Canonical order is by variable, negative literal first.
class Literal {
public:
  constexpr Literal() = default;

  static Literal from_dimacs(int code);
  static Literal positive(int var);
  static Literal negative(int var);

  constexpr int var() const { return code_ < 0 ? -code_ : code_; }
  constexpr bool is_positive() const { return code_ > 0; }
  constexpr int dimacs() const { return code_; }
  constexpr Literal complement() const { return Literal(-code_); }

  // Dense key 2*var + polarity; handy for indexing arrays by literal.
  constexpr std::size_t key() const {
    return 2 * static_cast<std::size_t>(var()) + (is_positive() ? 1 : 0);
  }

  constexpr auto operator<=>(const Literal &o) const { return key() <=> o.key(); }
  constexpr bool operator==(const Literal &o) const = default;

private:
  constexpr explicit Literal(int code) : code_(code) {}
  int code_ = 0;
};

// A set of literals without duplicates or complementary pairs, stored sorted
// in canonical literal order. Construction rejects malformed input instead of
// normalizing it.
class Clause {
public:
  Clause() = default;
  explicit Clause(std::vector<Literal> literals);
  Clause(std::initializer_list<int> dimacs);

  static Clause from_dimacs(std::span<const int> codes);

  std::size_t width() const { return literals_.size(); }
  bool empty() const { return literals_.empty(); }
  std::span<const Literal> literals() const { return literals_; }
  auto begin() const { return literals_.begin(); }
  auto end() const { return literals_.end(); }

  bool contains(Literal u) const;
  // Literal of `var` in this clause, if any.
  std::optional<Literal> literal_of(int var) const;

  auto operator<=>(const Clause &o) const = default;
  bool operator==(const Clause &o) const = default;

private:
  std::vector<Literal> literals_;
};

std::vector<int> vbl(const Clause &c);

class Assignment {
public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const int, bool>> init);

  // Throws InvalidArgument if `var` is already assigned.
  void assign(int var, bool value);
  void unassign(int var) { values_.erase(var); }

  std::optional<bool> value(int var) const;
  std::optional<bool> value(Literal u) const;
  bool contains(int var) const { return values_.count(var) != 0; }
  std::size_t size() const { return values_.size(); }
  const std::map<int, bool> &values() const { return values_; }

  bool operator==(const Assignment &) const = default;

private:
  std::map<int, bool> values_;
};

// A set of clauses over an explicit variable universe. The universe defaults
// to 1..max occurring variable and is what count_models enumerates over.
class CnfFormula {
public:
  CnfFormula() = default;
  explicit CnfFormula(std::vector<Clause> clauses,
                      std::optional<int> declared_width = std::nullopt);

  // Universe 1..variable_count; throws if some clause mentions a larger id.
  static CnfFormula with_variable_count(std::vector<Clause> clauses,
                                        int variable_count,
                                        std::optional<int> declared_width = std::nullopt);
  // Arbitrary universe (sorted on construction); must contain vbl(F).
  static CnfFormula over(std::vector<Clause> clauses, std::vector<int> universe,
                         std::optional<int> declared_width = std::nullopt);

  const std::vector<Clause> &clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  auto begin() const { return clauses_.begin(); }
  auto end() const { return clauses_.end(); }
  const Clause &operator[](std::size_t i) const { return clauses_[i]; }

  std::optional<int> declared_width() const { return declared_width_; }
  const std::vector<int> &universe() const { return universe_; }
  int max_variable() const { return universe_.empty() ? 0 : universe_.back(); }
  // True when the universe is exactly 1..max_variable().
  bool dense_universe() const;

  std::vector<int> vbl() const;
  bool contains(const Clause &c) const;
  bool has_empty_clause() const;
  // Uniform width of all clauses, if there is one (nullopt for empty F).
  std::optional<std::size_t> uniform_width() const;

  bool operator==(const CnfFormula &) const = default;

private:
  void canonicalize();
  std::vector<Clause> clauses_;
  std::optional<int> declared_width_;
  std::vector<int> universe_;
};

enum class LinearityMode { Strict, Weak };

// Strict mode: |vbl(C) ∩ vbl(D)| <= b for all distinct clause pairs.
// Weak mode: |C ∩ D| <= b on literal sets.
bool linearity_level(const CnfFormula &f, int b, LinearityMode mode);

// Lexicographically first clause index pair violating the level, if any.
std::optional<std::pair<std::size_t, std::size_t>>
first_linearity_violation(const CnfFormula &f, int b, LinearityMode mode);

CnfFormula restrict(const CnfFormula &f, const Assignment &alpha);

// Throws InvalidArgument when alpha leaves a variable of vbl(F) unassigned.
bool evaluate(const CnfFormula &f, const Assignment &alpha);

inline constexpr int kDefaultModelCountCap = 26;

// Exact number of satisfying assignments over f.universe(). Throws
// CapExceeded when the universe is larger than `cap`.
std::uint64_t count_models(const CnfFormula &f, int cap = kDefaultModelCountCap);

// A satisfying assignment over the universe, found by the same enumeration.
std::optional<Assignment> find_model(const CnfFormula &f,
                                     int cap = kDefaultModelCountCap);

struct DegreeStats {
  std::map<int, std::size_t> variable_degree;      // d_F(x)
  std::map<Literal, std::size_t> occurrences;      // occ_F(u), occurring literals
  std::map<int, std::size_t> near_full_degree;     // d_{k-1}(x, F)
  std::size_t max_degree = 0;                      // d(F)
  std::size_t max_occurrence = 0;                  // occ(F)
  std::optional<int> width;                        // the k used for d_{k-1}

  std::size_t degree(int var) const;
  std::size_t occ(Literal u) const;
  std::size_t d_km1(int var) const;
};

// `k` defaults to the declared width, then to the maximum clause width.
DegreeStats degree_stats(const CnfFormula &f, std::optional<int> k = std::nullopt);

// d_{k-1}(x, F) alone; cheaper than a full degree_stats.
std::size_t near_full_degree(const CnfFormula &f, int var, int k);

// Vertex-id sets with fixed cardinality k. Duplicate edges collapse.
class Hypergraph {
public:
  Hypergraph() = default;
  Hypergraph(int vertex_count, int uniformity, std::vector<std::vector<int>> edges);

  int vertex_count() const { return vertex_count_; }
  int uniformity() const { return uniformity_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::vector<int>> &edges() const { return edges_; }

  std::vector<std::size_t> degrees() const;

  bool operator==(const Hypergraph &) const = default;

private:
  int vertex_count_ = 0;
  int uniformity_ = 0;
  std::vector<std::vector<int>> edges_;
};

// |e ∩ f| <= b for all distinct edges.
bool is_b_linear(const Hypergraph &h, int b);
inline bool is_linear(const Hypergraph &h) { return is_b_linear(h, 1); }
std::optional<std::pair<std::size_t, std::size_t>>
first_intersection_violation(const Hypergraph &h, int b);

// edges <= C(n,2)/C(k,2), the ceiling every linear k-uniform hypergraph obeys.
bool within_pair_bound(const Hypergraph &h);

// At least j vertices of degree >= d.
bool is_rich(const Hypergraph &h, std::size_t j, std::size_t d);

struct LiteralHypergraph {
  Hypergraph graph;
  std::vector<Literal> vertex_literal; // vertex id -> literal
};

// One vertex per occurring literal (canonical order), one edge per clause.
// Throws InvalidArgument on non-uniform width.
LiteralHypergraph literal_hypergraph(const CnfFormula &f);

struct Renumbering {
  CnfFormula formula;
  std::vector<int> original; // original[new_id - 1] = old id
};

// Compacts the universe to 1..n preserving variable order.
Renumbering renumber(const CnfFormula &f);

// Generic overlap scan used by both linearity checks: first pair (i, j), i < j,
// of sorted integer sets sharing more than b elements.
std::optional<std::pair<std::size_t, std::size_t>>
first_overlap_violation(const std::vector<std::vector<int>> &sets, int b);

} // namespace lincnf
