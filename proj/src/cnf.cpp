#include "lincnf/cnf.hpp"

#include <algorithm>
#include <string>

#include "lincnf/error.hpp"

namespace lincnf {

Literal Literal::from_dimacs(int code) {
  if (code == 0)
    throw InvalidArgument("literal code 0 is not a literal");
  return Literal(code);
}

Literal Literal::positive(int var) {
  if (var < 1)
    throw InvalidArgument("variable ids start at 1");
  return Literal(var);
}

Literal Literal::negative(int var) {
  if (var < 1)
    throw InvalidArgument("variable ids start at 1");
  return Literal(-var);
}

Clause::Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {
  std::sort(literals_.begin(), literals_.end());
  for (std::size_t i = 1; i < literals_.size(); ++i) {
    if (literals_[i] == literals_[i - 1])
      throw InvalidArgument("duplicate literal " +
                            std::to_string(literals_[i].dimacs()) + " in clause");
    if (literals_[i].var() == literals_[i - 1].var())
      throw InvalidArgument("complementary literals on variable " +
                            std::to_string(literals_[i].var()) + " in clause");
  }
}

Clause::Clause(std::initializer_list<int> dimacs)
    : Clause(from_dimacs(std::span<const int>(dimacs.begin(), dimacs.size()))) {}

Clause Clause::from_dimacs(std::span<const int> codes) {
  std::vector<Literal> lits;
  lits.reserve(codes.size());
  for (int c : codes)
    lits.push_back(Literal::from_dimacs(c));
  return Clause(std::move(lits));
}

bool Clause::contains(Literal u) const {
  return std::binary_search(literals_.begin(), literals_.end(), u);
}

std::optional<Literal> Clause::literal_of(int var) const {
  if (var < 1)
    return std::nullopt;
  if (contains(Literal::negative(var)))
    return Literal::negative(var);
  if (contains(Literal::positive(var)))
    return Literal::positive(var);
  return std::nullopt;
}

std::vector<int> vbl(const Clause &c) {
  std::vector<int> out;
  out.reserve(c.width());
  for (Literal u : c)
    out.push_back(u.var());
  return out;
}

Assignment::Assignment(std::initializer_list<std::pair<const int, bool>> init) {
  for (const auto &[var, value] : init)
    assign(var, value);
}

void Assignment::assign(int var, bool value) {
  if (var < 1)
    throw InvalidArgument("variable ids start at 1");
  if (!values_.emplace(var, value).second)
    throw InvalidArgument("variable " + std::to_string(var) + " assigned twice");
}

std::optional<bool> Assignment::value(int var) const {
  auto it = values_.find(var);
  if (it == values_.end())
    return std::nullopt;
  return it->second;
}

std::optional<bool> Assignment::value(Literal u) const {
  auto v = value(u.var());
  if (!v)
    return std::nullopt;
  return *v == u.is_positive();
}

// --- CnfFormula -------------------------------------------------------------

CnfFormula::CnfFormula(std::vector<Clause> clauses, std::optional<int> declared_width)
    : clauses_(std::move(clauses)), declared_width_(declared_width) {
  canonicalize();
  int max_var = 0;
  for (const Clause &c : clauses_)
    for (Literal u : c)
      max_var = std::max(max_var, u.var());
  universe_.resize(max_var);
  for (int v = 1; v <= max_var; ++v)
    universe_[v - 1] = v;
}

CnfFormula CnfFormula::with_variable_count(std::vector<Clause> clauses,
                                           int variable_count,
                                           std::optional<int> declared_width) {
  if (variable_count < 0)
    throw InvalidArgument("negative variable count");
  std::vector<int> universe(variable_count);
  for (int v = 1; v <= variable_count; ++v)
    universe[v - 1] = v;
  return over(std::move(clauses), std::move(universe), declared_width);
}

CnfFormula CnfFormula::over(std::vector<Clause> clauses, std::vector<int> universe,
                            std::optional<int> declared_width) {
  CnfFormula f;
  f.clauses_ = std::move(clauses);
  f.declared_width_ = declared_width;
  f.canonicalize();
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  if (!universe.empty() && universe.front() < 1)
    throw InvalidArgument("variable ids start at 1");
  for (const Clause &c : f.clauses_)
    for (Literal u : c)
      if (!std::binary_search(universe.begin(), universe.end(), u.var()))
        throw InvalidArgument("variable " + std::to_string(u.var()) +
                              " outside the declared universe");
  f.universe_ = std::move(universe);
  return f;
}

void CnfFormula::canonicalize() {
  std::sort(clauses_.begin(), clauses_.end());
  clauses_.erase(std::unique(clauses_.begin(), clauses_.end()), clauses_.end());
  if (declared_width_) {
    if (*declared_width_ < 0)
      throw InvalidArgument("negative declared width");
    for (const Clause &c : clauses_)
      if (c.width() != static_cast<std::size_t>(*declared_width_))
        throw InvalidArgument("clause of width " + std::to_string(c.width()) +
                              " in formula declared " +
                              std::to_string(*declared_width_) + "-uniform");
  }
}

bool CnfFormula::dense_universe() const {
  return universe_.empty() ||
         universe_.back() == static_cast<int>(universe_.size());
}

std::vector<int> CnfFormula::vbl() const {
  std::vector<int> out;
  for (const Clause &c : clauses_)
    for (Literal u : c)
      out.push_back(u.var());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool CnfFormula::contains(const Clause &c) const {
  return std::binary_search(clauses_.begin(), clauses_.end(), c);
}

bool CnfFormula::has_empty_clause() const {
  return !clauses_.empty() && clauses_.front().empty();
}

std::optional<std::size_t> CnfFormula::uniform_width() const {
  if (clauses_.empty())
    return std::nullopt;
  std::size_t w = clauses_.front().width();
  for (const Clause &c : clauses_)
    if (c.width() != w)
      return std::nullopt;
  return w;
}

// --- linearity ----------------------------------------------------------------

std::optional<std::pair<std::size_t, std::size_t>>
first_overlap_violation(const std::vector<std::vector<int>> &sets, int b) {
  if (b < 0)
    throw InvalidArgument("overlap bound must be non-negative");
  int max_elem = -1;
  for (const auto &s : sets)
    for (int e : s)
      max_elem = std::max(max_elem, e);
  std::vector<std::vector<std::size_t>> index(max_elem + 1);
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (int e : sets[i])
      index[e].push_back(i);

  std::vector<int> shared(sets.size(), 0);
  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    touched.clear();
    for (int e : sets[i]) {
      const auto &holders = index[e];
      auto it = std::upper_bound(holders.begin(), holders.end(), i);
      for (; it != holders.end(); ++it) {
        if (shared[*it]++ == 0)
          touched.push_back(*it);
      }
    }
    std::optional<std::size_t> worst;
    for (std::size_t j : touched) {
      if (shared[j] > b && (!worst || j < *worst))
        worst = j;
      shared[j] = 0;
    }
    if (worst)
      return std::pair{i, *worst};
  }
  return std::nullopt;
}

namespace {

std::vector<std::vector<int>> clause_keys(const CnfFormula &f, LinearityMode mode) {
  std::vector<std::vector<int>> sets;
  sets.reserve(f.size());
  for (const Clause &c : f) {
    std::vector<int> s;
    s.reserve(c.width());
    for (Literal u : c)
      s.push_back(mode == LinearityMode::Strict ? u.var()
                                                : static_cast<int>(u.key()));
    sets.push_back(std::move(s));
  }
  return sets;
}

} // namespace

std::optional<std::pair<std::size_t, std::size_t>>
first_linearity_violation(const CnfFormula &f, int b, LinearityMode mode) {
  if (b < 1)
    throw InvalidArgument("linearity level b must be at least 1");
  return first_overlap_violation(clause_keys(f, mode), b);
}

bool linearity_level(const CnfFormula &f, int b, LinearityMode mode) {
  return !first_linearity_violation(f, b, mode).has_value();
}

// --- restriction, evaluation, counting --------------------------------------

CnfFormula restrict(const CnfFormula &f, const Assignment &alpha) {
  std::vector<Clause> out;
  out.reserve(f.size());
  for (const Clause &c : f) {
    bool satisfied = false;
    std::vector<Literal> rest;
    for (Literal u : c) {
      auto v = alpha.value(u);
      if (!v) {
        rest.push_back(u);
      } else if (*v) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied)
      out.emplace_back(std::move(rest));
  }
  std::vector<int> universe;
  for (int v : f.universe())
    if (!alpha.contains(v))
      universe.push_back(v);
  return CnfFormula::over(std::move(out), std::move(universe));
}

bool evaluate(const CnfFormula &f, const Assignment &alpha) {
  bool all = true;
  for (const Clause &c : f) {
    bool sat = false;
    for (Literal u : c) {
      auto v = alpha.value(u);
      if (!v)
        throw InvalidArgument("variable " + std::to_string(u.var()) +
                              " is unassigned");
      sat = sat || *v;
    }
    all = all && sat;
  }
  return all;
}

namespace {

struct MaskedClause {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

std::vector<MaskedClause> mask_clauses(const CnfFormula &f, int cap) {
  const auto &universe = f.universe();
  if (cap > 62)
    cap = 62;
  if (static_cast<int>(universe.size()) > cap)
    throw CapExceeded("model counting over " + std::to_string(universe.size()) +
                      " variables exceeds the cap of " + std::to_string(cap));
  std::vector<MaskedClause> out;
  out.reserve(f.size());
  for (const Clause &c : f) {
    MaskedClause m;
    for (Literal u : c) {
      auto pos = std::lower_bound(universe.begin(), universe.end(), u.var()) -
                 universe.begin();
      (u.is_positive() ? m.pos : m.neg) |= std::uint64_t{1} << pos;
    }
    out.push_back(m);
  }
  // Short clauses first: they reject assignments soonest.
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return __builtin_popcountll(a.pos | a.neg) < __builtin_popcountll(b.pos | b.neg);
  });
  return out;
}

bool satisfies(const std::vector<MaskedClause> &clauses, std::uint64_t a) {
  for (const auto &m : clauses)
    if (((a & m.pos) | (~a & m.neg)) == 0)
      return false;
  return true;
}

} // namespace

std::uint64_t count_models(const CnfFormula &f, int cap) {
  auto clauses = mask_clauses(f, cap);
  const std::uint64_t total = std::uint64_t{1} << f.universe().size();
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < total; ++a)
    count += satisfies(clauses, a) ? 1 : 0;
  return count;
}

std::optional<Assignment> find_model(const CnfFormula &f, int cap) {
  auto clauses = mask_clauses(f, cap);
  const auto &universe = f.universe();
  const std::uint64_t total = std::uint64_t{1} << universe.size();
  for (std::uint64_t a = 0; a < total; ++a) {
    if (!satisfies(clauses, a))
      continue;
    Assignment alpha;
    for (std::size_t i = 0; i < universe.size(); ++i)
      alpha.assign(universe[i], ((a >> i) & 1) != 0);
    return alpha;
  }
  return std::nullopt;
}

// --- degrees -------------------------------------------------------------------

std::size_t DegreeStats::degree(int var) const {
  auto it = variable_degree.find(var);
  return it == variable_degree.end() ? 0 : it->second;
}

std::size_t DegreeStats::occ(Literal u) const {
  auto it = occurrences.find(u);
  return it == occurrences.end() ? 0 : it->second;
}

std::size_t DegreeStats::d_km1(int var) const {
  auto it = near_full_degree.find(var);
  return it == near_full_degree.end() ? 0 : it->second;
}

DegreeStats degree_stats(const CnfFormula &f, std::optional<int> k) {
  DegreeStats s;
  if (!k)
    k = f.declared_width();
  if (!k) {
    std::size_t w = 0;
    for (const Clause &c : f)
      w = std::max(w, c.width());
    k = static_cast<int>(w);
  }
  s.width = k;
  for (const Clause &c : f) {
    const bool near_full = static_cast<int>(c.width()) == *k - 1;
    for (Literal u : c) {
      ++s.variable_degree[u.var()];
      ++s.occurrences[u];
      auto &d = s.near_full_degree[u.var()];
      if (near_full)
        ++d;
    }
  }
  for (const auto &[v, d] : s.variable_degree)
    s.max_degree = std::max(s.max_degree, d);
  for (const auto &[u, o] : s.occurrences)
    s.max_occurrence = std::max(s.max_occurrence, o);
  return s;
}

std::size_t near_full_degree(const CnfFormula &f, int var, int k) {
  std::size_t d = 0;
  for (const Clause &c : f)
    if (static_cast<int>(c.width()) == k - 1 && c.literal_of(var))
      ++d;
  return d;
}

// --- hypergraphs -----------------------------------------------------------------

Hypergraph::Hypergraph(int vertex_count, int uniformity,
                       std::vector<std::vector<int>> edges)
    : vertex_count_(vertex_count), uniformity_(uniformity), edges_(std::move(edges)) {
  if (vertex_count < 0 || uniformity < 0)
    throw InvalidArgument("hypergraph sizes must be non-negative");
  for (auto &e : edges_) {
    std::sort(e.begin(), e.end());
    if (static_cast<int>(e.size()) != uniformity)
      throw InvalidArgument("edge of cardinality " + std::to_string(e.size()) +
                            " in " + std::to_string(uniformity) +
                            "-uniform hypergraph");
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      throw InvalidArgument("edge repeats a vertex");
    if (!e.empty() && (e.front() < 0 || e.back() >= vertex_count))
      throw InvalidArgument("edge vertex outside [0, n)");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

std::vector<std::size_t> Hypergraph::degrees() const {
  std::vector<std::size_t> d(vertex_count_, 0);
  for (const auto &e : edges_)
    for (int v : e)
      ++d[v];
  return d;
}

std::optional<std::pair<std::size_t, std::size_t>>
first_intersection_violation(const Hypergraph &h, int b) {
  return first_overlap_violation(h.edges(), b);
}

bool is_b_linear(const Hypergraph &h, int b) {
  return !first_intersection_violation(h, b).has_value();
}

bool within_pair_bound(const Hypergraph &h) {
  const std::uint64_t n = h.vertex_count();
  const std::uint64_t k = h.uniformity();
  if (k < 2)
    return true;
  // m * C(k,2) <= C(n,2), kept in integers.
  return static_cast<std::uint64_t>(h.edge_count()) * (k * (k - 1)) <=
         n * (n > 0 ? n - 1 : 0);
}

bool is_rich(const Hypergraph &h, std::size_t j, std::size_t d) {
  std::size_t count = 0;
  for (std::size_t deg : h.degrees())
    if (deg >= d)
      ++count;
  return count >= j;
}

LiteralHypergraph literal_hypergraph(const CnfFormula &f) {
  auto width = f.uniform_width();
  if (!f.empty() && !width)
    throw InvalidArgument("literal hypergraph needs a uniform-width formula");
  std::vector<Literal> lits;
  for (const Clause &c : f)
    for (Literal u : c)
      lits.push_back(u);
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());

  std::vector<std::vector<int>> edges;
  edges.reserve(f.size());
  for (const Clause &c : f) {
    std::vector<int> e;
    for (Literal u : c)
      e.push_back(static_cast<int>(std::lower_bound(lits.begin(), lits.end(), u) -
                                   lits.begin()));
    edges.push_back(std::move(e));
  }
  const int k = width ? static_cast<int>(*width) : f.declared_width().value_or(0);
  return {Hypergraph(static_cast<int>(lits.size()), k, std::move(edges)),
          std::move(lits)};
}

Renumbering renumber(const CnfFormula &f) {
  Renumbering r;
  r.original = f.universe();
  auto new_id = [&](int old) {
    return static_cast<int>(std::lower_bound(r.original.begin(), r.original.end(), old) -
                            r.original.begin()) + 1;
  };
  std::vector<Clause> clauses;
  clauses.reserve(f.size());
  for (const Clause &c : f) {
    std::vector<Literal> lits;
    for (Literal u : c)
      lits.push_back(u.is_positive() ? Literal::positive(new_id(u.var()))
                                     : Literal::negative(new_id(u.var())));
    clauses.emplace_back(std::move(lits));
  }
  r.formula = CnfFormula::with_variable_count(
      std::move(clauses), static_cast<int>(r.original.size()), f.declared_width());
  return r;
}

} // namespace lincnf
