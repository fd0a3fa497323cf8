#include "lincnf/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "lincnf/resolution.hpp"
#include "lincnf/rng.hpp"

namespace lincnf {

CnfFormula complete_kcnf(const std::vector<int> &variables) {
  std::vector<int> sorted = variables;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("complete formula needs pairwise distinct variables");
  const std::size_t k = variables.size();
  if (k > 24)
    throw CapExceeded("complete " + std::to_string(k) + "-CNF has too many clauses");
  std::vector<Clause> clauses;
  clauses.reserve(std::size_t{1} << k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<Literal> lits;
    lits.reserve(k);
    for (std::size_t j = 0; j < k; ++j)
      lits.push_back(((mask >> j) & 1) ? Literal::positive(variables[j])
                                       : Literal::negative(variables[j]));
    clauses.emplace_back(std::move(lits));
  }
  return CnfFormula(std::move(clauses), static_cast<int>(k));
}

CnfFormula complete_kcnf(int k) {
  if (k < 0)
    throw InvalidArgument("k must be non-negative");
  std::vector<int> vars(k);
  for (int i = 0; i < k; ++i)
    vars[i] = i + 1;
  return complete_kcnf(vars);
}

BigInt recursive_clause_count(int k, std::uint64_t max_bits) {
  if (k < 0)
    throw InvalidArgument("k must be non-negative");
  BigInt count = 1;
  for (int level = 0; level < k; ++level) {
    if (count > max_bits)
      throw CapExceeded("|F_" + std::to_string(level + 1) + "| = m * 2^m with m = " +
                        count.str() + " exceeds the bit budget");
    count <<= count.convert_to<std::uint64_t>();
  }
  return count;
}

namespace {

Clause shift_clause(const Clause &c, int offset, std::optional<Literal> extra) {
  std::vector<Literal> lits;
  lits.reserve(c.width() + 1);
  for (Literal u : c)
    lits.push_back(u.is_positive() ? Literal::positive(u.var() + offset)
                                   : Literal::negative(u.var() + offset));
  if (extra)
    lits.push_back(*extra);
  return Clause(std::move(lits));
}

} // namespace

CnfFormula recursive_unsat_linear(int k, int cap) {
  if (k < 0)
    throw InvalidArgument("k must be non-negative");
  if (k > cap) {
    // |F_k| = m * 2^m with m = |F_{k-1}|.
    std::string projected = "m * 2^m clauses with m = ";
    try {
      projected += recursive_clause_count(k - 1, 1 << 16).str();
    } catch (const CapExceeded &) {
      projected += "|F_" + std::to_string(k - 1) + "|";
    }
    throw CapExceeded("F_" + std::to_string(k) + " would have " + projected +
                      "; the feasibility cap is k <= " + std::to_string(cap));
  }

  CnfFormula f(std::vector<Clause>{Clause{}}, 0);
  int vars = 0;
  for (int level = 0; level < k; ++level) {
    const int m = static_cast<int>(f.size());
    const CnfFormula shared = complete_kcnf(m); // over 1..m, canonical order
    const std::size_t copies = shared.size();
    std::vector<Clause> next;
    next.reserve(copies * m);
    for (std::size_t i = 0; i < copies; ++i) {
      const int offset = m + static_cast<int>(i) * vars;
      const Clause &d = shared[i];
      for (int j = 0; j < m; ++j)
        next.push_back(shift_clause(f[j], offset, d.literals()[j]));
    }
    vars = m + static_cast<int>(copies) * vars;
    const std::size_t expected = next.size();
    f = CnfFormula::with_variable_count(std::move(next), vars, level + 1);
    if (f.size() != expected)
      throw Error("internal error: recursive construction produced duplicate clauses");
  }
  return f;
}

// --- Vandermonde hypergraphs ------------------------------------------------------

namespace {

VandermondeHypergraph vandermonde_hypergraph(int k, std::uint64_t q, int b) {
  if (k < 2)
    throw InvalidArgument("Vandermonde hypergraph needs k >= 2");
  FieldPtr field = field_make(q); // throws for non prime powers
  if (q < static_cast<std::uint64_t>(k))
    throw InvalidArgument("need q >= k for distinct evaluation points");
  const int free = b + 1;
  const int rows = k - free;

  std::vector<FieldElement> points;
  for (int i = 0; i < k; ++i)
    points.emplace_back(field, static_cast<std::uint32_t>(i));

  // Matrix on the solved coordinates: entry (r, c) = points[free + c]^r.
  std::vector<FieldElement> solved_points(points.begin() + free, points.end());
  const FieldMatrix system = vandermonde(solved_points);
  std::vector<std::vector<FieldElement>> powers(k);
  for (int i = 0; i < k; ++i)
    for (int r = 0; r < rows; ++r)
      powers[i].push_back(points[i].pow(r));

  std::uint64_t tuples = 1;
  for (int i = 0; i < free; ++i)
    tuples *= q;

  std::vector<std::vector<int>> edges;
  edges.reserve(tuples);
  std::vector<std::uint32_t> x(k, 0);
  for (std::uint64_t t = 0; t < tuples; ++t) {
    std::uint64_t rest = t;
    for (int i = free - 1; i >= 0; --i) {
      x[i] = static_cast<std::uint32_t>(rest % q);
      rest /= q;
    }
    if (rows > 0) {
      std::vector<FieldElement> rhs;
      rhs.reserve(rows);
      for (int r = 0; r < rows; ++r) {
        FieldElement acc = FieldElement::zero(field);
        for (int i = 0; i < free; ++i)
          acc = acc + powers[i][r] * FieldElement(field, x[i]);
        rhs.push_back(-acc);
      }
      auto sol = gaussian_solve(system, rhs);
      if (!sol)
        throw Error("internal error: Vandermonde system on distinct points is singular");
      for (int c = 0; c < rows; ++c)
        x[free + c] = (*sol)[c].code();
    }
    std::vector<int> edge(k);
    for (int i = 0; i < k; ++i)
      edge[i] = i * static_cast<int>(q) + static_cast<int>(x[i]);
    edges.push_back(std::move(edge));
  }

  VandermondeHypergraph out{
      Hypergraph(k * static_cast<int>(q), k, std::move(edges)), field, {}, b};
  for (const auto &p : points)
    out.evaluation_points.push_back(p.code());
  if (out.graph.edge_count() != tuples)
    throw Error("internal error: Vandermonde hypergraph has repeated edges");
  return out;
}

} // namespace

VandermondeHypergraph kuzjurin_hypergraph(int k, std::uint64_t q) {
  return vandermonde_hypergraph(k, q, 1);
}

VandermondeHypergraph b_linear_hypergraph(int k, std::uint64_t q, int b) {
  if (b < 1 || b > k - 2)
    throw InvalidArgument("b-linear construction needs 1 <= b <= k-2");
  return vandermonde_hypergraph(k, q, b);
}

CoverageCounts transversal_coverage(const VandermondeHypergraph &h) {
  const int k = h.graph.uniformity();
  const int n = h.graph.vertex_count();
  const int q = n / std::max(k, 1);
  const int s = h.b + 1;
  CoverageCounts out;
  if (s > k)
    return out;

  std::unordered_map<std::uint64_t, std::uint32_t> seen;
  std::vector<int> pick(s);
  for (const auto &e : h.graph.edges()) {
    // Every s-subset of the edge, via an index combination.
    for (int i = 0; i < s; ++i)
      pick[i] = i;
    for (;;) {
      std::uint64_t key = 0;
      bool same_part = false;
      for (int i = 0; i < s; ++i) {
        key = key * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(e[pick[i]]);
        if (i > 0 && e[pick[i]] / q == e[pick[i - 1]] / q)
          same_part = true;
      }
      if (same_part)
        ++out.same_part_covered;
      else
        ++seen[key];
      int i = s - 1;
      while (i >= 0 && pick[i] == k - s + i)
        --i;
      if (i < 0)
        break;
      ++pick[i];
      for (int j = i + 1; j < s; ++j)
        pick[j] = pick[j - 1] + 1;
    }
  }
  for (const auto &[key, count] : seen)
    (count == 1 ? out.exactly_once : out.multiply) += 1;
  // Transversal s-subsets: choose s parts, one vertex in each.
  std::uint64_t total = binomial(k, s).convert_to<std::uint64_t>();
  for (int i = 0; i < s; ++i)
    total *= static_cast<std::uint64_t>(q);
  out.uncovered = total - seen.size();
  return out;
}

// --- random signing -------------------------------------------------------------------

CnfFormula random_signing(const Hypergraph &h, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Clause> clauses;
  clauses.reserve(h.edge_count());
  for (const auto &e : h.edges()) {
    std::vector<Literal> lits;
    lits.reserve(e.size());
    for (int v : e)
      lits.push_back(rng.coin() ? Literal::negative(v + 1) : Literal::positive(v + 1));
    clauses.emplace_back(std::move(lits));
  }
  return CnfFormula::with_variable_count(std::move(clauses), h.vertex_count(),
                                         h.uniformity());
}

double expected_models_log2(std::uint64_t n, std::uint64_t m, int k) {
  if (k < 1)
    throw InvalidArgument("k must be at least 1");
  if (m == 0)
    return static_cast<double>(n);
  const long double per_clause = std::log1p(-std::ldexp(1.0L, -k)) / std::log(2.0L);
  return static_cast<double>(static_cast<long double>(n) +
                             static_cast<long double>(m) * per_clause);
}

std::string to_string(TrialOutcome o) {
  switch (o) {
  case TrialOutcome::UnsatVerified: return "unsat-verified";
  case TrialOutcome::Sat: return "sat";
  case TrialOutcome::Unverified: return "unverified";
  }
  return "?";
}

SigningExhausted::SigningExhausted(std::vector<SigningTrial> trials)
    : Error("no verified-unsatisfiable signing within " +
            std::to_string(trials.size()) + " trials"),
      trials_(std::move(trials)) {}

SigningSearchResult search_unsat_signing(const Hypergraph &h,
                                         const SigningSearchOptions &options) {
  std::vector<SigningTrial> transcript;
  for (std::uint64_t i = 0; i < options.max_trials; ++i) {
    SigningTrial trial;
    trial.trial_index = i;
    trial.seed = options.base_seed + i;
    CnfFormula f = random_signing(h, trial.seed);

    const bool count = options.verifier == Verifier::ModelCount ||
                       (options.verifier == Verifier::Auto &&
                        static_cast<int>(f.universe().size()) <= options.model_count_cap);
    if (count) {
      trial.verifier = "count";
      const std::uint64_t models = count_models(f, options.model_count_cap);
      trial.models_found = models;
      trial.outcome = models == 0 ? TrialOutcome::UnsatVerified : TrialOutcome::Sat;
    } else {
      trial.verifier = "dpll";
      DpllOptions dopt;
      dopt.mode = PropagationMode::Unit;
      dopt.decision_budget = options.dpll_decision_budget;
      DpllResult r = dpll_refute(f, dopt);
      trial.outcome = r.verdict == Verdict::Unsat ? TrialOutcome::UnsatVerified
                      : r.verdict == Verdict::Sat ? TrialOutcome::Sat
                                                  : TrialOutcome::Unverified;
    }
    transcript.push_back(trial);
    if (trial.outcome == TrialOutcome::UnsatVerified)
      return {std::move(f), trial, std::move(transcript)};
  }
  throw SigningExhausted(std::move(transcript));
}

} // namespace lincnf
