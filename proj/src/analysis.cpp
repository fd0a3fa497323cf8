#include "lincnf/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <mpfr.h>

#include "lincnf/constructions.hpp"
#include "lincnf/error.hpp"
#include "lincnf/galois.hpp"
#include "lincnf/rng.hpp"

namespace lincnf {

namespace {

void require_weakly_linear(const CnfFormula &f) {
  if (auto v = first_linearity_violation(f, 1, LinearityMode::Weak))
    throw InvalidArgument("formula is not weakly linear: clauses " +
                          std::to_string(v->first) + " and " +
                          std::to_string(v->second) + " share two literals");
}

Assignment single(int var, bool value) {
  Assignment a;
  a.assign(var, value);
  return a;
}

int resolve_width(const CnfFormula &f, int k) {
  if (k > 0)
    return k;
  if (f.declared_width())
    return *f.declared_width();
  std::size_t w = 0;
  for (const Clause &c : f)
    w = std::max(w, c.width());
  return static_cast<int>(w);
}

} // namespace

BigInt weight(const CnfFormula &f, int k) {
  BigInt w = 0;
  for (const Clause &c : f) {
    const auto width = static_cast<int>(c.width());
    if (width > k)
      throw InvalidArgument("clause wider than k = " + std::to_string(k));
    if (width <= k - 2)
      w += pow2(static_cast<std::uint64_t>(k - width));
  }
  return w;
}

WalkStep walk_step_check(const CnfFormula &f, int k, int y) {
  require_weakly_linear(f);
  const auto vars = f.vbl();
  if (!std::binary_search(vars.begin(), vars.end(), y))
    throw InvalidArgument("variable " + std::to_string(y) + " does not occur in F");
  WalkStep out;
  out.lhs = Rational(weight(restrict(f, single(y, false)), k) +
                     weight(restrict(f, single(y, true)), k)) /
            2;
  out.rhs = weight(f, k) + 2 * BigInt(near_full_degree(f, y, k));
  out.pass = out.lhs <= Rational(out.rhs);
  return out;
}

long near_full_growth(const CnfFormula &f, int k, int y, bool value) {
  const CnfFormula g = restrict(f, single(y, value));
  const DegreeStats before = degree_stats(f, k);
  const DegreeStats after = degree_stats(g, k);
  long growth = std::numeric_limits<long>::min();
  for (int x : f.vbl()) {
    if (x == y)
      continue;
    growth = std::max(growth, static_cast<long>(after.d_km1(x)) -
                                  static_cast<long>(before.d_km1(x)));
  }
  return growth == std::numeric_limits<long>::min() ? 0 : growth;
}

// --- walk experiment ----------------------------------------------------------------

namespace {

int pick_variable(const CnfFormula &g, BranchPolicy policy, SplitMix64 &rng) {
  const auto vars = g.vbl();
  switch (policy) {
  case BranchPolicy::Fixed:
    return vars.front();
  case BranchPolicy::Random:
    return vars[rng.below(vars.size())];
  case BranchPolicy::MaxDegree: {
    const DegreeStats s = degree_stats(g);
    int best = vars.front();
    for (int x : vars)
      if (s.degree(x) > s.degree(best))
        best = x;
    return best;
  }
  }
  return vars.front();
}

} // namespace

WalkStatistics random_walk_experiment(const CnfFormula &f, const WalkOptions &options) {
  require_weakly_linear(f);
  if (options.length < 0)
    throw InvalidArgument("walk length must be non-negative");
  if (options.trials == 0)
    throw InvalidArgument("need at least one trial");
  const int k = resolve_width(f, options.k);
  const int ell = options.length;

  // d_{k-1} at the start; zero everywhere for a k-uniform F.
  const DegreeStats start = degree_stats(f, k);
  std::size_t start_max = 0;
  for (int x : f.vbl())
    start_max = std::max(start_max, start.d_km1(x));
  const BigInt w0 = weight(f, k);

  std::vector<long double> sum(ell + 1, 0), sum_sq(ell + 1, 0);
  std::vector<std::uint64_t> empties(ell + 1, 0);
  WalkStatistics stats;
  stats.steps.resize(ell + 1);

  for (std::uint64_t t = 0; t < options.trials; ++t) {
    SplitMix64 rng(options.seed + t);
    CnfFormula g = f;
    bool stopped = false;
    for (int i = 0; i <= ell; ++i) {
      WalkStepStats &s = stats.steps[i];
      const BigInt w = weight(g, k);
      const auto wd = w.convert_to<long double>();
      sum[i] += wd;
      sum_sq[i] += wd * wd;
      if (w > s.max_weight)
        s.max_weight = w;
      const bool empty = g.has_empty_clause();
      if (empty)
        ++empties[i];

      const DegreeStats ds = degree_stats(g, k);
      for (int x : g.vbl()) {
        const std::size_t d = ds.d_km1(x);
        s.max_near_full = std::max(s.max_near_full, d);
        if (d > start.d_km1(x) + 2 * static_cast<std::size_t>(i))
          ++stats.degree_violations;
      }

      if (i == ell)
        break;
      if (!stopped && (empty || g.vbl().empty()))
        stopped = true;
      if (stopped)
        continue;
      const int y = pick_variable(g, options.policy, rng);
      if (!walk_step_check(g, k, y).pass)
        ++stats.step_check_failures;
      g = restrict(g, single(y, rng.coin()));
    }
  }

  const auto n = static_cast<long double>(options.trials);
  stats.consistent = stats.degree_violations == 0 && stats.step_check_failures == 0;
  for (int i = 0; i <= ell; ++i) {
    WalkStepStats &s = stats.steps[i];
    s.step = i;
    const long double mean = sum[i] / n;
    long double var = 0;
    if (options.trials > 1)
      var = std::max<long double>(0, (sum_sq[i] - n * mean * mean) / (n - 1));
    s.mean_weight = static_cast<double>(mean);
    s.stddev_weight = static_cast<double>(std::sqrt(var));
    s.empty_fraction = static_cast<double>(empties[i] / n);
    // E[w_i] <= w_0 + sum_{j<i} 2 (D_0 + 2j) = w_0 + 2 D_0 i + 4 C(i,2).
    s.expectation_bound = w0 + 2 * BigInt(start_max) * i +
                          4 * binomial(static_cast<std::uint64_t>(i), 2);
    const long double tol = 3 * std::sqrt(var) / std::sqrt(n);
    s.within_bound = mean <= s.expectation_bound.convert_to<long double>() + tol;
    stats.consistent = stats.consistent && s.within_bound;
  }
  stats.empty_fraction = stats.steps.back().empty_fraction;
  return stats;
}

// --- frequent literals ---------------------------------------------------------------

CnfFormula strip_max_degree(const CnfFormula &f, int b) {
  if (b < 0)
    throw InvalidArgument("b must be non-negative");
  const DegreeStats s = degree_stats(f);
  std::vector<Clause> out;
  out.reserve(f.size());
  for (const Clause &c : f) {
    if (c.width() <= static_cast<std::size_t>(b))
      throw InvalidArgument("clause of width " + std::to_string(c.width()) +
                            " cannot lose " + std::to_string(b) + " literals");
    std::vector<Literal> lits(c.begin(), c.end());
    std::stable_sort(lits.begin(), lits.end(), [&](Literal u, Literal v) {
      return s.occ(u) > s.occ(v);
    });
    lits.erase(lits.begin(), lits.begin() + b);
    out.emplace_back(std::move(lits));
  }
  std::optional<int> width;
  if (f.declared_width())
    width = *f.declared_width() - b;
  return CnfFormula::over(std::move(out), f.universe(), width);
}

std::size_t frequent_literal_count(const CnfFormula &f, std::size_t tau) {
  const DegreeStats s = degree_stats(f);
  return static_cast<std::size_t>(
      std::count_if(s.occurrences.begin(), s.occurrences.end(),
                    [&](const auto &entry) { return entry.second >= tau + 1; }));
}

// --- richness -------------------------------------------------------------------------

RichBoundCheck rich_bound_check(const Hypergraph &h, std::size_t d) {
  if (auto v = first_intersection_violation(h, 1))
    throw InvalidArgument("hypergraph is not linear: edges " + std::to_string(v->first) +
                          " and " + std::to_string(v->second) +
                          " share two vertices");
  RichBoundCheck out;
  out.is_rich = is_rich(h, d, d);
  out.edge_count = h.edge_count();
  out.bound = binomial(d + 1, 2);
  out.pass = !out.is_rich || BigInt(out.edge_count) >= out.bound;
  return out;
}

// --- graphs ----------------------------------------------------------------------------

Graph::Graph(std::vector<Literal> labels, std::vector<std::pair<int, int>> edges)
    : labels_(std::move(labels)) {
  const int n = vertex_count();
  for (auto &[u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw InvalidArgument("edge endpoint out of range");
    if (u == v)
      throw InvalidArgument("graph has a loop at vertex " + std::to_string(u));
    if (u > v)
      std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

Graph Graph::unlabelled(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 0)
    throw InvalidArgument("vertex count must be non-negative");
  std::vector<Literal> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i)
    labels.push_back(Literal::positive(i + 1));
  return Graph(std::move(labels), std::move(edges));
}

bool Graph::adjacent(int u, int v) const {
  if (u > v)
    std::swap(u, v);
  return std::binary_search(edges_.begin(), edges_.end(), std::pair{u, v});
}

std::vector<std::uint64_t> Graph::adjacency_masks() const {
  if (vertex_count() > 64)
    throw CapExceeded("adjacency masks need at most 64 vertices");
  std::vector<std::uint64_t> adj(vertex_count(), 0);
  for (auto [u, v] : edges_) {
    adj[u] |= std::uint64_t{1} << v;
    adj[v] |= std::uint64_t{1} << u;
  }
  return adj;
}

// --- conflict graphs ------------------------------------------------------------------------

namespace {

// Leaves of a's subtree, after checking that T refutes F and a is reachable.
std::vector<NodeId> subtree_leaves(const ResolutionTree &t, const CnfFormula &f, NodeId a) {
  const TreeReport report = check_tree(t, f);
  if (!report.valid)
    throw InvalidArgument("tree is not a valid refutation of the formula" +
                          (report.problems.empty() ? std::string()
                                                   : ": " + report.problems.front()));

  auto collect = [&](NodeId from, bool leaves_only) {
    std::vector<NodeId> out, stack{from};
    while (!stack.empty()) {
      const NodeId id = stack.back();
      stack.pop_back();
      const TreeNode &n = t.node(id);
      if (!leaves_only || n.is_leaf())
        out.push_back(id);
      if (n.children)
        for (NodeId c : *n.children)
          stack.push_back(c);
    }
    return out;
  };
  const auto reachable = collect(t.root(), false);
  if (std::find(reachable.begin(), reachable.end(), a) == reachable.end())
    throw InvalidArgument("node " + std::to_string(a) + " is not reachable from the root");
  auto leaves = collect(a, true);
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

std::map<std::pair<int, int>, std::size_t> edge_support(const ResolutionTree &t,
                                                        const CnfFormula &f, NodeId a) {
  if (a >= t.size())
    throw InvalidArgument("unknown node id " + std::to_string(a));
  const Clause &ca = t.node(a).label;
  const auto &lits = ca.literals();
  std::map<std::pair<int, int>, std::size_t> support;
  for (NodeId leaf : subtree_leaves(t, f, a)) {
    std::vector<int> pos;
    for (Literal u : t.node(leaf).label) {
      auto it = std::lower_bound(lits.begin(), lits.end(), u);
      if (it != lits.end() && *it == u)
        pos.push_back(static_cast<int>(it - lits.begin()));
    }
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (std::size_t j = i + 1; j < pos.size(); ++j)
        ++support[{pos[i], pos[j]}];
  }
  return support;
}

} // namespace

Graph conflict_graph(const ResolutionTree &t, const CnfFormula &f, NodeId a) {
  std::vector<std::pair<int, int>> edges;
  for (const auto &[e, count] : edge_support(t, f, a))
    edges.push_back(e);
  const Clause &ca = t.node(a).label;
  return Graph(std::vector<Literal>(ca.begin(), ca.end()), std::move(edges));
}

std::map<std::pair<int, int>, std::size_t>
conflict_edge_support(const ResolutionTree &t, const CnfFormula &f, NodeId a) {
  return edge_support(t, f, a);
}

// --- kappa --------------------------------------------------------------------------------

namespace {

bool has_clique(std::uint64_t cand, int need, const std::vector<std::uint64_t> &adj) {
  if (need <= 0)
    return true;
  while (cand) {
    if (std::popcount(cand) < need)
      return false;
    const int v = std::countr_zero(cand);
    cand &= cand - 1;
    if (has_clique(cand & adj[v], need - 1, adj))
      return true;
  }
  return false;
}

} // namespace

std::size_t kappa(const Graph &g, int i, int cap) {
  if (i < 1)
    throw InvalidArgument("kappa_i needs i >= 1");
  const int n = g.vertex_count();
  if (n > cap || n > 63)
    throw CapExceeded("kappa brute force capped at " + std::to_string(std::min(cap, 63)) +
                      " vertices, graph has " + std::to_string(n));
  const auto adj = g.adjacency_masks();
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  for (int s = 0; s <= n; ++s) {
    // Gosper's hack over all s-subsets of n bits.
    std::uint64_t u = (std::uint64_t{1} << s) - 1;
    while (u <= all) {
      if (!has_clique(all & ~u, i, adj))
        return static_cast<std::size_t>(s);
      if (u == 0)
        break;
      const std::uint64_t c = u & (~u + 1);
      const std::uint64_t r = u + c;
      u = (((r ^ u) >> 2) / c) | r;
    }
  }
  return static_cast<std::size_t>(n);
}

std::vector<std::size_t> kappa_profile(const Graph &g, int k, int cap) {
  std::vector<std::size_t> out;
  for (int i = 1; i <= k; ++i)
    out.push_back(kappa(g, i, cap));
  return out;
}

LipschitzCheck kappa_lipschitz_check(const ResolutionTree &t, const CnfFormula &f,
                                     NodeId a, NodeId b, int cap) {
  if (a >= t.size() || b >= t.size())
    throw InvalidArgument("unknown node id");
  const auto parent = t.parents();
  LipschitzCheck out;
  NodeId cur = b;
  while (cur != a) {
    if (cur == t.root())
      throw InvalidArgument("node " + std::to_string(a) + " is not an ancestor of node " +
                            std::to_string(b));
    cur = parent[cur];
    ++out.distance;
  }
  int k = 0;
  for (const Clause &c : f)
    k = std::max(k, static_cast<int>(c.width()));
  out.kappa_ancestor = kappa_profile(conflict_graph(t, f, a), k, cap);
  out.kappa_descendant = kappa_profile(conflict_graph(t, f, b), k, cap);
  out.pass = true;
  for (int i = 0; i < k; ++i)
    if (out.kappa_descendant[i] > out.kappa_ancestor[i] + out.distance)
      out.pass = false;
  return out;
}

// --- theta / nu ------------------------------------------------------------------------------

ThetaNu theta_nu(int k, int ell, std::uint64_t bit_budget) {
  if (ell < 1 || ell > k)
    throw InvalidArgument("need 1 <= ell <= k");
  ThetaNu out;
  out.k = k;
  out.ell = ell;

  BigInt theta = BigInt((k - ell + 1) / 2) - 1;
  // nu_i theta_i is an integer at every level: (E_{i+1} - 1) * floor(theta_i / theta_{i+1}).
  BigInt e = theta;
  for (int i = ell;; --i) {
    if (theta <= 0) {
      out.feasible = false;
      out.stopped_at = i;
      out.note = "theta_" + std::to_string(i) + " = " + theta.str() + " <= 0";
      return out;
    }
    out.theta.push_back(theta);
    out.nu.push_back(Rational(e, theta));
    if (i == 1)
      break;
    // theta_{i-1} = floor(2^(E_i - 2) / theta_i) - 1
    BigInt next;
    if (e < 2) {
      next = -1; // 2^(E-2) < 1 <= theta_i
    } else {
      if (e - 2 > bit_budget) {
        out.capped = true;
        out.stopped_at = i - 1;
        out.note = "2^(nu_" + std::to_string(i) + " theta_" + std::to_string(i) +
                   " - 2) exceeds the bit budget";
        return out;
      }
      next = pow2((e - 2).convert_to<std::uint64_t>()) / theta - 1;
    }
    BigInt next_e = next > 0 ? (e - 1) * (next / theta) : BigInt(0);
    theta = next;
    e = next_e;
  }
  if (e > bit_budget) {
    out.capped = true;
    out.note = "2^(nu_1 theta_1) exceeds the bit budget";
  } else {
    out.clause_bound = pow2(e.convert_to<std::uint64_t>());
  }
  return out;
}

// --- tower -----------------------------------------------------------------------------------

std::optional<BigInt> tower(const Rational &a, int n, std::uint64_t bit_budget) {
  if (a <= 1)
    throw InvalidArgument("tower base must exceed 1");
  if (n < 0)
    throw InvalidArgument("tower height must be non-negative");
  const double log2a = std::log2(a.convert_to<double>());

  if (denominator(a) == 1) {
    const BigInt base = numerator(a);
    BigInt value = 1;
    for (int i = 0; i < n; ++i) {
      if (static_cast<double>(value.convert_to<long double>()) * log2a >
          static_cast<double>(bit_budget))
        return std::nullopt;
      value = boost::multiprecision::pow(base, value.convert_to<unsigned>());
    }
    return value;
  }

  // Non-integral base: a^x is increasing in x, so a lower chain rounded down
  // and an upper chain rounded up bracket every level.
  for (mpfr_prec_t prec = 128;; prec *= 2) {
    mpfr_t base_lo, base_hi, lo, hi;
    mpfr_inits2(prec, base_lo, base_hi, lo, hi, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_q(base_lo, a.backend().data(), MPFR_RNDD);
    mpfr_set_q(base_hi, a.backend().data(), MPFR_RNDU);
    mpfr_set_ui(lo, 1, MPFR_RNDN);
    mpfr_set_ui(hi, 1, MPFR_RNDN);
    bool over = false;
    for (int i = 0; i < n && !over; ++i) {
      if (mpfr_get_d(hi, MPFR_RNDU) * log2a > static_cast<double>(bit_budget))
        over = true;
      else {
        mpfr_pow(lo, base_lo, lo, MPFR_RNDD);
        mpfr_pow(hi, base_hi, hi, MPFR_RNDU);
      }
    }
    std::optional<BigInt> result;
    bool done = over;
    if (!over) {
      mpfr_floor(lo, lo);
      mpfr_floor(hi, hi);
      if (mpfr_equal_p(lo, hi)) {
        BigInt v;
        mpfr_get_z(v.backend().data(), lo, MPFR_RNDN);
        result = v;
        done = true;
      }
    }
    mpfr_clears(base_lo, base_hi, lo, hi, static_cast<mpfr_ptr>(nullptr));
    if (done)
      return result;
    if (static_cast<std::uint64_t>(prec) > 4 * bit_budget + 1024)
      throw Error("tower: could not separate the floor at " + std::to_string(prec) +
                  " bits of precision");
  }
}

// --- bounds ---------------------------------------------------------------------------------

BoundsReport size_bounds(int k, int b) {
  if (k < 2)
    throw InvalidArgument("size bounds need k >= 2");
  if (b < 1)
    throw InvalidArgument("size bounds need b >= 1");
  BoundsReport r;
  r.k = k;
  r.b = b;
  const RationalBracket e = euler_bracket();
  const RationalBracket e2 = e * e;
  const auto uk = static_cast<std::uint64_t>(k);
  const auto ub = static_cast<std::uint64_t>(b);

  if (b == 1) {
    const BigInt km1 = k - 1;
    r.lower_clause_bound = exact(Rational(pow2(2 * uk))) / (exact(Rational(8 * km1 * km1)) * e2);
    r.upper_clause_bound = 4 * BigInt(k) * k * pow2(2 * uk);
  } else {
    const RationalBracket num = pow_bracket(2, Rational(k * (b + 1), b));
    const RationalBracket den = exact(Rational(pow2(ub + 2))) * e2 *
                                pow_bracket(Rational(k), Rational(2 * b + 1, b));
    r.lower_clause_bound = num / den;
    const RationalBracket upper = exact(Rational(pow2(ub + 1))) *
                                  pow_bracket(Rational(BigInt(k) * pow2(uk)),
                                              Rational(b + 1, b));
    // floor(hi) is still a valid clause ceiling if the bracket straddles an integer.
    r.upper_clause_bound = floor_rational(upper.hi);
  }

  if (k <= 56 && (b == 1 || b <= k - 2)) {
    const std::uint64_t q = choose_q(k, b);
    r.construction_q = q;
    r.construction_clauses = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(b + 1));
  }

  try {
    r.treelike_bound = treelike_lower_bound(k);
  } catch (const CapExceeded &) {
  }

  r.focc_lower = exact(Rational(pow2(uk))) / (e * exact(Rational(k))) + Rational(-1);

  r.f_table.push_back({"tovey_lower", "f(k) >= k", "Tovey 1984", false, exact(Rational(k))});
  r.f_table.push_back({"kst_lower", "f(k) >= 2^k/(e k)", "Kratochvil, Savicky, Tuza 1993",
                       false, exact(Rational(pow2(uk))) / (e * exact(Rational(k)))});
  r.f_table.push_back({"gebauer_upper", "f(k) <= 2^(k+2)/k", "Gebauer 2009", true,
                       exact(Rational(pow2(uk + 2), k))});
  if (k == 2)
    r.known_f = 2;
  return r;
}

} // namespace lincnf
