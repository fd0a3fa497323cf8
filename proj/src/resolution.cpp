#include "lincnf/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include <mpfr.h>

namespace lincnf {

std::optional<int> unique_clash(const Clause &c, const Clause &d) {
  std::optional<int> clash;
  for (Literal u : c) {
    if (d.contains(u.complement())) {
      if (clash)
        return std::nullopt;
      clash = u.var();
    }
  }
  return clash;
}

Clause resolve(const Clause &c, const Clause &d) {
  std::optional<Literal> pivot;
  for (Literal u : c) {
    if (d.contains(u.complement())) {
      if (pivot)
        throw InvalidArgument("clauses clash on more than one literal");
      pivot = u;
    }
  }
  if (!pivot)
    throw InvalidArgument("clauses have no clashing literal");
  std::vector<Literal> lits;
  lits.reserve(c.width() + d.width());
  for (Literal u : c)
    if (u != *pivot)
      lits.push_back(u);
  for (Literal u : d)
    if (u != pivot->complement() && !c.contains(u))
      lits.push_back(u);
  return Clause(std::move(lits));
}

// --- ResolutionTree -------------------------------------------------------------

NodeId ResolutionTree::add_leaf(Clause label) {
  return add_node(TreeNode{std::move(label), std::nullopt, 0});
}

NodeId ResolutionTree::add_resolvent(NodeId a, NodeId b) {
  const Clause &ca = nodes_.at(a).label;
  const Clause &cb = nodes_.at(b).label;
  auto var = unique_clash(ca, cb);
  if (!var)
    throw InvalidArgument("children do not clash on exactly one variable");
  if (!ca.contains(Literal::positive(*var)))
    std::swap(a, b);
  Clause label = resolve(nodes_[a].label, nodes_[b].label);
  return add_node(TreeNode{std::move(label), std::array<NodeId, 2>{a, b}, *var});
}

NodeId ResolutionTree::add_node(TreeNode node) {
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

namespace {

// Post-order of the nodes reachable from the root, validating the shape.
std::vector<NodeId> post_order(const ResolutionTree &t) {
  const auto &nodes = t.nodes();
  if (nodes.empty())
    throw MalformedTree("tree has no nodes");
  if (t.root() >= nodes.size())
    throw MalformedTree("root id " + std::to_string(t.root()) + " out of range");
  std::vector<char> seen(nodes.size(), 0);
  std::vector<NodeId> order;
  // Explicit stack: (node, children pushed?)
  std::vector<std::pair<NodeId, bool>> stack{{t.root(), false}};
  seen[t.root()] = 1;
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    const TreeNode &n = nodes[id];
    if (expanded || n.is_leaf()) {
      stack.pop_back();
      order.push_back(id);
      continue;
    }
    stack.back().second = true;
    for (int side = 1; side >= 0; --side) {
      NodeId c = (*n.children)[side];
      if (c >= nodes.size())
        throw MalformedTree("node " + std::to_string(id) + " has dangling child " +
                            std::to_string(c));
      if (seen[c])
        throw MalformedTree("node " + std::to_string(c) +
                            " is reachable twice (not a tree)");
      seen[c] = 1;
      stack.emplace_back(c, false);
    }
  }
  return order;
}

} // namespace

ResolutionTree ResolutionTree::compacted() const {
  auto order = post_order(*this);
  std::vector<NodeId> remap(nodes_.size(), 0);
  ResolutionTree out;
  out.nodes_.reserve(order.size());
  for (NodeId id : order) {
    TreeNode n = nodes_[id];
    if (n.children)
      n.children = std::array<NodeId, 2>{remap[(*n.children)[0]], remap[(*n.children)[1]]};
    remap[id] = out.add_node(std::move(n));
  }
  out.root_ = remap[root_];
  return out;
}

std::vector<NodeId> ResolutionTree::parents() const {
  std::vector<NodeId> parent(nodes_.size());
  for (NodeId id : post_order(*this)) {
    const TreeNode &n = nodes_[id];
    if (n.children)
      for (NodeId c : *n.children)
        parent[c] = id;
  }
  parent[root_] = root_;
  return parent;
}

TreeReport check_tree(const ResolutionTree &tree, const CnfFormula &f) {
  auto order = post_order(tree);
  const auto &nodes = tree.nodes();
  TreeReport report;
  report.node_count = order.size();
  bool valid = true;
  auto problem = [&](std::string msg) {
    valid = false;
    if (report.problems.size() < 16)
      report.problems.push_back(std::move(msg));
  };

  if (!nodes[tree.root()].label.empty())
    problem("root label is not the empty clause");

  std::set<Clause> leaf_labels;
  bool strict = true;
  for (NodeId id : order) {
    const TreeNode &n = nodes[id];
    if (n.is_leaf()) {
      ++report.leaf_count;
      if (!f.contains(n.label)) {
        report.leaves_not_in_formula.push_back(id);
        problem("leaf " + std::to_string(id) + " is not labelled by a clause of F");
      }
      if (!leaf_labels.insert(n.label).second)
        strict = false;
      continue;
    }
    if (n.resolved_var < 1) {
      throw MalformedTree("internal node " + std::to_string(id) +
                          " has no resolved variable");
    }
    const Clause &c0 = nodes[(*n.children)[0]].label;
    const Clause &c1 = nodes[(*n.children)[1]].label;
    auto clash = unique_clash(c0, c1);
    if (!clash || *clash != n.resolved_var ||
        !c0.contains(Literal::positive(n.resolved_var))) {
      problem("node " + std::to_string(id) + " is not a resolvent on variable " +
              std::to_string(n.resolved_var) + " of its children");
      continue;
    }
    if (resolve(c0, c1) != n.label)
      problem("node " + std::to_string(id) + " label differs from the resolvent");
  }

  // Depth and regularity need root-to-leaf paths; explicit stack because
  // parsed trees can be arbitrarily deep.
  std::unordered_map<int, int> on_path;
  bool regular = true;
  struct Frame {
    NodeId id;
    std::size_t depth;
    int state; // 0: enter, 1: left done, 2: both done
  };
  std::vector<Frame> stack{{tree.root(), 0, 0}};
  while (!stack.empty()) {
    const Frame fr = stack.back();
    const TreeNode &n = nodes[fr.id];
    report.depth = std::max(report.depth, fr.depth);
    if (n.is_leaf()) {
      stack.pop_back();
      continue;
    }
    if (fr.state == 0) {
      if (on_path[n.resolved_var]++ > 0)
        regular = false;
      stack.back().state = 1;
      stack.push_back({(*n.children)[0], fr.depth + 1, 0});
    } else if (fr.state == 1) {
      stack.back().state = 2;
      stack.push_back({(*n.children)[1], fr.depth + 1, 0});
    } else {
      --on_path[n.resolved_var];
      stack.pop_back();
    }
  }

  report.valid = valid;
  report.strict = strict;
  report.regular = regular;
  return report;
}

std::string to_string(BranchPolicy p) {
  switch (p) {
  case BranchPolicy::Fixed: return "fixed";
  case BranchPolicy::MaxDegree: return "maxdeg";
  case BranchPolicy::Random: return "random";
  }
  return "?";
}

std::string to_string(PropagationMode m) {
  return m == PropagationMode::PureSplit ? "split" : "unit";
}

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Sat: return "SAT";
  case Verdict::Unsat: return "UNSAT";
  case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

// --- DPLL ------------------------------------------------------------------------

namespace {

constexpr NodeId kSat = static_cast<NodeId>(-1);
constexpr NodeId kBudget = static_cast<NodeId>(-2);

class Dpll {
public:
  Dpll(const CnfFormula &f, const DpllOptions &opt)
      : f_(f), opt_(opt), rng_(SplitMix64(opt.seed).split("dpll")) {
    const int n = f.max_variable();
    value_.assign(n + 1, -1);
    active_.assign(n + 1, 0);
    occ_.resize(2 * static_cast<std::size_t>(n) + 2);
    const std::size_t m = f.size();
    false_count_.assign(m, 0);
    sat_count_.assign(m, 0);
    for (std::size_t c = 0; c < m; ++c) {
      for (Literal u : f[c]) {
        occ_[u.key()].push_back(static_cast<std::uint32_t>(c));
        ++active_[u.var()];
      }
      refresh_unit(c);
    }
  }

  DpllResult run() {
    DpllResult result;
    NodeId root;
    if (f_.has_empty_clause()) {
      root = tree_.add_leaf(f_[0]);
      ++stats_.conflicts;
    } else {
      root = solve();
    }
    result.stats = stats_;
    if (root == kSat) {
      result.verdict = Verdict::Sat;
      result.model = model_;
      return result;
    }
    if (root == kBudget) {
      result.verdict = Verdict::Unknown;
      return result;
    }
    tree_.set_root(root);
    ResolutionTree t = tree_.compacted();
    TreeReport rep = check_tree(t, f_);
    if (!rep.valid)
      throw Error("internal error: DPLL produced an invalid resolution tree");
    result.verdict = Verdict::Unsat;
    result.stats.tree_nodes = rep.node_count;
    result.stats.tree_leaves = rep.leaf_count;
    result.tree = std::move(t);
    return result;
  }

private:
  bool lit_true(Literal u) const {
    int v = value_[u.var()];
    return v >= 0 && (v == 1) == u.is_positive();
  }

  void refresh_unit(std::size_t c) {
    const bool unit = sat_count_[c] == 0 && false_count_[c] + 1 == f_[c].width();
    if (unit)
      units_.insert(static_cast<std::uint32_t>(c));
    else
      units_.erase(static_cast<std::uint32_t>(c));
  }

  // Makes `u` true. Returns the smallest index of a clause falsified by this
  // step, or -1.
  long assign(Literal u) {
    value_[u.var()] = u.is_positive() ? 1 : 0;
    for (std::uint32_t c : occ_[u.key()]) {
      if (sat_count_[c]++ == 0) {
        ++satisfied_;
        for (Literal w : f_[c])
          --active_[w.var()];
      }
      refresh_unit(c);
    }
    long falsified = -1;
    for (std::uint32_t c : occ_[u.complement().key()]) {
      ++false_count_[c];
      if (sat_count_[c] == 0 && false_count_[c] == f_[c].width() &&
          (falsified < 0 || c < falsified))
        falsified = c;
      refresh_unit(c);
    }
    return falsified;
  }

  void unassign(Literal u) {
    for (std::uint32_t c : occ_[u.complement().key()]) {
      --false_count_[c];
      refresh_unit(c);
    }
    for (std::uint32_t c : occ_[u.key()]) {
      if (--sat_count_[c] == 0) {
        --satisfied_;
        for (Literal w : f_[c])
          ++active_[w.var()];
      }
      refresh_unit(c);
    }
    value_[u.var()] = -1;
  }

  int pick_variable() {
    const int n = static_cast<int>(value_.size()) - 1;
    switch (opt_.policy) {
    case BranchPolicy::Fixed:
      for (int v = 1; v <= n; ++v)
        if (value_[v] < 0 && active_[v] > 0)
          return v;
      break;
    case BranchPolicy::MaxDegree: {
      int best = 0;
      for (int v = 1; v <= n; ++v)
        if (value_[v] < 0 && active_[v] > 0 && (best == 0 || active_[v] > active_[best]))
          best = v;
      return best;
    }
    case BranchPolicy::Random: {
      std::vector<int> cand;
      for (int v = 1; v <= n; ++v)
        if (value_[v] < 0 && active_[v] > 0)
          cand.push_back(v);
      if (cand.empty())
        return 0;
      return cand[rng_.below(cand.size())];
    }
    }
    return 0;
  }

  void record_model() {
    Assignment a;
    for (int v : f_.universe())
      a.assign(v, v < static_cast<int>(value_.size()) && value_[v] == 1);
    model_ = std::move(a);
  }

  // Either the subtree refuting the current assignment extended by `u`, or a
  // kSat / kBudget marker.
  NodeId branch(Literal u) {
    long conflict = assign(u);
    NodeId sub;
    if (conflict >= 0) {
      ++stats_.conflicts;
      sub = tree_.add_leaf(f_[static_cast<std::size_t>(conflict)]);
    } else {
      sub = solve();
    }
    unassign(u);
    return sub;
  }

  NodeId solve() {
    if (satisfied_ == f_.size()) {
      record_model();
      return kSat;
    }
    if (opt_.mode == PropagationMode::Unit && !units_.empty()) {
      const std::uint32_t c = *units_.begin();
      Literal u;
      for (Literal w : f_[c])
        if (value_[w.var()] < 0)
          u = w;
      ++stats_.propagations;
      NodeId sub = branch(u);
      if (sub == kSat || sub == kBudget)
        return sub;
      if (!tree_.node(sub).label.contains(u.complement()))
        return sub;
      NodeId unit_leaf = tree_.add_leaf(f_[c]);
      return tree_.add_resolvent(unit_leaf, sub);
    }

    const int x = pick_variable();
    if (x == 0) {
      // Every remaining clause is unsatisfied yet has no free variable: that
      // would be a falsified clause, which assign() reports eagerly.
      throw Error("internal error: DPLL found no branch variable");
    }
    if (stats_.decisions >= opt_.decision_budget)
      return kBudget;
    ++stats_.decisions;

    NodeId sub0 = branch(Literal::negative(x)); // x -> 0
    if (sub0 == kSat || sub0 == kBudget)
      return sub0;
    if (!tree_.node(sub0).label.contains(Literal::positive(x)))
      return sub0;
    NodeId sub1 = branch(Literal::positive(x)); // x -> 1
    if (sub1 == kSat || sub1 == kBudget)
      return sub1;
    if (!tree_.node(sub1).label.contains(Literal::negative(x)))
      return sub1;
    return tree_.add_resolvent(sub0, sub1);
  }

  const CnfFormula &f_;
  DpllOptions opt_;
  SplitMix64 rng_;
  std::vector<int> value_;
  std::vector<int> active_; // unsatisfied clauses containing the variable
  std::vector<std::vector<std::uint32_t>> occ_;
  std::vector<std::size_t> false_count_;
  std::vector<std::size_t> sat_count_;
  std::size_t satisfied_ = 0;
  std::set<std::uint32_t> units_;
  ResolutionTree tree_;
  DpllStats stats_;
  std::optional<Assignment> model_;
};

} // namespace

DpllResult dpll_refute(const CnfFormula &f, const DpllOptions &options) {
  Dpll solver(f, options);
  DpllResult r = solver.run();
  if (r.verdict == Verdict::Sat && !evaluate(f, *r.model))
    throw Error("internal error: DPLL model does not satisfy the formula");
  return r;
}

// --- tree-size bound ------------------------------------------------------------------

BigInt treelike_lower_bound(int k, std::uint64_t bit_budget) {
  if (k < 2)
    throw InvalidArgument("treelike bound needs k >= 2");
  if (k % 2 == 0) {
    const int half = k / 2 - 1;
    if (half >= 63 || (std::uint64_t{1} << half) + 1 > bit_budget)
      throw CapExceeded("treelike bound for k = " + std::to_string(k) +
                        " exceeds the bit budget");
    return pow2(std::uint64_t{1} << half);
  }
  // Exponent sqrt(2^(k-2)) is irrational; bracket 2^exponent from both sides
  // and raise the precision until both ends share a ceiling.
  const double approx_bits = std::pow(2.0, (k - 2) / 2.0);
  if (approx_bits + 1 > static_cast<double>(bit_budget))
    throw CapExceeded("treelike bound for k = " + std::to_string(k) +
                      " exceeds the bit budget");
  for (mpfr_prec_t prec = static_cast<mpfr_prec_t>(approx_bits) + 64;; prec *= 2) {
    mpfr_t e_lo, e_hi, lo, hi;
    mpfr_inits2(prec, e_lo, e_hi, lo, hi, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui_2exp(e_lo, 1, k - 2, MPFR_RNDN); // exact power of two
    mpfr_set(e_hi, e_lo, MPFR_RNDN);
    mpfr_sqrt(e_lo, e_lo, MPFR_RNDD);
    mpfr_sqrt(e_hi, e_hi, MPFR_RNDU);
    mpfr_ui_pow(lo, 2, e_lo, MPFR_RNDD);
    mpfr_ui_pow(hi, 2, e_hi, MPFR_RNDU);
    mpfr_ceil(lo, lo);
    mpfr_ceil(hi, hi);
    const bool agree = mpfr_equal_p(lo, hi) != 0;
    BigInt out;
    if (agree)
      mpfr_get_z(out.backend().data(), lo, MPFR_RNDN);
    mpfr_clears(e_lo, e_hi, lo, hi, static_cast<mpfr_ptr>(nullptr));
    if (agree)
      return out;
  }
}

} // namespace lincnf
