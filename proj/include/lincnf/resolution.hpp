#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lincnf/cnf.hpp"
#include "lincnf/error.hpp"
#include "lincnf/numeric.hpp"
#include "lincnf/rng.hpp"

namespace lincnf {

// (C \ {u}) ∪ (D \ {ū}) for the unique literal u ∈ C with ū ∈ D.
// Throws InvalidArgument when C and D clash on zero or on several literals.
Clause resolve(const Clause &c, const Clause &d);

// The variable C and D clash on, if they clash on exactly one.
std::optional<int> unique_clash(const Clause &c, const Clause &d);

using NodeId = std::uint32_t;

// Internal nodes record the resolved variable; children[0] carries the
// positive literal (edge x -> 0), children[1] the negative one (edge x -> 1).
struct TreeNode {
  Clause label;
  std::optional<std::array<NodeId, 2>> children;
  int resolved_var = 0;

  bool is_leaf() const { return !children.has_value(); }
  bool operator==(const TreeNode &) const = default;
};

// Indexed node pool plus a root. Nodes are immutable once added.
class ResolutionTree {
public:
  NodeId add_leaf(Clause label);
  // Label computed by resolve(); child order normalized so children[0] holds
  // the positive literal.
  NodeId add_resolvent(NodeId a, NodeId b);
  // Raw insertion for parsers; no consistency checks.
  NodeId add_node(TreeNode node);

  void set_root(NodeId root) { root_ = root; }
  NodeId root() const { return root_; }
  const std::vector<TreeNode> &nodes() const { return nodes_; }
  const TreeNode &node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }

  // Copy holding only nodes reachable from the root, in post-order (children
  // before parents, root last). Throws MalformedTree on sharing or bad ids.
  ResolutionTree compacted() const;

  // parent[id] for a well-formed tree (root maps to itself).
  std::vector<NodeId> parents() const;

  bool operator==(const ResolutionTree &) const = default;

private:
  std::vector<TreeNode> nodes_;
  NodeId root_ = 0;
};

class MalformedTree : public Error {
public:
  using Error::Error;
};

struct TreeReport {
  bool valid = false;
  bool strict = false;
  bool regular = false;
  std::size_t leaf_count = 0;
  std::size_t node_count = 0;
  std::size_t depth = 0;
  std::vector<NodeId> leaves_not_in_formula;
  std::vector<std::string> problems; // first few validity failures, human-readable
};

// Validity per the resolution-tree definition against F, plus strictness
// (pairwise distinct leaf labels) and regularity (no variable resolved twice
// on a root-to-leaf path). Throws MalformedTree for dangling ids, shared
// subtrees or cycles.
TreeReport check_tree(const ResolutionTree &tree, const CnfFormula &f);

enum class BranchPolicy { Fixed, MaxDegree, Random };
enum class PropagationMode { PureSplit, Unit };

std::string to_string(BranchPolicy p);
std::string to_string(PropagationMode m);

struct DpllOptions {
  PropagationMode mode = PropagationMode::PureSplit;
  BranchPolicy policy = BranchPolicy::Fixed;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t decision_budget = 10'000'000;
};

enum class Verdict { Sat, Unsat, Unknown };
std::string to_string(Verdict v);

struct DpllStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::size_t tree_nodes = 0;
  std::size_t tree_leaves = 0;
};

struct DpllResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<Assignment> model;    // on Sat, total over the universe
  std::optional<ResolutionTree> tree; // on Unsat, compacted and checked
  DpllStats stats;
};

// Splitting procedure that records its refutation. Branch value order is 0
// then 1. When a branch's refutation does not mention the branch variable it
// refutes the parent on its own and the sibling branch is skipped. In Unit
// mode the first unit clause (canonical order) is propagated, which shows up
// in the tree as a resolution step against that clause. Conflicts are
// labelled with the first falsified clause in canonical order.
DpllResult dpll_refute(const CnfFormula &f, const DpllOptions &options = {});

inline constexpr std::uint64_t kDefaultBitBudget = 1'000'000;

// ceil(2^(2^(k/2 - 1))). Exact for even k; for odd k the exponent is
// irrational and the ceiling is taken from a directed-rounding bracket.
// Throws CapExceeded when the result needs more than bit_budget bits.
BigInt treelike_lower_bound(int k, std::uint64_t bit_budget = kDefaultBitBudget);

} // namespace lincnf
