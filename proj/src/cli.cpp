#include "lincnf/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "lincnf/analysis.hpp"
#include "lincnf/constructions.hpp"
#include "lincnf/formats.hpp"
#include "lincnf/galois.hpp"
#include "lincnf/resolution.hpp"

namespace lincnf {

namespace {

struct RunConfig {
  std::string kind;
  int k = 0;
  int b = 1;
  std::uint64_t q = 0;
  int ell = 4;
  std::uint64_t trials = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t max_trials = 64;
  int cap_vars = kDefaultModelCountCap;
  int cap_kappa = kDefaultKappaCap;
  std::uint64_t budget = 10'000'000;
  std::string input;
  std::string output;
  std::string formula;
  std::string tree;
  std::string emit_tree;
  std::string level = "linear";
  std::string mode = "split";
  std::string policy = "fixed";
  std::string verifier = "auto";
  std::optional<std::size_t> d;
  std::size_t max_nodes = 64;
  bool degrees = false, rich = false, weight = false, walk = false, kappa = false,
       bounds = false;
};

class Reporter {
public:
  template <class T> void kv(const std::string &key, const T &value) {
    os_ << key << '=' << value << '\n';
  }
  void note(const std::string &text) { os_ << "# " << text << '\n'; }
  std::ostringstream &stream() { return os_; }
  std::string str() const { return os_.str(); }

private:
  std::ostringstream os_;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string clause_text(const Clause &c) {
  std::ostringstream os;
  for (Literal u : c)
    os << u.dimacs() << ' ';
  os << '0';
  return os.str();
}

template <class T> std::string join(const std::vector<T> &xs, const char *sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i)
    os << (i ? sep : "") << xs[i];
  return os.str();
}

// Writes to the -o path when given, to `out` otherwise.
void emit(const RunConfig &cfg, std::ostream &out, const std::string &text) {
  if (cfg.output.empty())
    out << text;
  else
    write_file(cfg.output, text);
}

BranchPolicy parse_policy(const std::string &s) {
  if (s == "fixed")
    return BranchPolicy::Fixed;
  if (s == "maxdeg")
    return BranchPolicy::MaxDegree;
  return BranchPolicy::Random;
}

// Verification outcome for a generated formula: exhaustive count when the
// universe fits, DPLL with unit propagation otherwise.
std::string verify_unsat(const CnfFormula &f, const RunConfig &cfg) {
  if (static_cast<int>(f.universe().size()) <= cfg.cap_vars)
    return count_models(f, cfg.cap_vars) == 0 ? "unsat-verified" : "sat";
  DpllOptions opt;
  opt.mode = PropagationMode::Unit;
  opt.decision_budget = cfg.budget;
  const DpllResult r = dpll_refute(f, opt);
  switch (r.verdict) {
  case Verdict::Unsat: return "unsat-verified";
  case Verdict::Sat: return "sat";
  case Verdict::Unknown: break;
  }
  return "unknown-budget-" + std::to_string(cfg.budget);
}

void field_meta(Metadata &meta, const VandermondeHypergraph &h) {
  meta.emplace_back("field_order", std::to_string(h.field->order()));
  meta.emplace_back("field_modulus", h.field->modulus_string());
  meta.emplace_back("evaluation_points", join(h.evaluation_points));
}

// --- gen -------------------------------------------------------------------------------

int cmd_gen(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  Metadata meta{{"generator", cfg.kind}, {"k", std::to_string(cfg.k)}};
  if (cfg.kind == "complete" || cfg.kind == "recursive") {
    const CnfFormula f =
        cfg.kind == "complete" ? complete_kcnf(cfg.k) : recursive_unsat_linear(cfg.k);
    meta.emplace_back("clauses", std::to_string(f.size()));
    meta.emplace_back("variables", std::to_string(f.universe().size()));
    meta.emplace_back("linear", yes_no(linearity_level(f, 1, LinearityMode::Strict)));
    meta.emplace_back("verification", verify_unsat(f, cfg));
    emit(cfg, out, write_dimacs(f, meta));
    return kExitOk;
  }

  const std::uint64_t q =
      cfg.q ? cfg.q : choose_q(cfg.k, cfg.kind == "blinear" ? cfg.b : 1);
  meta.emplace_back("q", std::to_string(q));
  if (cfg.kind == "kuzjurin" || cfg.kind == "blinear") {
    const VandermondeHypergraph h = cfg.kind == "kuzjurin"
                                        ? kuzjurin_hypergraph(cfg.k, q)
                                        : b_linear_hypergraph(cfg.k, q, cfg.b);
    meta.emplace_back("b", std::to_string(h.b));
    field_meta(meta, h);
    meta.emplace_back("vertices", std::to_string(h.graph.vertex_count()));
    meta.emplace_back("edges", std::to_string(h.graph.edge_count()));
    meta.emplace_back("b_linear", yes_no(is_b_linear(h.graph, h.b)));
    emit(cfg, out, write_hypergraph(h.graph, meta));
    return kExitOk;
  }

  // signed
  const VandermondeHypergraph h = kuzjurin_hypergraph(cfg.k, q);
  field_meta(meta, h);
  SigningSearchOptions opt;
  opt.base_seed = cfg.seed;
  opt.max_trials = cfg.max_trials;
  opt.model_count_cap = cfg.cap_vars;
  opt.dpll_decision_budget = cfg.budget;
  opt.verifier = cfg.verifier == "count" ? Verifier::ModelCount
                 : cfg.verifier == "dpll" ? Verifier::Dpll
                                          : Verifier::Auto;
  auto transcript_text = [](const std::vector<SigningTrial> &trials) {
    std::vector<std::string> parts;
    for (const auto &t : trials)
      parts.push_back(std::to_string(t.seed) + ":" + to_string(t.outcome));
    return join(parts);
  };
  meta.emplace_back("base_seed", std::to_string(cfg.seed));
  meta.emplace_back("max_trials", std::to_string(cfg.max_trials));
  {
    std::ostringstream os;
    os << std::setprecision(10)
       << expected_models_log2(h.graph.vertex_count(), h.graph.edge_count(), cfg.k);
    meta.emplace_back("expected_models_log2", os.str());
  }
  try {
    const SigningSearchResult r = search_unsat_signing(h.graph, opt);
    meta.emplace_back("seed", std::to_string(r.trial.seed));
    meta.emplace_back("trial_index", std::to_string(r.trial.trial_index));
    meta.emplace_back("verifier", r.trial.verifier);
    meta.emplace_back("verification", to_string(r.trial.outcome));
    meta.emplace_back("linear", yes_no(linearity_level(r.formula, 1, LinearityMode::Strict)));
    meta.emplace_back("transcript", transcript_text(r.transcript));
    emit(cfg, out, write_dimacs(r.formula, meta));
    return kExitOk;
  } catch (const SigningExhausted &e) {
    err << "error: " << e.what() << "\ntranscript=" << transcript_text(e.trials()) << '\n';
    return kExitBudget;
  }
}

// --- verify -----------------------------------------------------------------------------

int cmd_verify(const RunConfig &cfg, std::ostream &out) {
  const std::string text = read_file(cfg.input);
  const int b = cfg.level == "b" ? cfg.b : 1;
  Reporter rep;
  rep.kv("property", cfg.level == "b" ? std::to_string(b) + "-linear" : cfg.level);
  bool holds = true;
  if (detect_format(text) == FileFormat::Hypergraph) {
    const Hypergraph h = parse_hypergraph(text).graph;
    auto v = first_intersection_violation(h, b);
    holds = !v;
    if (v) {
      rep.kv("violation", std::to_string(v->first) + "," + std::to_string(v->second));
      rep.kv("edge_" + std::to_string(v->first), join(h.edges()[v->first], " "));
      rep.kv("edge_" + std::to_string(v->second), join(h.edges()[v->second], " "));
    }
  } else {
    const CnfFormula f = parse_dimacs(text).formula;
    const auto mode = cfg.level == "weak" ? LinearityMode::Weak : LinearityMode::Strict;
    auto v = first_linearity_violation(f, b, mode);
    holds = !v;
    if (v) {
      rep.kv("violation", std::to_string(v->first) + "," + std::to_string(v->second));
      rep.kv("clause_" + std::to_string(v->first), clause_text(f[v->first]));
      rep.kv("clause_" + std::to_string(v->second), clause_text(f[v->second]));
    }
  }
  rep.kv("holds", yes_no(holds));
  out << rep.str();
  return holds ? kExitOk : kExitPropertyFails;
}

// --- solve ------------------------------------------------------------------------------

int cmd_solve(const RunConfig &cfg, std::ostream &out) {
  const CnfFormula f = parse_dimacs(read_file(cfg.input)).formula;
  DpllOptions opt;
  opt.mode = cfg.mode == "unit" ? PropagationMode::Unit : PropagationMode::PureSplit;
  opt.policy = parse_policy(cfg.policy);
  opt.seed = SplitMix64(cfg.seed).split("solve").seed();
  opt.decision_budget = cfg.budget;
  const DpllResult r = dpll_refute(f, opt);

  Reporter rep;
  rep.kv("verdict", to_string(r.verdict));
  rep.kv("mode", to_string(opt.mode));
  rep.kv("policy", to_string(opt.policy));
  rep.kv("decisions", r.stats.decisions);
  rep.kv("propagations", r.stats.propagations);
  rep.kv("conflicts", r.stats.conflicts);
  if (r.model) {
    std::ostringstream os;
    for (const auto &[var, value] : r.model->values())
      os << (value ? var : -var) << ' ';
    os << '0';
    rep.kv("model", os.str());
  }
  if (r.tree) {
    rep.kv("tree_nodes", r.stats.tree_nodes);
    rep.kv("tree_leaves", r.stats.tree_leaves);
    if (!cfg.emit_tree.empty())
      write_file(cfg.emit_tree, write_tree(*r.tree, {{"mode", to_string(opt.mode)},
                                                     {"policy", to_string(opt.policy)}}));
  }
  if (r.verdict == Verdict::Unknown)
    rep.note("decision budget of " + std::to_string(cfg.budget) + " exhausted");
  emit(cfg, out, rep.str());
  return r.verdict == Verdict::Unknown ? kExitBudget : kExitOk;
}

// --- check-tree --------------------------------------------------------------------------

int cmd_check_tree(const RunConfig &cfg, std::ostream &out) {
  const ResolutionTree t = parse_tree(read_file(cfg.input)).tree;
  const CnfFormula f = parse_dimacs(read_file(cfg.formula)).formula;
  const TreeReport rep = check_tree(t, f);
  Reporter r;
  r.kv("valid", yes_no(rep.valid));
  r.kv("strict", yes_no(rep.strict));
  r.kv("regular", yes_no(rep.regular));
  r.kv("nodes", rep.node_count);
  r.kv("leaves", rep.leaf_count);
  r.kv("depth", rep.depth);
  r.kv("leaves_not_in_formula", rep.leaves_not_in_formula.size());
  for (const auto &p : rep.problems)
    r.kv("problem", p);
  out << r.str();
  return rep.valid ? kExitOk : kExitPropertyFails;
}

// --- analyze -----------------------------------------------------------------------------

void analyze_bounds(const RunConfig &cfg, Reporter &rep) {
  if (cfg.k < 2)
    throw InvalidArgument("bounds: need -k >= 2");
  const BoundsReport b = size_bounds(cfg.k, cfg.b);
  rep.kv("bounds.k", b.k);
  rep.kv("bounds.b", b.b);
  rep.kv("bounds.lower", b.lower_clause_bound.to_string(12));
  rep.kv("bounds.lower_lo", to_decimal(b.lower_clause_bound.lo, 20));
  rep.kv("bounds.lower_hi", to_decimal(b.lower_clause_bound.hi, 20));
  rep.kv("bounds.upper", b.upper_clause_bound.str());
  if (b.construction_q) {
    rep.kv("bounds.construction_q", *b.construction_q);
    rep.kv("bounds.construction_clauses", b.construction_clauses->str());
  }
  rep.kv("bounds.treelike", b.treelike_bound ? b.treelike_bound->str() : "cap-exceeded");
  rep.kv("bounds.focc_lower", b.focc_lower.to_string(12));
  for (const auto &e : b.f_table)
    rep.kv("bounds.f." + e.name, e.value.to_string(12) + " ; " + e.formula + " ; " + e.source);
  if (b.known_f)
    rep.kv("bounds.f.known", *b.known_f);
}

void analyze_degrees(const CnfFormula &f, const RunConfig &cfg, Reporter &rep) {
  const DegreeStats s = degree_stats(f, cfg.k > 0 ? std::optional<int>(cfg.k) : std::nullopt);
  std::size_t dk = 0;
  for (const auto &[x, d] : s.near_full_degree)
    dk = std::max(dk, d);
  rep.kv("degrees.clauses", f.size());
  rep.kv("degrees.variables", f.vbl().size());
  rep.kv("degrees.width", s.width ? std::to_string(*s.width) : "none");
  rep.kv("degrees.max_degree", s.max_degree);
  rep.kv("degrees.max_occurrence", s.max_occurrence);
  rep.kv("degrees.max_near_full", dk);
  rep.kv("degrees.linear", yes_no(linearity_level(f, 1, LinearityMode::Strict)));
  rep.kv("degrees.weakly_linear", yes_no(linearity_level(f, 1, LinearityMode::Weak)));
}

void analyze_rich(const std::string &text, const RunConfig &cfg, Reporter &rep) {
  const Hypergraph h = detect_format(text) == FileFormat::Hypergraph
                           ? parse_hypergraph(text).graph
                           : literal_hypergraph(parse_dimacs(text).formula).graph;
  std::size_t d = 0;
  if (cfg.d) {
    d = *cfg.d;
  } else {
    const auto deg = h.degrees();
    d = deg.empty() ? 0 : *std::min_element(deg.begin(), deg.end());
  }
  const RichBoundCheck r = rich_bound_check(h, d);
  rep.kv("rich.d", d);
  rep.kv("rich.is_rich", yes_no(r.is_rich));
  rep.kv("rich.edges", r.edge_count);
  rep.kv("rich.bound", r.bound.str());
  rep.kv("rich.pass", yes_no(r.pass));
}

bool analyze_walk(const CnfFormula &f, const RunConfig &cfg, Reporter &rep) {
  WalkOptions opt;
  opt.k = cfg.k;
  opt.length = cfg.ell;
  opt.trials = cfg.trials;
  opt.seed = SplitMix64(cfg.seed).split("walk").seed();
  opt.policy = parse_policy(cfg.policy);
  const WalkStatistics s = random_walk_experiment(f, opt);
  rep.note("restriction-walk statistics (DPLL-style branching), not minimal-tree expectations");
  rep.kv("walk.length", cfg.ell);
  rep.kv("walk.trials", cfg.trials);
  rep.kv("walk.policy", to_string(opt.policy));
  for (const auto &st : s.steps)
    rep.stream() << "walk.step=" << st.step << " mean=" << fmt(st.mean_weight)
                 << " sd=" << fmt(st.stddev_weight) << " max=" << st.max_weight.str()
                 << " max_near_full=" << st.max_near_full
                 << " empty=" << fmt(st.empty_fraction)
                 << " bound=" << st.expectation_bound.str()
                 << " within=" << yes_no(st.within_bound) << '\n';
  rep.kv("walk.degree_violations", s.degree_violations);
  rep.kv("walk.step_check_failures", s.step_check_failures);
  rep.kv("walk.empty_fraction", fmt(s.empty_fraction));
  rep.kv("walk.consistent", yes_no(s.consistent));
  return s.consistent;
}

bool analyze_kappa(const CnfFormula &f, const RunConfig &cfg, Reporter &rep) {
  if (cfg.tree.empty())
    throw InvalidArgument("kappa: needs --tree");
  const ResolutionTree t = parse_tree(read_file(cfg.tree)).tree.compacted();
  if (!check_tree(t, f).valid)
    throw InvalidArgument("kappa: tree is not a valid refutation of the formula");
  std::vector<NodeId> nodes(t.size());
  for (NodeId i = 0; i < t.size(); ++i)
    nodes[i] = i;
  if (nodes.size() > cfg.max_nodes) {
    SplitMix64 rng = SplitMix64(cfg.seed).split("kappa");
    for (std::size_t i = 0; i < cfg.max_nodes; ++i)
      std::swap(nodes[i], nodes[i + rng.below(nodes.size() - i)]);
    nodes.resize(cfg.max_nodes);
    std::sort(nodes.begin(), nodes.end());
  }
  int k = 0;
  for (const Clause &c : f)
    k = std::max(k, static_cast<int>(c.width()));
  const auto parent = t.parents();
  bool ok = true;
  for (NodeId a : nodes) {
    std::ostringstream line;
    line << "kappa.node=" << a << " width=" << t.node(a).label.width();
    try {
      line << " profile=" << join(kappa_profile(conflict_graph(t, f, a), k, cfg.cap_kappa));
      if (a != t.root()) {
        const bool pass = kappa_lipschitz_check(t, f, parent[a], a, cfg.cap_kappa).pass;
        ok = ok && pass;
        line << " lipschitz_parent=" << (pass ? "ok" : "FAIL");
      }
    } catch (const CapExceeded &) {
      line << " profile=cap-exceeded";
    }
    rep.stream() << line.str() << '\n';
  }
  return ok;
}

int cmd_analyze(const RunConfig &cfg, std::ostream &out) {
  Reporter rep;
  bool ok = true;
  const bool needs_input = cfg.degrees || cfg.rich || cfg.weight || cfg.walk || cfg.kappa;
  if (!(needs_input || cfg.bounds))
    throw InvalidArgument("analyze: choose at least one of --degrees --rich --weight "
                          "--walk --kappa --bounds");
  if (cfg.bounds)
    analyze_bounds(cfg, rep);
  if (needs_input) {
    if (cfg.input.empty())
      throw InvalidArgument("analyze: input file required");
    const std::string text = read_file(cfg.input);
    if (cfg.rich)
      analyze_rich(text, cfg, rep);
    if (cfg.degrees || cfg.weight || cfg.walk || cfg.kappa) {
      const CnfFormula f = parse_dimacs(text).formula;
      if (cfg.degrees)
        analyze_degrees(f, cfg, rep);
      if (cfg.weight) {
        int k = cfg.k;
        if (k <= 0)
          k = f.declared_width().value_or(static_cast<int>(degree_stats(f).width.value_or(0)));
        rep.kv("weight.k", k);
        rep.kv("weight.value", weight(f, k).str());
      }
      if (cfg.walk)
        ok = analyze_walk(f, cfg, rep) && ok;
      if (cfg.kappa)
        ok = analyze_kappa(f, cfg, rep) && ok;
    }
  }
  emit(cfg, out, rep.str());
  return ok ? kExitOk : kExitPropertyFails;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  RunConfig cfg;
  CLI::App app{"Generators, solver and analyzers for linear CNF formulas", "lincnf"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "lincnf 1.0");

  auto add_seed = [&](CLI::App *sub) {
    sub->add_option("--seed", cfg.seed, "64-bit seed; all randomness derives from it")
        ->capture_default_str();
  };
  auto add_budget = [&](CLI::App *sub) {
    sub->add_option("--budget", cfg.budget, "DPLL decision budget")->capture_default_str();
  };

  auto *gen = app.add_subcommand("gen", "generate a formula (DIMACS) or hypergraph (HG)");
  gen->add_option("kind", cfg.kind, "construction")
      ->required()
      ->check(CLI::IsMember({"complete", "recursive", "kuzjurin", "blinear", "signed"}));
  gen->add_option("-k", cfg.k, "clause width / uniformity")->required();
  gen->add_option("-q", cfg.q, "field order (default: smallest prime power with q^b >= k 2^k)");
  gen->add_option("-b", cfg.b, "linearity level for blinear")->capture_default_str();
  gen->add_option("--max-trials", cfg.max_trials, "signing attempts")->capture_default_str();
  gen->add_option("--verifier", cfg.verifier, "signing verifier")
      ->check(CLI::IsMember({"auto", "count", "dpll"}))
      ->capture_default_str();
  gen->add_option("--cap-vars", cfg.cap_vars, "largest universe counted exhaustively")
      ->capture_default_str();
  gen->add_option("-o,--output", cfg.output, "output file (default stdout)");
  add_seed(gen);
  add_budget(gen);

  auto *verify = app.add_subcommand("verify", "check (weak / b-) linearity");
  verify->add_option("input", cfg.input, "DIMACS or HG file")->required();
  verify->add_option("--level", cfg.level, "linear, weak or b")
      ->check(CLI::IsMember({"linear", "weak", "b"}))
      ->capture_default_str();
  verify->add_option("-b", cfg.b, "b for --level b")->capture_default_str();

  auto *solve = app.add_subcommand("solve", "DPLL with a recorded refutation");
  solve->add_option("input", cfg.input, "DIMACS file")->required();
  solve->add_option("--mode", cfg.mode, "split or unit")
      ->check(CLI::IsMember({"split", "unit"}))
      ->capture_default_str();
  solve->add_option("--policy", cfg.policy, "fixed, maxdeg or random")
      ->check(CLI::IsMember({"fixed", "maxdeg", "random"}))
      ->capture_default_str();
  solve->add_option("--emit-tree", cfg.emit_tree, "write the refutation here");
  solve->add_option("-o,--output", cfg.output, "report file (default stdout)");
  add_seed(solve);
  add_budget(solve);

  auto *check = app.add_subcommand("check-tree", "validate a resolution tree");
  check->add_option("input", cfg.input, "tree file")->required();
  check->add_option("--formula", cfg.formula, "DIMACS file the tree refutes")->required();

  auto *analyze = app.add_subcommand("analyze", "degree, richness, weight, walk, kappa, bounds");
  analyze->add_option("input", cfg.input, "DIMACS or HG file");
  analyze->add_flag("--degrees", cfg.degrees, "variable and literal degree statistics");
  analyze->add_flag("--rich", cfg.rich, "(d,d)-richness and the edge-count bound");
  analyze->add_flag("--weight", cfg.weight, "clause weight sum_C 2^-|C|");
  analyze->add_flag("--walk", cfg.walk, "random restriction walk statistics");
  analyze->add_flag("--kappa", cfg.kappa, "conflict-graph kappa profiles on a tree");
  analyze->add_flag("--bounds", cfg.bounds, "clause-count bounds for width k");
  analyze->add_option("-k", cfg.k, "width (default: declared width)");
  analyze->add_option("-b", cfg.b, "linearity level for --bounds")->capture_default_str();
  analyze->add_option("-d", cfg.d, "richness degree (default: minimum degree)");
  analyze->add_option("-l,--length", cfg.ell, "walk length")->capture_default_str();
  analyze->add_option("--trials", cfg.trials, "walk trials")->capture_default_str();
  analyze->add_option("--policy", cfg.policy, "walk branching policy")
      ->check(CLI::IsMember({"fixed", "maxdeg", "random"}))
      ->capture_default_str();
  analyze->add_option("--tree", cfg.tree, "tree file for --kappa");
  analyze->add_option("--max-nodes", cfg.max_nodes, "kappa: nodes sampled")->capture_default_str();
  analyze->add_option("--cap-kappa", cfg.cap_kappa, "kappa: vertex cap")->capture_default_str();
  analyze->add_option("-o,--output", cfg.output, "report file (default stdout)");
  add_seed(analyze);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (gen->parsed())
      return cmd_gen(cfg, out, err);
    if (verify->parsed())
      return cmd_verify(cfg, out);
    if (solve->parsed())
      return cmd_solve(cfg, out);
    if (check->parsed())
      return cmd_check_tree(cfg, out);
    return cmd_analyze(cfg, out);
  } catch (const ParseError &e) {
    err << "error: " << (cfg.input.empty() ? "" : cfg.input + ": ") << e.what() << '\n';
    return kExitInputError;
  } catch (const CapExceeded &e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

} // namespace lincnf
