#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lincnf/cnf.hpp"
#include "lincnf/error.hpp"
#include "lincnf/resolution.hpp"

namespace lincnf {

// Ordered key/value pairs written as `c meta <key>=<value>` comment lines.
// Keys are non-empty and free of whitespace and '='; values are single-line.
using Metadata = std::vector<std::pair<std::string, std::string>>;

// Keys the formula writer owns: `width` (declared width) and `universe`
// (comma-separated ids, only when the universe is not 1..n).
inline constexpr std::string_view kMetaWidth = "width";
inline constexpr std::string_view kMetaUniverse = "universe";

// `p cnf <n> <m>` with n = largest universe id, one clause per line.
std::string write_dimacs(const CnfFormula &f, const Metadata &meta = {});

struct ParsedCnf {
  CnfFormula formula;
  Metadata meta; // without the reserved keys
};

// Throws ParseError (with the 1-based line) on malformed input, a clause
// count that disagrees with the header, ids above n, repeated or clashing
// literals inside a clause, or a missing terminating 0.
ParsedCnf parse_dimacs(std::string_view text);

// `h <n> <m> <k>`, then one edge per line as k vertex ids.
std::string write_hypergraph(const Hypergraph &h, const Metadata &meta = {});

struct ParsedHypergraph {
  Hypergraph graph;
  Metadata meta;
};
ParsedHypergraph parse_hypergraph(std::string_view text);

// `t <nodes> <root>`, then nodes in id order:
//   <id> LEAF <lits> 0
//   <id> RES <var> <child0> <child1> <lits> 0
std::string write_tree(const ResolutionTree &t, const Metadata &meta = {});

struct ParsedTree {
  ResolutionTree tree;
  Metadata meta;
};
// Structural parse only; semantic validity is check_tree's job. Node ids must
// be 0..nodes-1 in order and child ids in range.
ParsedTree parse_tree(std::string_view text);

enum class FileFormat { Dimacs, Hypergraph, Tree };
std::string to_string(FileFormat f);

// Decided by the first non-comment line. Throws ParseError when none matches.
FileFormat detect_format(std::string_view text);

// Whole-file I/O; throws Error naming the path on failure.
std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view contents);

} // namespace lincnf
