#include "lincnf/formats.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace lincnf {

namespace {

void check_meta(const Metadata &meta) {
  for (const auto &[key, value] : meta) {
    if (key.empty() || key.find_first_of(" \t\r\n=") != std::string::npos)
      throw InvalidArgument("bad metadata key '" + key + "'");
    if (value.find_first_of("\r\n") != std::string::npos)
      throw InvalidArgument("metadata value for '" + key + "' spans lines");
  }
}

void write_meta(std::ostringstream &os, const Metadata &meta) {
  check_meta(meta);
  for (const auto &[key, value] : meta)
    os << "c meta " << key << '=' << value << '\n';
}

// Line-oriented reader shared by the three formats. Comment lines start with
// 'c' followed by whitespace or end of line; `c meta k=v` lines are collected.
class LineReader {
public:
  explicit LineReader(std::string_view text) : text_(text) {}

  // Next non-blank, non-comment line; false at end of input.
  bool next(std::string_view &line) {
    while (pos_ < text_.size()) {
      const std::size_t end = std::min(text_.find('\n', pos_), text_.size());
      std::string_view raw = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      if (!raw.empty() && raw.back() == '\r')
        raw.remove_suffix(1);
      const std::size_t first = raw.find_first_not_of(" \t");
      if (first == std::string_view::npos)
        continue;
      raw.remove_prefix(first);
      if (raw[0] == 'c' && (raw.size() == 1 || raw[1] == ' ' || raw[1] == '\t')) {
        take_meta(raw);
        continue;
      }
      line = raw;
      return true;
    }
    return false;
  }

  std::size_t line() const { return line_no_; }
  Metadata &meta() { return meta_; }

  [[noreturn]] void fail(const std::string &what) const { throw ParseError(line_no_, what); }

private:
  void take_meta(std::string_view raw) {
    constexpr std::string_view prefix = "c meta ";
    if (raw.substr(0, prefix.size()) != prefix)
      return;
    std::string_view body = raw.substr(prefix.size());
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos || eq == 0)
      fail("metadata line without key=value");
    meta_.emplace_back(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
  Metadata meta_;
};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t')
      ++j;
    if (j > i)
      out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class Int> std::optional<Int> parse_int(std::string_view token) {
  Int v{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    return std::nullopt;
  return v;
}

template <class Int> Int expect_int(const LineReader &r, std::string_view token, const char *what) {
  auto v = parse_int<Int>(token);
  if (!v)
    r.fail(std::string("expected ") + what + ", got '" + std::string(token) + "'");
  return *v;
}

// Removes the reserved keys, returning them separately.
std::optional<std::string> take_key(Metadata &meta, std::string_view key) {
  std::optional<std::string> out;
  for (auto it = meta.begin(); it != meta.end();) {
    if (it->first == key) {
      out = it->second;
      it = meta.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

void write_literals(std::ostringstream &os, const Clause &c) {
  for (Literal u : c)
    os << u.dimacs() << ' ';
  os << '0';
}

Clause make_clause(const LineReader &r, const std::vector<int> &codes) {
  try {
    return Clause::from_dimacs(codes);
  } catch (const InvalidArgument &e) {
    r.fail(e.what());
  }
}

} // namespace

// --- DIMACS ---------------------------------------------------------------------------

std::string write_dimacs(const CnfFormula &f, const Metadata &meta) {
  for (const auto &[key, value] : meta)
    if (key == kMetaWidth || key == kMetaUniverse)
      throw InvalidArgument("metadata key '" + key + "' is reserved");
  std::ostringstream os;
  write_meta(os, meta);
  if (f.declared_width())
    os << "c meta " << kMetaWidth << '=' << *f.declared_width() << '\n';
  if (!f.dense_universe()) {
    os << "c meta " << kMetaUniverse << '=';
    const auto &u = f.universe();
    for (std::size_t i = 0; i < u.size(); ++i)
      os << (i ? "," : "") << u[i];
    os << '\n';
  }
  os << "p cnf " << f.max_variable() << ' ' << f.size() << '\n';
  for (const Clause &c : f) {
    write_literals(os, c);
    os << '\n';
  }
  return os.str();
}

ParsedCnf parse_dimacs(std::string_view text) {
  LineReader r(text);
  std::string_view line;
  if (!r.next(line))
    r.fail("missing 'p cnf' header");
  auto header = split_ws(line);
  if (header.size() != 4 || header[0] != "p" || header[1] != "cnf")
    r.fail("expected 'p cnf <vars> <clauses>'");
  const int n = expect_int<int>(r, header[2], "variable count");
  const long long m = expect_int<long long>(r, header[3], "clause count");
  if (n < 0 || m < 0)
    r.fail("negative count in header");

  std::vector<Clause> clauses;
  std::vector<int> pending;
  while (r.next(line)) {
    if (line[0] == '%') // SATLIB trailer
      break;
    for (std::string_view tok : split_ws(line)) {
      const int code = expect_int<int>(r, tok, "literal");
      if (code == 0) {
        clauses.push_back(make_clause(r, pending));
        pending.clear();
        continue;
      }
      if (code == std::numeric_limits<int>::min() || std::abs(code) > n)
        r.fail("literal " + std::string(tok) + " outside 1.." + std::to_string(n));
      pending.push_back(code);
    }
  }
  if (!pending.empty())
    r.fail("last clause is not terminated by 0");
  if (static_cast<long long>(clauses.size()) != m)
    r.fail("header promises " + std::to_string(m) + " clauses, found " +
           std::to_string(clauses.size()));

  ParsedCnf out;
  out.meta = std::move(r.meta());
  std::optional<int> width;
  if (auto w = take_key(out.meta, kMetaWidth)) {
    auto v = parse_int<int>(*w);
    if (!v || *v < 0)
      r.fail("bad width metadata '" + *w + "'");
    width = *v;
  }
  auto universe_text = take_key(out.meta, kMetaUniverse);
  try {
    if (universe_text) {
      std::vector<int> universe;
      std::string_view rest = *universe_text;
      while (!rest.empty()) {
        const std::size_t comma = std::min(rest.find(','), rest.size());
        auto v = parse_int<int>(rest.substr(0, comma));
        if (!v || *v < 1 || *v > n)
          r.fail("bad universe metadata");
        universe.push_back(*v);
        rest.remove_prefix(std::min(comma + 1, rest.size()));
      }
      out.formula = CnfFormula::over(std::move(clauses), std::move(universe), width);
    } else {
      out.formula = CnfFormula::with_variable_count(std::move(clauses), n, width);
    }
  } catch (const InvalidArgument &e) {
    r.fail(e.what());
  }
  return out;
}

// --- hypergraphs -------------------------------------------------------------------------

std::string write_hypergraph(const Hypergraph &h, const Metadata &meta) {
  std::ostringstream os;
  write_meta(os, meta);
  os << "h " << h.vertex_count() << ' ' << h.edge_count() << ' ' << h.uniformity() << '\n';
  for (const auto &e : h.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i)
      os << (i ? " " : "") << e[i];
    os << '\n';
  }
  return os.str();
}

ParsedHypergraph parse_hypergraph(std::string_view text) {
  LineReader r(text);
  std::string_view line;
  if (!r.next(line))
    r.fail("missing 'h' header");
  auto header = split_ws(line);
  if (header.size() != 4 || header[0] != "h")
    r.fail("expected 'h <vertices> <edges> <k>'");
  const int n = expect_int<int>(r, header[1], "vertex count");
  const long long m = expect_int<long long>(r, header[2], "edge count");
  const int k = expect_int<int>(r, header[3], "uniformity");
  if (n < 0 || m < 0 || k < 0)
    r.fail("negative count in header");

  std::vector<std::vector<int>> edges;
  while (r.next(line)) {
    auto toks = split_ws(line);
    if (static_cast<int>(toks.size()) != k)
      r.fail("edge with " + std::to_string(toks.size()) + " vertices, expected " +
             std::to_string(k));
    std::vector<int> e;
    for (auto tok : toks) {
      const int v = expect_int<int>(r, tok, "vertex id");
      if (v < 0 || v >= n)
        r.fail("vertex " + std::to_string(v) + " outside 0.." + std::to_string(n - 1));
      e.push_back(v);
    }
    edges.push_back(std::move(e));
  }
  if (static_cast<long long>(edges.size()) != m)
    r.fail("header promises " + std::to_string(m) + " edges, found " +
           std::to_string(edges.size()));
  ParsedHypergraph out;
  out.meta = std::move(r.meta());
  try {
    out.graph = Hypergraph(n, k, std::move(edges));
  } catch (const InvalidArgument &e) {
    r.fail(e.what());
  }
  return out;
}

// --- trees ---------------------------------------------------------------------------------

std::string write_tree(const ResolutionTree &t, const Metadata &meta) {
  std::ostringstream os;
  write_meta(os, meta);
  os << "t " << t.size() << ' ' << t.root() << '\n';
  const auto &nodes = t.nodes();
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const TreeNode &n = nodes[id];
    os << id;
    if (n.is_leaf())
      os << " LEAF ";
    else
      os << " RES " << n.resolved_var << ' ' << (*n.children)[0] << ' ' << (*n.children)[1]
         << ' ';
    write_literals(os, n.label);
    os << '\n';
  }
  return os.str();
}

ParsedTree parse_tree(std::string_view text) {
  LineReader r(text);
  std::string_view line;
  if (!r.next(line))
    r.fail("missing 't' header");
  auto header = split_ws(line);
  if (header.size() != 3 || header[0] != "t")
    r.fail("expected 't <nodes> <root>'");
  const auto count = expect_int<std::uint32_t>(r, header[1], "node count");
  const auto root = expect_int<std::uint32_t>(r, header[2], "root id");
  if (count == 0 || root >= count)
    r.fail("root id outside the node range");

  ParsedTree out;
  while (r.next(line)) {
    auto toks = split_ws(line);
    if (toks.size() < 3)
      r.fail("truncated node line");
    const auto id = expect_int<std::uint32_t>(r, toks[0], "node id");
    if (id != out.tree.size())
      r.fail("node id " + std::to_string(id) + " out of order, expected " +
             std::to_string(out.tree.size()));
    if (id >= count)
      r.fail("more nodes than the header declares");
    TreeNode node;
    std::size_t lit_start = 2;
    if (toks[1] == "RES") {
      if (toks.size() < 6)
        r.fail("truncated RES line");
      node.resolved_var = expect_int<int>(r, toks[2], "resolved variable");
      if (node.resolved_var < 1)
        r.fail("resolved variable must be positive");
      std::array<NodeId, 2> ch{expect_int<std::uint32_t>(r, toks[3], "child id"),
                               expect_int<std::uint32_t>(r, toks[4], "child id")};
      for (NodeId c : ch)
        if (c >= count)
          r.fail("child id " + std::to_string(c) + " outside the node range");
      node.children = ch;
      lit_start = 5;
    } else if (toks[1] != "LEAF") {
      r.fail("expected LEAF or RES, got '" + std::string(toks[1]) + "'");
    }
    if (toks.back() != "0")
      r.fail("node clause is not terminated by 0");
    std::vector<int> codes;
    for (std::size_t i = lit_start; i + 1 < toks.size(); ++i) {
      const int code = expect_int<int>(r, toks[i], "literal");
      if (code == 0 || code == std::numeric_limits<int>::min())
        r.fail("bad literal '" + std::string(toks[i]) + "'");
      codes.push_back(code);
    }
    node.label = make_clause(r, codes);
    out.tree.add_node(std::move(node));
  }
  if (out.tree.size() != count)
    r.fail("header promises " + std::to_string(count) + " nodes, found " +
           std::to_string(out.tree.size()));
  out.tree.set_root(root);
  out.meta = std::move(r.meta());
  return out;
}

// --- detection and file I/O -------------------------------------------------------------------

std::string to_string(FileFormat f) {
  switch (f) {
  case FileFormat::Dimacs: return "dimacs";
  case FileFormat::Hypergraph: return "hg";
  case FileFormat::Tree: return "tree";
  }
  return "?";
}

FileFormat detect_format(std::string_view text) {
  LineReader r(text);
  std::string_view line;
  if (!r.next(line))
    r.fail("empty input");
  auto toks = split_ws(line);
  if (toks[0] == "p")
    return FileFormat::Dimacs;
  if (toks[0] == "h")
    return FileFormat::Hypergraph;
  if (toks[0] == "t")
    return FileFormat::Tree;
  r.fail("unrecognized header '" + std::string(line) + "'");
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out)
    throw Error("write failed for " + path);
}

} // namespace lincnf
