#include "vssdd/frontend.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>

#include "vssdd/error.hpp"

namespace vssdd {

Cnf parse_dimacs(std::string_view text, std::vector<std::string>* warnings) {
  Cnf cnf;
  bool have_header = false;
  std::size_t declared = 0;
  Clause current;
  std::size_t line_no = 0;
  std::size_t clause_line = 0;
  bool done = false;
  std::size_t pos = 0;
  while (pos <= text.size() && !done) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::istringstream in{std::string(line)};
    std::string tok;
    if (!(in >> tok)) continue;
    if (tok[0] == 'c') continue;
    if (tok == "p") {
      if (have_header) throw ParseError(line_no, "duplicate problem line");
      std::string fmt;
      long long v = -1;
      long long c = -1;
      if (!(in >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0)
        throw ParseError(line_no, "malformed problem line, expected 'p cnf <vars> <clauses>'");
      cnf.num_vars = static_cast<Var>(v);
      declared = static_cast<std::size_t>(c);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "clause before the problem line");
    do {
      if (tok == "%") {
        done = true;
        break;
      }
      char* rest = nullptr;
      const long long lit = std::strtoll(tok.c_str(), &rest, 10);
      if (*rest != '\0') throw ParseError(line_no, "bad literal '" + tok + "'");
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (static_cast<unsigned long long>(std::llabs(lit)) > cnf.num_vars)
        throw ParseError(line_no, "literal " + tok + " exceeds the declared variable count");
      if (current.empty()) clause_line = line_no;
      current.push_back(static_cast<int>(lit));
    } while (in >> tok);
  }
  if (!have_header) throw ParseError(0, "missing problem line");
  if (!current.empty()) throw ParseError(clause_line, "final clause is not terminated by 0");
  if (cnf.clauses.size() != declared && warnings) {
    warnings->push_back("header declares " + std::to_string(declared) + " clauses, found " +
                        std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

std::string write_dimacs(const Cnf& cnf, const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << "c " << c << '\n';
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

namespace {

template <typename Manager, typename Handle>
Handle clause_of(Manager& m, const Clause& clause) {
  Handle acc = m.constant(false);
  for (int lit : clause) {
    const auto var = static_cast<Var>(std::abs(lit));
    if (var == 0 || var > m.vtree().num_vars())
      throw InvalidInput("cnf: variable " + std::to_string(var) + " is not in the vtree");
    acc = m.disjoin(acc, m.literal(var, lit > 0));
  }
  return acc;
}

template <typename Manager, typename Handle>
Handle compile(Manager& m, const Cnf& cnf, CompileStats* stats) {
  const auto start = std::chrono::steady_clock::now();
  const auto before = m.stats();
  Handle acc = m.constant(true);
  for (const auto& clause : cnf.clauses) {
    if (clause.empty()) {
      acc = m.constant(false);
      break;
    }
    acc = m.conjoin(acc, clause_of<Manager, Handle>(m, clause));
  }
  if (stats) {
    stats->size = m.size(acc);
    stats->node_count = m.node_count(acc);
    stats->apply_calls = m.stats().apply_calls - before.apply_calls;
    stats->cache_hits = m.stats().cache_hits - before.cache_hits;
    stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return acc;
}

}  // namespace

VsSdd compile_clause(VsManager& m, const Clause& clause) { return clause_of<VsManager, VsSdd>(m, clause); }
SddNode compile_clause(SddManager& m, const Clause& clause) {
  return clause_of<SddManager, SddNode>(m, clause);
}

VsSdd compile_cnf(VsManager& m, const Cnf& cnf, CompileStats* stats) {
  return compile<VsManager, VsSdd>(m, cnf, stats);
}

SddNode compile_cnf(SddManager& m, const Cnf& cnf, CompileStats* stats) {
  return compile<SddManager, SddNode>(m, cnf, stats);
}

namespace {

void at_most_one(std::vector<Clause>& out, const std::vector<int>& vars) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i + 1; j < vars.size(); ++j) out.push_back({-vars[i], -vars[j]});
}

}  // namespace

GeneratedInstance gen_nqueens(int n) {
  if (n < 1) throw InvalidInput("queens: N must be at least 1");
  auto var = [n](int r, int c) { return r * n + c + 1; };
  Cnf cnf;
  cnf.num_vars = static_cast<Var>(n * n);
  for (int r = 0; r < n; ++r) {
    Clause row;
    for (int c = 0; c < n; ++c) row.push_back(var(r, c));
    cnf.clauses.push_back(row);
  }
  for (int r = 0; r < n; ++r) {
    std::vector<int> line;
    for (int c = 0; c < n; ++c) line.push_back(var(r, c));
    at_most_one(cnf.clauses, line);
  }
  for (int c = 0; c < n; ++c) {
    std::vector<int> line;
    for (int r = 0; r < n; ++r) line.push_back(var(r, c));
    at_most_one(cnf.clauses, line);
  }
  // Diagonals r - c = s and anti-diagonals r + c = s.
  for (int s = -(n - 1); s <= n - 1; ++s) {
    std::vector<int> line;
    for (int r = 0; r < n; ++r)
      if (int c = r - s; c >= 0 && c < n) line.push_back(var(r, c));
    at_most_one(cnf.clauses, line);
  }
  for (int s = 0; s <= 2 * (n - 1); ++s) {
    std::vector<int> line;
    for (int r = 0; r < n; ++r)
      if (int c = s - r; c >= 0 && c < n) line.push_back(var(r, c));
    at_most_one(cnf.clauses, line);
  }
  Vtree vtree = Vtree::balanced(cnf.num_vars);
  return {"queens" + std::to_string(n), "queens", {n}, std::move(cnf), std::move(vtree), {}};
}

std::vector<std::pair<int, int>> grid_edges(int p, int q) {
  std::vector<std::pair<int, int>> edges;
  auto vertex = [q](int r, int c) { return r * q + c; };
  for (int r = 0; r < p; ++r)
    for (int c = 0; c + 1 < q; ++c) edges.emplace_back(vertex(r, c), vertex(r, c + 1));
  for (int r = 0; r + 1 < p; ++r)
    for (int c = 0; c < q; ++c) edges.emplace_back(vertex(r, c), vertex(r + 1, c));
  return edges;
}

GeneratedInstance gen_grid_matching(int p, int q) {
  if (p < 1 || q < 1) throw InvalidInput("grid: dimensions must be positive");
  const auto edges = grid_edges(p, q);
  if (edges.empty()) throw InvalidInput("grid: a 1x1 grid has no edges");
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(p * q));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    incident[edges[i].first].push_back(static_cast<int>(i + 1));
    incident[edges[i].second].push_back(static_cast<int>(i + 1));
  }
  Cnf cnf;
  cnf.num_vars = static_cast<Var>(edges.size());
  for (const auto& vars : incident) at_most_one(cnf.clauses, vars);
  Vtree vtree = Vtree::balanced(cnf.num_vars);
  return {"grid" + std::to_string(p) + "x" + std::to_string(q), "grid", {p, q}, std::move(cnf),
          std::move(vtree), {}};
}

namespace {

// Appends v_depth over the edge pair (a, b) to raw and returns its index.
std::size_t append_tree_vtree(std::vector<RawVtreeNode>& raw, Var a, Var b, int depth) {
  auto leaf = [&](Var x) {
    raw.push_back({x, 0, 0});
    return raw.size() - 1;
  };
  auto internal = [&](std::size_t l, std::size_t r) {
    raw.push_back({0, l, r});
    return raw.size() - 1;
  };
  if (depth == 1) return internal(leaf(a), leaf(b));
  const std::size_t la = leaf(a);
  const std::size_t y = append_tree_vtree(raw, 2 * a + 1, 2 * a + 2, depth - 1);
  const std::size_t left = internal(la, y);
  const std::size_t lb = leaf(b);
  const std::size_t z = append_tree_vtree(raw, 2 * b + 1, 2 * b + 2, depth - 1);
  const std::size_t right = internal(lb, z);
  return internal(left, right);
}

VsSdd no_both(VsManager& m, Var x, Var y) {
  return m.disjoin(m.literal(x, false), m.literal(y, false));
}

VsSdd build_tree_at(VsManager& m, NodeId u) {
  const Vtree& v = m.vtree();
  const NodeId l = v.left(u);
  const NodeId r = v.right(u);
  if (v.is_leaf(l)) return no_both(m, v.var_of(l), v.var_of(r));
  const Var a = v.var_of(v.left(l));
  const Var b = v.var_of(v.left(r));
  const NodeId y = v.right(l);
  const NodeId z = v.right(r);
  const VsSdd fy = build_tree_at(m, y);
  const VsSdd fz = m.shift(fy, *v.shift_delta(y, z));
  const Var y1 = 2 * a + 1;
  const Var y2 = 2 * a + 2;
  const Var z1 = 2 * b + 1;
  const Var z2 = 2 * b + 2;
  VsSdd acc = m.conjoin(fy, fz);
  acc = m.conjoin(acc, no_both(m, a, b));
  acc = m.conjoin(acc, no_both(m, a, y1));
  acc = m.conjoin(acc, no_both(m, a, y2));
  acc = m.conjoin(acc, no_both(m, b, z1));
  acc = m.conjoin(acc, no_both(m, b, z2));
  return acc;
}

}  // namespace

Vtree matching_tree_vtree(int j) {
  if (j < 1) throw InvalidInput("ftree: j must be at least 1");
  std::vector<RawVtreeNode> raw;
  const std::size_t root = append_tree_vtree(raw, 1, 2, j);
  return Vtree::from_raw(raw, root);
}

VsSdd build_matching_tree(VsManager& m) {
  if (m.mode() != Mode::kTrimmed) throw ContractViolation("ftree builder needs a trimmed manager");
  return build_tree_at(m, m.vtree().root());
}

GeneratedInstance gen_matching_tree(int j) {
  Vtree vtree = matching_tree_vtree(j);
  Cnf cnf;
  cnf.num_vars = static_cast<Var>((1u << (j + 1)) - 2);
  cnf.clauses.push_back({-1, -2});
  const int inner = (1 << j) - 2;
  for (int i = 1; i <= inner; ++i) {
    cnf.clauses.push_back({-i, -(2 * i + 1)});
    cnf.clauses.push_back({-i, -(2 * i + 2)});
    cnf.clauses.push_back({-(2 * i + 1), -(2 * i + 2)});
  }
  return {"ftree" + std::to_string(j), "ftree", {j}, std::move(cnf), std::move(vtree),
          [](VsManager& m) { return build_matching_tree(m); }};
}

}  // namespace vssdd
