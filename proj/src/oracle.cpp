#include "vssdd/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "vssdd/error.hpp"

namespace vssdd::oracle {

namespace {

bool bit(std::uint64_t row, Var x) { return (row >> (x - 1)) & 1u; }

void require_small(Var n) {
  if (n > kMaxVars)
    throw ResourceLimit("oracle: " + std::to_string(n) + " variables exceed the limit of " +
                        std::to_string(kMaxVars));
}

}  // namespace

TruthTable::TruthTable(Var num_vars) : num_vars_(num_vars) {
  require_small(num_vars);
  bits_.assign(std::size_t{1} << num_vars, false);
}

std::uint64_t TruthTable::count() const {
  return static_cast<std::uint64_t>(std::count(bits_.begin(), bits_.end(), true));
}

bool eval_cnf(const Cnf& cnf, std::uint64_t row) {
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int lit : clause) {
      if (bit(row, static_cast<Var>(std::abs(lit))) == (lit > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

namespace {

bool eval_at(const VsManager& m, StructId s, NodeId k, std::uint64_t row) {
  if (s == VsManager::kFalse) return false;
  if (s == VsManager::kTrue) return true;
  const Var x = m.vtree().var_of(k);
  if (s == VsManager::kLiteral) return bit(row, x);
  if (s == VsManager::kNegLiteral) return !bit(row, x);
  for (const auto& e : m.structure(s).elements) {
    if (eval_at(m, e.prime, k + e.d, row)) return eval_at(m, e.sub, k + e.e, row);
  }
  return false;
}

bool eval_sdd(const SddManager& m, SddId id, std::uint64_t row, std::uint64_t tag) {
  const auto& n = m.node({tag, id});
  switch (n.kind) {
    case SddManager::Kind::kFalse: return false;
    case SddManager::Kind::kTrue: return true;
    case SddManager::Kind::kLiteral: return bit(row, n.var) == n.positive;
    case SddManager::Kind::kDecomposition:
      for (const auto& e : n.elements)
        if (eval_sdd(m, e.prime, row, tag)) return eval_sdd(m, e.sub, row, tag);
      return false;
  }
  return false;
}

}  // namespace

bool evaluate(const VsManager& m, VsSdd a, std::uint64_t row) {
  m.check(a);
  return eval_at(m, a.structure, a.offset, row);
}

bool evaluate(const SddManager& m, SddNode a, std::uint64_t row) {
  return eval_sdd(m, a.id, row, a.manager);
}

TruthTable table_of(Var num_vars, const std::function<bool(std::uint64_t)>& f) {
  TruthTable t(num_vars);
  for (std::uint64_t r = 0; r < t.rows(); ++r) t.set(r, f(r));
  return t;
}

TruthTable table_of(const Cnf& cnf, Var num_vars) {
  return table_of(num_vars, [&](std::uint64_t r) { return eval_cnf(cnf, r); });
}

TruthTable table_of(const VsManager& m, VsSdd a) {
  return table_of(m.vtree().num_vars(), [&](std::uint64_t r) { return evaluate(m, a, r); });
}

TruthTable table_of(const SddManager& m, SddNode a) {
  return table_of(m.vtree().num_vars(), [&](std::uint64_t r) { return evaluate(m, a, r); });
}

TruthTable combine(const TruthTable& a, const TruthTable& b, Op op) {
  if (a.num_vars() != b.num_vars()) throw InvalidInput("oracle: tables over different variables");
  return table_of(a.num_vars(), [&](std::uint64_t r) { return eval_op(op, a.get(r), b.get(r)); });
}

TruthTable negate(const TruthTable& a) {
  return table_of(a.num_vars(), [&](std::uint64_t r) { return !a.get(r); });
}

TruthTable restrict(const TruthTable& a, Var x, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (x - 1);
  return table_of(a.num_vars(), [&](std::uint64_t r) { return a.get(value ? (r | mask) : (r & ~mask)); });
}

TruthTable restrict(const TruthTable& a, const Term& term) {
  TruthTable out = a;
  for (const auto& l : term.literals()) out = restrict(out, l.var, l.positive);
  return out;
}

TruthTable forget(const TruthTable& a, Var x) {
  return combine(restrict(a, x, true), restrict(a, x, false), Op::kOr);
}

std::vector<Var> essential_variables(const TruthTable& a) {
  std::vector<Var> out;
  for (Var x = 1; x <= a.num_vars(); ++x)
    if (!(restrict(a, x, true) == restrict(a, x, false))) out.push_back(x);
  return out;
}

std::optional<NodeId> essential_vtree_node(const TruthTable& a, const Vtree& vtree) {
  const auto vars = essential_variables(a);
  if (vars.empty()) return std::nullopt;
  std::optional<NodeId> best;
  for (NodeId u = 1; u <= vtree.num_nodes(); ++u) {
    const auto under = vtree.variables_under(u);
    const std::set<Var> have(under.begin(), under.end());
    const bool covers = std::all_of(vars.begin(), vars.end(), [&](Var x) { return have.count(x) > 0; });
    if (covers && (!best || vtree.depth(u) > vtree.depth(*best))) best = u;
  }
  return best;
}

std::uint64_t count_queens(int n) {
  if (n < 1) throw InvalidInput("queens: N must be at least 1");
  if (n > 6) throw ResourceLimit("oracle: queens backtracking limited to N <= 6");
  std::vector<int> col(n, -1);
  auto rec = [&](auto&& self, int r) -> std::uint64_t {
    if (r == n) return 1;
    std::uint64_t total = 0;
    for (int c = 0; c < n; ++c) {
      bool ok = true;
      for (int pr = 0; pr < r && ok; ++pr)
        ok = col[pr] != c && std::abs(col[pr] - c) != r - pr;
      if (!ok) continue;
      col[r] = c;
      total += self(self, r + 1);
    }
    return total;
  };
  return rec(rec, 0);
}

std::uint64_t count_matchings(const std::vector<std::pair<int, int>>& edges) {
  if (edges.size() > 20) throw ResourceLimit("oracle: matching scan limited to 20 edges");
  std::uint64_t total = 0;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << edges.size()); ++subset) {
    std::set<int> used;
    bool ok = true;
    for (std::size_t i = 0; i < edges.size() && ok; ++i) {
      if (!((subset >> i) & 1u)) continue;
      ok = used.insert(edges[i].first).second && used.insert(edges[i].second).second;
    }
    total += ok;
  }
  return total;
}

std::vector<std::pair<int, int>> binary_tree_edges(int j) {
  std::vector<std::pair<int, int>> edges;
  const int n = (1 << (j + 1)) - 2;
  for (int i = 1; i <= n; ++i) edges.emplace_back(i <= 2 ? 0 : (i - 1) / 2, i);
  return edges;
}

std::uint64_t brute_solution_count(const GeneratedInstance& instance) {
  if (instance.kind == "queens") return count_queens(instance.params.at(0));
  if (instance.kind == "grid") return count_matchings(grid_edges(instance.params.at(0), instance.params.at(1)));
  if (instance.kind == "ftree") return count_matchings(binary_tree_edges(instance.params.at(0)));
  throw InvalidInput("oracle: no combinatorial count for kind '" + instance.kind + "'");
}

std::vector<std::string> audit_partitions(const VsManager& m, VsSdd a) {
  m.check(a);
  const Var n = m.vtree().num_vars();
  require_small(n);
  std::vector<std::string> problems;
  std::set<std::pair<StructId, NodeId>> seen;
  auto rec = [&](auto&& self, StructId s, NodeId k) -> void {
    const auto& st = m.structure(s);
    if (st.is_terminal() || !seen.insert({s, k}).second) return;
    std::vector<TruthTable> primes;
    for (const auto& e : st.elements) {
      const VsSdd p{m.tag(), e.prime, e.prime <= VsManager::kTrue ? 0 : k + e.d};
      primes.push_back(table_of(m, p));
      self(self, e.prime, k + e.d);
      self(self, e.sub, k + e.e);
    }
    const std::string where = "structure " + std::to_string(s) + " at " + std::to_string(k);
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << n); ++r) {
      int hits = 0;
      for (const auto& p : primes) hits += p.get(r);
      if (hits != 1) {
        problems.push_back(where + ": primes are not a partition");
        return;
      }
    }
    for (const auto& p : primes)
      if (p.count() == 0) problems.push_back(where + ": false prime");
  };
  rec(rec, a.structure, a.offset);
  return problems;
}

}  // namespace vssdd::oracle
