#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vssdd/frontend.hpp"
#include "vssdd/sdd.hpp"
#include "vssdd/vs_manager.hpp"

namespace vssdd::oracle {

inline constexpr Var kMaxVars = 24;

/// Truth table over variables 1..m. Row r assigns variable x the bit
/// (r >> (x - 1)) & 1.
class TruthTable {
 public:
  explicit TruthTable(Var num_vars);

  Var num_vars() const { return num_vars_; }
  std::uint64_t rows() const { return std::uint64_t{1} << num_vars_; }
  bool get(std::uint64_t row) const { return bits_[row]; }
  void set(std::uint64_t row, bool value) { bits_[row] = value; }
  std::uint64_t count() const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  Var num_vars_;
  std::vector<bool> bits_;
};

bool eval_cnf(const Cnf& cnf, std::uint64_t row);
/// Evaluates by descending the diagram from (structure, offset).
bool evaluate(const VsManager& m, VsSdd a, std::uint64_t row);
bool evaluate(const SddManager& m, SddNode a, std::uint64_t row);

TruthTable table_of(Var num_vars, const std::function<bool(std::uint64_t)>& f);
TruthTable table_of(const Cnf& cnf, Var num_vars);
TruthTable table_of(const VsManager& m, VsSdd a);
TruthTable table_of(const SddManager& m, SddNode a);

TruthTable combine(const TruthTable& a, const TruthTable& b, Op op);
TruthTable negate(const TruthTable& a);
/// f|x=value, still over all variables (x becomes irrelevant).
TruthTable restrict(const TruthTable& a, Var x, bool value);
TruthTable restrict(const TruthTable& a, const Term& term);
TruthTable forget(const TruthTable& a, Var x);

/// Variables x with f|x != f|not x.
std::vector<Var> essential_variables(const TruthTable& a);
/// Deepest vtree node covering every essential variable; nullopt for
/// constant functions.
std::optional<NodeId> essential_vtree_node(const TruthTable& a, const Vtree& vtree);

std::uint64_t count_queens(int n);
/// Matchings of a graph given as an edge list (subset scan).
std::uint64_t count_matchings(const std::vector<std::pair<int, int>>& edges);
/// Edges of the depth-j complete binary tree; edge i ends in vertex i.
std::vector<std::pair<int, int>> binary_tree_edges(int j);
/// Combinatorial solution count of a generated instance.
std::uint64_t brute_solution_count(const GeneratedInstance& instance);

/// Checks every decomposition instance reachable from `a` for the
/// X-partition property; returns one message per problem.
std::vector<std::string> audit_partitions(const VsManager& m, VsSdd a);

}  // namespace vssdd::oracle
