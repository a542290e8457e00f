#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "vssdd/sdd.hpp"
#include "vssdd/vs_manager.hpp"

namespace vssdd {

using Clause = std::vector<int>;

struct Cnf {
  Var num_vars = 0;
  std::vector<Clause> clauses;

  friend bool operator==(const Cnf&, const Cnf&) = default;
};

/// DIMACS CNF. Comment lines start with `c`; a `%` token ends the clause
/// section (SATLIB style). A clause-count mismatch is reported through
/// `warnings` rather than thrown.
Cnf parse_dimacs(std::string_view text, std::vector<std::string>* warnings = nullptr);
std::string write_dimacs(const Cnf& cnf, const std::vector<std::string>& comments = {});

struct CompileStats {
  std::size_t size = 0;
  std::size_t node_count = 0;
  std::uint64_t apply_calls = 0;
  std::uint64_t cache_hits = 0;
  double seconds = 0;
};

/// Clauses are disjunction chains of literals, conjoined in file order.
VsSdd compile_cnf(VsManager& m, const Cnf& cnf, CompileStats* stats = nullptr);
SddNode compile_cnf(SddManager& m, const Cnf& cnf, CompileStats* stats = nullptr);
VsSdd compile_clause(VsManager& m, const Clause& clause);
SddNode compile_clause(SddManager& m, const Clause& clause);

struct GeneratedInstance {
  std::string name;
  std::string kind;
  std::vector<int> params;
  Cnf cnf;
  Vtree vtree;
  /// Direct construction bypassing clause-by-clause compilation; empty when
  /// the instance has none.
  std::function<VsSdd(VsManager&)> builder;
};

/// N*N variables, square (r, c) is variable r*N + c + 1.
GeneratedInstance gen_nqueens(int n);
/// Matchings of the p x q grid graph; one variable per edge, horizontal
/// edges row-major first, then vertical edges.
GeneratedInstance gen_grid_matching(int p, int q);
/// Matchings of the depth-j complete binary tree on the vtree v_j.
GeneratedInstance gen_matching_tree(int j);

/// The vtree v_j: internal(internal(X1, v_{j-1}(Y)), internal(X2, v_{j-1}(Z))).
Vtree matching_tree_vtree(int j);
/// Builds f_j on a manager over matching_tree_vtree(j): f_{j-1} is built once
/// on the left block and shifted onto the right block. Trimmed mode only.
VsSdd build_matching_tree(VsManager& m);

/// Grid edges as vertex index pairs, in variable order.
std::vector<std::pair<int, int>> grid_edges(int p, int q);

}  // namespace vssdd
