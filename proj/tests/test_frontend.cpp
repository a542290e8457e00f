#include <doctest.h>

#include "support.hpp"
#include "vssdd/error.hpp"
#include "vssdd/queries.hpp"

using namespace vssdd;

TEST_CASE("dimacs parsing") {
  const Cnf cnf = parse_dimacs("c hello\np cnf 3 2\n1 -2 0\n2 3 0\n");
  CHECK(cnf.num_vars == 3);
  CHECK(cnf.clauses == std::vector<Clause>{{1, -2}, {2, 3}});
  VsManager m(Vtree::balanced(3));
  CHECK(count(m, compile_cnf(m, cnf)) == 4);
  CHECK(oracle::table_of(cnf, 3).count() == 4);

  const Cnf empty = parse_dimacs("p cnf 0 0\n");
  CHECK(empty.clauses.empty());
  CHECK(compile_cnf(m, empty) == m.constant(true));

  const Cnf spread = parse_dimacs("p cnf 4 2\n  1   2\n -3 0 4\n0\n%\n0\n");
  CHECK(spread.clauses == std::vector<Clause>{{1, 2, -3}, {4}});

  std::vector<std::string> warnings;
  parse_dimacs("p cnf 2 3\n1 0\n", &warnings);
  CHECK(warnings.size() == 1);

  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs(""), ParseError);
  try {
    parse_dimacs("p cnf 2 1\n\n1 x 0\n");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK(parse_dimacs(write_dimacs(spread, {"round trip"})) == spread);
}

TEST_CASE("compilation edge cases") {
  VsManager m(Vtree::balanced(3));
  Cnf with_empty{3, {{1, 2}, {}, {3}}};
  CHECK(compile_cnf(m, with_empty) == m.constant(false));
  Cnf outside{5, {{5}}};
  CHECK_THROWS_AS(compile_cnf(m, outside), InvalidInput);

  CompileStats stats;
  const Cnf cnf{3, {{1, 2}, {-1, 3}}};
  const VsSdd f = compile_cnf(m, cnf, &stats);
  CHECK(stats.size == m.size(f));
  CHECK(stats.seconds >= 0);
}

TEST_CASE("running example via cnf") {
  // (A or B) and (B or C) and (C or D) is not f; build f from its CNF:
  // f = (A and B) or (B and C) or (C and D) = (A or C) and (B or C) and (B or D).
  const Cnf cnf{4, {{1, 3}, {2, 3}, {2, 4}}};
  SddManager s(Vtree::balanced(4));
  CHECK(s.size(compile_cnf(s, cnf)) == 9);
  VsManager m(Vtree::balanced(4));
  const VsSdd f = compile_cnf(m, cnf);
  CHECK(m.size(f) <= 9);
  CHECK(count(m, f) == 8);
}

TEST_CASE("queens generator") {
  const auto q4 = gen_nqueens(4);
  CHECK(q4.cnf.num_vars == 16);
  CHECK(q4.vtree.num_vars() == 16);
  CHECK(q4.cnf.clauses[0] == Clause{1, 2, 3, 4});
  const std::pair<int, int> cases[] = {{1, 1}, {4, 2}, {5, 10}};
  for (auto [n, expected] : cases) {
    const auto inst = gen_nqueens(n);
    VsManager m(inst.vtree);
    CHECK(count(m, compile_cnf(m, inst.cnf)) == expected);
  }
  CHECK_THROWS_AS(gen_nqueens(0), InvalidInput);
}

TEST_CASE("grid generator") {
  const auto g22 = gen_grid_matching(2, 2);
  CHECK(g22.cnf.num_vars == 4);
  VsManager m(g22.vtree);
  CHECK(count(m, compile_cnf(m, g22.cnf)) == 7);
  const auto g12 = gen_grid_matching(1, 2);
  CHECK(g12.cnf.num_vars == 1);
  VsManager m12(g12.vtree);
  CHECK(count(m12, compile_cnf(m12, g12.cnf)) == 2);
  const auto g23 = gen_grid_matching(2, 3);
  VsManager m23(g23.vtree);
  CHECK(count(m23, compile_cnf(m23, g23.cnf)) == oracle::count_matchings(grid_edges(2, 3)));
  CHECK_THROWS_AS(gen_grid_matching(1, 1), InvalidInput);
  CHECK(grid_edges(2, 2) == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {0, 2}, {1, 3}});
}

TEST_CASE("matching tree generator") {
  const auto f1 = gen_matching_tree(1);
  CHECK(f1.cnf.num_vars == 2);
  CHECK(f1.cnf.clauses.size() == 1);
  const auto f2 = gen_matching_tree(2);
  CHECK(f2.cnf.num_vars == 6);
  CHECK(f2.vtree.num_vars() == 6);
  VsManager m(f2.vtree);
  const VsSdd f = compile_cnf(m, f2.cnf);
  CHECK(count(m, f) == 15);
  CHECK(f2.builder(m) == f);
  CHECK_THROWS_AS(gen_matching_tree(0), InvalidInput);

  // v_2: root, (X1, v_1(X3, X4)), (X2, v_1(X5, X6)).
  const Vtree& v = f2.vtree;
  CHECK(v.var_of(3) == 1);
  CHECK(v.var_of(5) == 3);
  CHECK(v.var_of(6) == 4);
  CHECK(v.iso_class(v.right(v.right(1))) == 4);

  for (int j = 1; j <= 3; ++j) {
    const auto inst = gen_matching_tree(j);
    const auto table = oracle::table_of(inst.cnf, inst.cnf.num_vars);
    CHECK(oracle::essential_variables(table).size() == inst.cnf.num_vars);
    VsManager mj(inst.vtree);
    CHECK(inst.builder(mj) == compile_cnf(mj, inst.cnf));
  }
}

TEST_CASE("clause order does not change canonical results") {
  for (int t = 0; t < 50; ++t) {
    const Var n = static_cast<Var>(support::uniform(2, 9));
    VsManager m(support::random_standard_vtree(n));
    Cnf cnf = support::random_cnf(n, support::uniform(2, 12));
    const VsSdd a = compile_cnf(m, cnf);
    std::shuffle(cnf.clauses.begin(), cnf.clauses.end(), support::rng());
    CHECK(compile_cnf(m, cnf) == a);
  }
}
