#include <doctest.h>

#include "support.hpp"
#include "vssdd/error.hpp"

using namespace vssdd;

TEST_CASE("truth tables") {
  const Cnf a_or_b{2, {{1, 2}}};
  CHECK_FALSE(oracle::eval_cnf(a_or_b, 0));
  CHECK(oracle::eval_cnf(a_or_b, 2));
  CHECK_THROWS_AS(oracle::TruthTable(25), ResourceLimit);
  const Cnf f{4, {{1, 3}, {2, 3}, {2, 4}}};
  CHECK(oracle::table_of(f, 4).count() == 8);
  VsManager m(Vtree::balanced(4));
  CHECK(oracle::table_of(m, compile_cnf(m, f)) == oracle::table_of(f, 4));
}

TEST_CASE("essential vtree node") {
  const Vtree v = Vtree::balanced(4);
  const auto ab = oracle::table_of(4, [](std::uint64_t r) { return (r & 3) == 3; });
  CHECK(oracle::essential_vtree_node(ab, v) == 2);
  const auto a = oracle::table_of(4, [](std::uint64_t r) { return (r & 1) != 0; });
  CHECK(oracle::essential_vtree_node(a, v) == 3);
  const auto ad = oracle::table_of(4, [](std::uint64_t r) { return (r & 9) == 9; });
  CHECK(oracle::essential_vtree_node(ad, v) == 1);
  CHECK_FALSE(oracle::essential_vtree_node(oracle::TruthTable(4), v).has_value());
}

TEST_CASE("combinatorial counts") {
  CHECK(oracle::count_queens(1) == 1);
  CHECK(oracle::count_queens(4) == 2);
  CHECK(oracle::count_queens(5) == 10);
  CHECK(oracle::count_queens(6) == 4);
  CHECK_THROWS_AS(oracle::count_queens(7), ResourceLimit);
  CHECK(oracle::brute_solution_count(gen_grid_matching(2, 2)) == 7);
  CHECK(oracle::brute_solution_count(gen_matching_tree(2)) == 15);
  CHECK(oracle::brute_solution_count(gen_nqueens(4)) == 2);
  CHECK_THROWS_AS(oracle::count_matchings(grid_edges(4, 4)), ResourceLimit);
}

TEST_CASE("oracle tables agree with combinatorial counts") {
  for (int n = 1; n <= 4; ++n) {
    const auto inst = gen_nqueens(n);
    CHECK(oracle::table_of(inst.cnf, inst.cnf.num_vars).count() == oracle::brute_solution_count(inst));
  }
  for (auto [p, q] : {std::pair{1, 2}, {2, 2}, {2, 3}, {3, 3}}) {
    const auto inst = gen_grid_matching(p, q);
    CHECK(oracle::table_of(inst.cnf, inst.cnf.num_vars).count() == oracle::brute_solution_count(inst));
  }
  for (int j = 1; j <= 3; ++j) {
    const auto inst = gen_matching_tree(j);
    CHECK(oracle::table_of(inst.cnf, inst.cnf.num_vars).count() == oracle::brute_solution_count(inst));
  }
}
