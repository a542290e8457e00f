#include <doctest.h>

#include "support.hpp"
#include "vssdd/error.hpp"
#include "vssdd/queries.hpp"

using namespace vssdd;

namespace {

VsSdd running_example(VsManager& m) {
  const VsSdd a = m.literal(1, true), b = m.literal(2, true), c = m.literal(3, true), d = m.literal(4, true);
  return m.disjoin(m.disjoin(m.conjoin(a, b), m.conjoin(b, c)), m.conjoin(c, d));
}

// (structure, offset) pairs of decompositions reachable from a.
std::vector<std::pair<StructId, NodeId>> instances(const VsManager& m, VsSdd a) {
  std::vector<std::pair<StructId, NodeId>> out;
  auto rec = [&](auto&& self, StructId s, NodeId k) -> void {
    if (m.structure(s).is_terminal()) return;
    out.emplace_back(s, k);
    for (const auto& e : m.structure(s).elements) {
      self(self, e.prime, k + e.d);
      self(self, e.sub, k + e.e);
    }
  };
  rec(rec, a.structure, a.offset);
  return out;
}

}  // namespace

TEST_CASE("constants and literal shapes") {
  VsManager m(Vtree::balanced(4));
  const VsSdd c = m.literal(3, true);
  CHECK(c.structure == VsManager::kLiteral);
  CHECK(c.offset == 6);
  CHECK(m.literal(1, true).structure == c.structure);
  CHECK(m.literal(1, true).offset == 3);
  CHECK(m.constant(true).structure == VsManager::kTrue);
  CHECK(m.constant(true).offset == 0);
  CHECK_THROWS(m.literal(9, true));
}

TEST_CASE("get_node trims and interns") {
  VsManager m(Vtree::balanced(4));
  CHECK(m.get_node({{VsManager::kTrue, 0, VsManager::kFalse, 0}}, 1) == NodeRef{VsManager::kFalse, 0});
  CHECK(m.get_node({{VsManager::kTrue, 0, VsManager::kTrue, 0}}, 1) == NodeRef{VsManager::kTrue, 0});
  CHECK(m.get_node({{VsManager::kTrue, 0, VsManager::kLiteral, 5}}, 1) == NodeRef{VsManager::kLiteral, 5});
  CHECK(m.get_node({{VsManager::kLiteral, 2, VsManager::kTrue, 0}, {VsManager::kNegLiteral, 2, VsManager::kFalse, 0}},
                   1) == NodeRef{VsManager::kLiteral, 2});
  const std::vector<VsElement> ab{{VsManager::kLiteral, 1, VsManager::kLiteral, 2},
                                  {VsManager::kNegLiteral, 1, VsManager::kFalse, 0}};
  const NodeRef x = m.get_node(ab, 2);
  const NodeRef y = m.get_node({ab[1], ab[0]}, 2);
  CHECK(x == y);
  CHECK(x.delta == 0);
  CHECK_THROWS_AS(m.get_node(ab, 5), ContractViolation);
  CHECK_THROWS_AS(m.get_node({{VsManager::kFalse, 0, VsManager::kTrue, 0}}, 1), InvariantViolation);
}

TEST_CASE("normalized apply shares cherries") {
  VsManager m(Vtree::balanced(4), Mode::kNormalized);
  const VsSdd ab = m.apply_normalized(m.literal_at(1, true, 2).structure, m.literal_at(2, true, 2).structure, 2, Op::kAnd);
  const VsSdd cd = m.apply_normalized(m.literal_at(3, true, 5).structure, m.literal_at(4, true, 5).structure, 5, Op::kAnd);
  CHECK(ab.structure == cd.structure);
  CHECK(ab.offset == 2);
  CHECK(cd.offset == 5);
  CHECK(m.apply(ab, ab, Op::kAnd) == ab);

  const VsSdd f = running_example(m);
  CHECK(count(m, f) == 8);
  const VsSdd g = m.apply_normalized(f.structure, VsManager::kTrue, f.offset, Op::kXor);
  CHECK(count(m, g) == 16 - 8);
  CHECK_THROWS_AS(m.apply(ab, cd, Op::kAnd), ContractViolation);
  CHECK_THROWS_AS(m.apply_trimmed(ab.structure, cd.structure, 2, 5, false, false, Op::kAnd), ContractViolation);
}

TEST_CASE("trimmed apply cases") {
  VsManager m(Vtree::balanced(4));
  const VsSdd bottom = m.apply_trimmed(VsManager::kLiteral, VsManager::kNegLiteral, 3, 3, false, false, Op::kAnd);
  CHECK(bottom == m.constant(false));
  const VsSdd ac = m.apply_trimmed(VsManager::kLiteral, VsManager::kLiteral, 3, 6, false, false, Op::kAnd);
  CHECK(ac.offset == 1);
  CHECK(oracle::table_of(m, ac) == oracle::table_of(4, [](std::uint64_t r) { return (r & 1) && (r & 4); }));
  const VsSdd not_a = m.apply_trimmed(VsManager::kLiteral, VsManager::kTrue, 3, 0, true, false, Op::kAnd);
  CHECK(not_a == m.literal(1, false));
  CHECK_THROWS_AS(m.apply_normalized(VsManager::kLiteral, VsManager::kLiteral, 3, Op::kAnd), ContractViolation);
}

TEST_CASE("expand") {
  VsManager m(Vtree::balanced(4));
  const VsSdd ab = m.conjoin(m.literal(1, true), m.literal(2, true));
  const auto own = m.expand(ab.structure, false, 2, 2);
  REQUIRE(own.size() == m.structure(ab.structure).elements.size());
  for (std::size_t i = 0; i < own.size(); ++i) {
    CHECK(own[i].element == m.structure(ab.structure).elements[i]);
    CHECK_FALSE(own[i].prime_negated);
    CHECK_FALSE(own[i].sub_negated);
  }
  const auto left = m.expand(VsManager::kLiteral, false, 3, 1);
  REQUIRE(left.size() == 2);
  CHECK(left[0].element == VsElement{VsManager::kLiteral, 0, VsManager::kTrue, 0});
  CHECK(left[1].element == VsElement{VsManager::kLiteral, 0, VsManager::kFalse, 0});
  CHECK(left[1].prime_negated);
  const auto right = m.expand(VsManager::kLiteral, true, 6, 1);
  REQUIRE(right.size() == 1);
  CHECK(right[0].element == VsElement{VsManager::kTrue, 0, VsManager::kLiteral, 0});
  CHECK(right[0].sub_negated);
  CHECK_THROWS_AS(m.expand(VsManager::kLiteral, false, 6, 2), ContractViolation);
}

TEST_CASE("consistency, negation and conditioning") {
  VsManager m(Vtree::balanced(4));
  CHECK_FALSE(m.consistent(VsManager::kFalse));
  CHECK(m.consistent(VsManager::kLiteral));
  CHECK(m.consistent(VsManager::kNegLiteral));
  const VsSdd f = running_example(m);
  CHECK(m.consistent(f.structure));
  CHECK(m.negate(m.constant(true)) == m.constant(false));
  CHECK(m.negate(m.negate(f)) == f);
  CHECK(count(m, m.negate(f)) == 8);

  const VsSdd fb = m.condition(f, Term{{2, true}});
  const VsSdd a_or_c = m.disjoin(m.literal(1, true), m.literal(3, true));
  CHECK(fb == a_or_c);
  CHECK(m.condition(f, Term{}) == f);
  CHECK_THROWS_AS(Term({{1, true}, {1, false}}), InvalidTerm);
}

TEST_CASE("running example sizes and sharing") {
  VsManager m(Vtree::balanced(4));
  const VsSdd f = running_example(m);
  CHECK(m.size(m.constant(true)) == 0);
  CHECK(m.size(f) <= 9);
  CHECK(m.size(f) == 7);
  CHECK(m.unshared_size(f) == 9);
  SddManager sdd(m.vtree());
  const SddNode g = m.to_baseline_sdd(f, sdd);
  CHECK(sdd.size(g) == 9);
  CHECK(m.to_baseline_sdd(m.constant(false), sdd) == sdd.constant(false));

  const VsSdd ab = m.conjoin(m.literal(1, true), m.literal(2, true));
  const VsSdd cd = m.conjoin(m.literal(3, true), m.literal(4, true));
  CHECK(ab.structure == cd.structure);
  CHECK(ab.offset == 2);
  CHECK(cd.offset == 5);
  std::vector<NodeId> offsets;
  for (auto [s, k] : instances(m, f))
    if (s == ab.structure) offsets.push_back(k);
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  CHECK(offsets == std::vector<NodeId>{2, 5});
}

TEST_CASE("apply semantics on random functions, every mode") {
  for (int t = 0; t < 60; ++t) {
    const Var n = static_cast<Var>(support::uniform(1, 7));
    const Vtree v = support::random_vtree(n);
    const auto ta = support::random_table(n);
    const auto tb = support::random_table(n);
    for (Mode mode : {Mode::kTrimmed, Mode::kNormalized}) {
      for (bool compress : {true, false}) {
        VsManager m(v, mode, compress);
        const VsSdd a = support::from_table(m, ta);
        const VsSdd b = support::from_table(m, tb);
        for (Op op : {Op::kAnd, Op::kOr, Op::kXor})
          REQUIRE(oracle::table_of(m, m.apply(a, b, op)) == oracle::combine(ta, tb, op));
        REQUIRE(oracle::table_of(m, m.negate(a)) == oracle::negate(ta));
        REQUIRE(count(m, a) == ta.count());
        CHECK(m.identical_vtree_rule_violations(std::vector<VsSdd>{a, b}).empty());
        CHECK(oracle::audit_partitions(m, a).empty());
        CHECK(m.size(a) <= m.unshared_size(a));
      }
    }
  }
}

TEST_CASE("compressed trimmed diagrams match the baseline sdd") {
  for (int t = 0; t < 60; ++t) {
    const Var n = static_cast<Var>(support::uniform(1, 9));
    const Vtree v = support::random_vtree(n);
    const Cnf cnf = support::random_cnf(n, support::uniform(1, 10));
    VsManager m(v);
    SddManager s(v);
    const VsSdd f = compile_cnf(m, cnf);
    const SddNode g = compile_cnf(s, cnf);
    CHECK(m.to_baseline_sdd(f, s) == g);
    CHECK(m.unshared_size(f) == s.size(g));
    CHECK(m.size(f) <= s.size(g));
    const auto table = oracle::table_of(cnf, n);
    if (const auto node = oracle::essential_vtree_node(table, v)) CHECK(f.offset == *node);
    else CHECK(f.offset == 0);
  }
}

TEST_CASE("shifted copies share structure") {
  for (int t = 0; t < 20; ++t) {
    const int k = support::uniform(2, 4);
    const Vtree v = Vtree::balanced(static_cast<Var>(2 * k));
    VsManager m(v);
    const auto h = support::random_table(static_cast<Var>(k));
    const VsSdd lo = support::from_table(m, h);
    // Same function over variables k+1..2k.
    auto rec = [&](auto&& self, Var x, std::uint64_t fixed) -> VsSdd {
      if (x > static_cast<Var>(k)) return m.constant(h.get(fixed));
      const VsSdd f0 = self(self, x + 1, fixed);
      const VsSdd f1 = self(self, x + 1, fixed | (std::uint64_t{1} << (x - 1)));
      const Var y = x + static_cast<Var>(k);
      return m.disjoin(m.conjoin(m.literal(y, true), f1), m.conjoin(m.literal(y, false), f0));
    };
    const VsSdd hi = rec(rec, 1, 0);
    CHECK(lo.structure == hi.structure);
    if (lo.offset != 0) {
      CHECK(std::int64_t{hi.offset} - lo.offset == *v.shift_delta(v.left(1), v.right(1)));
      CHECK(m.shift(lo, *v.shift_delta(v.left(1), v.right(1))) == hi);
    }
  }
}

TEST_CASE("handles from another manager are rejected") {
  VsManager a(Vtree::balanced(3));
  VsManager b(Vtree::balanced(3));
  CHECK_THROWS_AS(a.conjoin(a.literal(1, true), b.literal(2, true)), ContractViolation);
  CHECK_THROWS_AS(a.shift(a.literal(1, true), 100), ContractViolation);
  CHECK_THROWS_AS(a.check(VsSdd{a.tag(), VsManager::kTrue, 2}), ContractViolation);
}

TEST_CASE("intern_raw validates deltas") {
  VsManager m(Vtree::balanced(4));
  const VsSdd ab = m.conjoin(m.literal(1, true), m.literal(2, true));
  auto elements = m.structure(ab.structure).elements;
  CHECK(m.intern_raw(elements, 2) == ab.structure);
  auto bad = elements;
  bad[0].d = 2;
  CHECK_THROWS_AS(m.intern_raw(bad, 2), ContractViolation);
  CHECK_THROWS_AS(m.intern_raw(elements, 5), ContractViolation);
}
