#include "vssdd/queries.hpp"

#include <algorithm>
#include <set>

#include "vssdd/error.hpp"

namespace vssdd {

namespace {

BigInt pow2(std::size_t n) { return BigInt(1) << n; }

}  // namespace

// Count of (a, k) over the variables of the subtree at `scope`, which
// contains k.
BigInt CountContext::factor(StructId a, NodeId k, NodeId scope) {
  const Vtree& v = manager_->vtree();
  const std::size_t width = v.leaf_count(scope);
  if (a == VsManager::kFalse) return 0;
  if (a == VsManager::kTrue) return pow2(width);
  if (a == VsManager::kLiteral || a == VsManager::kNegLiteral) return pow2(width - 1);
  return count_below(a, k) << (width - v.leaf_count(k));
}

BigInt CountContext::count_below(StructId a, NodeId k) {
  if (auto it = cache_.find(a); it != cache_.end()) return it->second;
  ++visits_;
  const Vtree& v = manager_->vtree();
  const NodeId l = v.left(k);
  const NodeId r = v.right(k);
  BigInt total = 0;
  for (const auto& e : manager_->structure(a).elements) {
    BigInt np = factor(e.prime, e.prime <= VsManager::kTrue ? 0 : k + e.d, l);
    if (np == 0) continue;
    total += np * factor(e.sub, e.sub <= VsManager::kTrue ? 0 : k + e.e, r);
  }
  cache_.emplace(a, total);
  return total;
}

BigInt CountContext::count_local(VsSdd a) {
  manager_->check(a);
  if (a.offset == 0) return a.structure == VsManager::kTrue ? 1 : 0;
  return factor(a.structure, a.offset, a.offset);
}

BigInt CountContext::count(VsSdd a) {
  manager_->check(a);
  const Vtree& v = manager_->vtree();
  return factor(a.structure, a.offset, v.root());
}

BigInt count(const VsManager& m, VsSdd a) { return CountContext(m).count(a); }

BigInt count(VsManager& m, VsSdd a, std::span<const Var> universe) {
  const Vtree& v = m.vtree();
  std::set<Var> in_universe(universe.begin(), universe.end());
  std::size_t outside = 0;
  for (Var x : in_universe) {
    if (x == 0) throw InvalidUniverse("count: variable 0 in universe");
    if (x > v.num_vars()) ++outside;
  }
  std::size_t missing = 0;
  for (Var x = 1; x <= v.num_vars(); ++x) {
    if (in_universe.count(x)) continue;
    const VsSdd pos = m.condition(a, Term{Literal{x, true}});
    const VsSdd neg = m.condition(a, Term{Literal{x, false}});
    if (!equivalent(m, pos, neg))
      throw InvalidUniverse("count: universe omits essential variable " + std::to_string(x));
    ++missing;
  }
  return (CountContext(m).count(a) << outside) >> missing;
}

namespace {

class Enumerator {
 public:
  Enumerator(const VsManager& m, const std::function<bool(const Model&)>& emit, std::uint64_t limit)
      : m_(m), v_(m.vtree()), emit_(emit), limit_(limit), model_(v_.num_vars() + 1, false) {}

  std::uint64_t run(VsSdd a) {
    models(a.structure, a.offset, v_.root(), [this] { return output(); });
    return emitted_;
  }

 private:
  using Cont = std::function<bool()>;

  bool output() {
    ++emitted_;
    if (!emit_(model_)) return false;
    return limit_ == 0 || emitted_ < limit_;
  }

  bool free_vars(const std::vector<Var>& vars, std::size_t i, const Cont& cont) {
    if (i == vars.size()) return cont();
    for (bool value : {false, true}) {
      model_[vars[i]] = value;
      if (!free_vars(vars, i + 1, cont)) return false;
    }
    model_[vars[i]] = false;
    return true;
  }

  // Models of (a, k) over the variables of scope; k is 0 or below scope.
  bool models(StructId a, NodeId k, NodeId scope, const Cont& cont) {
    if (a == VsManager::kFalse) return true;
    std::vector<Var> gap;
    for (Var x : v_.variables_under(scope)) {
      if (k == 0 || !v_.contains(k, v_.leaf_of(x))) gap.push_back(x);
    }
    if (gap.empty()) return structure_models(a, k, cont);
    return free_vars(gap, 0, [&] { return structure_models(a, k, cont); });
  }

  bool structure_models(StructId a, NodeId k, const Cont& cont) {
    if (a == VsManager::kTrue) return cont();
    if (a == VsManager::kLiteral || a == VsManager::kNegLiteral) {
      const Var x = v_.var_of(k);
      model_[x] = a == VsManager::kLiteral;
      const bool more = cont();
      model_[x] = false;
      return more;
    }
    const NodeId l = v_.left(k);
    const NodeId r = v_.right(k);
    for (const auto& e : m_.structure(a).elements) {
      const NodeId kp = e.prime <= VsManager::kTrue ? 0 : k + e.d;
      const NodeId ks = e.sub <= VsManager::kTrue ? 0 : k + e.e;
      const bool more = models(e.prime, kp, l, [&] { return models(e.sub, ks, r, cont); });
      if (!more) return false;
    }
    return true;
  }

  const VsManager& m_;
  const Vtree& v_;
  const std::function<bool(const Model&)>& emit_;
  std::uint64_t limit_;
  std::uint64_t emitted_ = 0;
  Model model_;
};

}  // namespace

std::uint64_t enumerate_models(const VsManager& m, VsSdd a,
                               const std::function<bool(const Model&)>& emit, std::uint64_t limit) {
  m.check(a);
  return Enumerator(m, emit, limit).run(a);
}

std::vector<Model> models(const VsManager& m, VsSdd a, std::uint64_t limit) {
  std::vector<Model> out;
  enumerate_models(
      m, a,
      [&](const Model& x) {
        out.push_back(x);
        return true;
      },
      limit);
  return out;
}

std::string format_model(const Model& model) {
  std::string out;
  for (std::size_t x = 1; x < model.size(); ++x) {
    if (x > 1) out += ' ';
    out += 'X' + std::to_string(x) + (model[x] ? "=1" : "=0");
  }
  return out;
}

bool entails(VsManager& m, VsSdd a, VsSdd b) {
  const VsSdd both = m.apply_with_compression(a, b, Op::kAnd, false);
  CountContext ctx(m);
  return ctx.count(both) == ctx.count(a);
}

bool equivalent(VsManager& m, VsSdd a, VsSdd b) {
  m.check(a);
  m.check(b);
  if (m.canonical()) return a == b;
  return entails(m, a, b) && entails(m, b, a);
}

bool satisfiable(VsManager& m, VsSdd a) {
  m.check(a);
  return m.consistent(a.structure);
}

bool valid(VsManager& m, VsSdd a) { return !satisfiable(m, m.negate(a)); }

bool clausal_entails(VsManager& m, VsSdd a, std::span<const Literal> clause) {
  std::vector<Literal> negated;
  negated.reserve(clause.size());
  for (const auto& l : clause) {
    const bool tautology = std::any_of(clause.begin(), clause.end(), [&](const Literal& o) {
      return o.var == l.var && o.positive != l.positive;
    });
    if (tautology) return true;
    negated.push_back(l.negated());
  }
  return !satisfiable(m, m.condition(a, Term(negated)));
}

bool is_implicant(VsManager& m, VsSdd a, const Term& term) { return valid(m, m.condition(a, term)); }

VsSdd forget_singleton(VsManager& m, VsSdd a, Var x) {
  const VsSdd pos = m.condition(a, Term{Literal{x, true}});
  const VsSdd neg = m.condition(a, Term{Literal{x, false}});
  return m.disjoin(pos, neg);
}

}  // namespace vssdd
