#include "vssdd/sdd.hpp"

#include <algorithm>
#include <map>

#include "vssdd/error.hpp"

namespace vssdd {

namespace detail {
std::uint64_t next_manager_tag();
}

std::size_t SddManager::UniqueKeyHash::operator()(const UniqueKey& k) const {
  std::size_t h = k.vnode;
  for (const auto& e : k.elements) {
    detail::hash_combine(h, e.prime);
    detail::hash_combine(h, e.sub);
  }
  return h;
}

std::size_t SddManager::ApplyKeyHash::operator()(const std::tuple<SddId, SddId, Op>& k) const {
  std::size_t h = std::get<0>(k);
  detail::hash_combine(h, std::get<1>(k));
  detail::hash_combine(h, static_cast<std::size_t>(std::get<2>(k)));
  return h;
}

SddManager::SddManager(Vtree vtree)
    : vtree_(std::move(vtree)), tag_(detail::next_manager_tag()) {
  nodes_.push_back({Kind::kFalse, 0, 0, false, {}});
  nodes_.push_back({Kind::kTrue, 0, 0, true, {}});
  literal_ids_.assign(2 * (vtree_.num_vars() + 1), 0);
}

void SddManager::check(SddNode a) const {
  if (a.manager != tag_) throw ContractViolation("sdd: node belongs to a different manager");
  if (a.id >= nodes_.size()) throw ContractViolation("sdd: unknown node id");
}

const SddManager::NodeData& SddManager::node(SddNode a) const {
  check(a);
  return nodes_[a.id];
}

SddId SddManager::literal_id(Var var, bool positive) {
  const NodeId leaf = vtree_.leaf_of(var);
  SddId& slot = literal_ids_[2 * var + (positive ? 1 : 0)];
  if (slot == 0) {
    slot = static_cast<SddId>(nodes_.size());
    nodes_.push_back({Kind::kLiteral, leaf, var, positive, {}});
  }
  return slot;
}

SddNode SddManager::literal(Var var, bool positive) { return {tag_, literal_id(var, positive)}; }

SddId SddManager::make_node(NodeId v, std::vector<Element> elements) {
  // Compression: OR together primes sharing a sub.
  std::map<SddId, SddId> by_sub;
  for (const auto& e : elements) {
    if (e.prime == kFalseId) continue;
    auto [it, fresh] = by_sub.try_emplace(e.sub, e.prime);
    if (!fresh) it->second = apply_id(it->second, e.prime, Op::kOr);
  }
  if (by_sub.empty()) throw InvariantViolation("sdd: decomposition with no consistent prime");
  // Trimming.
  if (by_sub.size() == 1) return by_sub.begin()->first;
  if (by_sub.size() == 2 && by_sub.count(kFalseId) && by_sub.count(kTrueId)) return by_sub[kTrueId];

  std::vector<Element> canon;
  canon.reserve(by_sub.size());
  for (const auto& [sub, prime] : by_sub) canon.push_back({prime, sub});
  std::sort(canon.begin(), canon.end());
  UniqueKey key{v, canon};
  auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  const auto id = static_cast<SddId>(nodes_.size());
  nodes_.push_back({Kind::kDecomposition, v, 0, false, std::move(canon)});
  unique_.emplace(std::move(key), id);
  return id;
}

SddNode SddManager::make_decomposition(NodeId v, std::vector<std::pair<SddNode, SddNode>> elements) {
  if (vtree_.is_leaf(v)) throw ContractViolation("sdd: decomposition at a leaf");
  std::vector<Element> raw;
  raw.reserve(elements.size());
  for (const auto& [p, s] : elements) {
    check(p);
    check(s);
    raw.push_back({p.id, s.id});
  }
  return {tag_, make_node(v, std::move(raw))};
}

SddId SddManager::negate_id(SddId a) {
  if (a == kFalseId) return kTrueId;
  if (a == kTrueId) return kFalseId;
  const NodeData& n = nodes_[a];
  if (n.kind == Kind::kLiteral) return literal_id(n.var, !n.positive);
  if (auto it = negate_cache_.find(a); it != negate_cache_.end()) return it->second;
  std::vector<Element> elements = nodes_[a].elements;
  for (auto& e : elements) e.sub = negate_id(e.sub);
  const SddId r = make_node(nodes_[a].vnode, std::move(elements));
  negate_cache_[a] = r;
  negate_cache_[r] = a;
  return r;
}

SddNode SddManager::negate(SddNode a) {
  check(a);
  return {tag_, negate_id(a.id)};
}

SddId SddManager::apply_id(SddId a, SddId b, Op op) {
  ++stats_.apply_calls;
  switch (op) {
    case Op::kAnd:
      if (a == kFalseId || b == kFalseId) return kFalseId;
      if (a == kTrueId || a == b) return b;
      if (b == kTrueId) return a;
      break;
    case Op::kOr:
      if (a == kTrueId || b == kTrueId) return kTrueId;
      if (a == kFalseId || a == b) return b;
      if (b == kFalseId) return a;
      break;
    case Op::kXor:
      if (a == kFalseId) return b;
      if (b == kFalseId) return a;
      if (a == b) return kFalseId;
      if (a == kTrueId) return negate_id(b);
      if (b == kTrueId) return negate_id(a);
      break;
  }
  if (a > b) std::swap(a, b);
  const NodeData& na = nodes_[a];
  const NodeData& nb = nodes_[b];
  if (na.kind == Kind::kLiteral && nb.kind == Kind::kLiteral && na.var == nb.var) {
    // Opposite polarities (equal literals were handled above).
    return op == Op::kAnd ? kFalseId : kTrueId;
  }
  const auto key = std::make_tuple(a, b, op);
  if (auto it = apply_cache_.find(key); it != apply_cache_.end()) {
    ++stats_.cache_hits;
    return it->second;
  }

  const NodeId va = na.vnode;
  const NodeId vb = nb.vnode;
  const NodeId w = vtree_.lca(va, vb);
  auto expand = [&](SddId x, NodeId vx) -> std::vector<Element> {
    if (vx == w) return nodes_[x].elements;
    if (vtree_.descendant_side(w, vx) == Side::left) return {{x, kTrueId}, {negate_id(x), kFalseId}};
    return {{kTrueId, x}};
  };
  const std::vector<Element> ea = expand(a, va);
  const std::vector<Element> eb = expand(b, vb);
  std::vector<Element> product;
  product.reserve(ea.size() * eb.size());
  for (const auto& x : ea) {
    for (const auto& y : eb) {
      const SddId p = apply_id(x.prime, y.prime, Op::kAnd);
      if (p == kFalseId) continue;
      product.push_back({p, apply_id(x.sub, y.sub, op)});
    }
  }
  const SddId r = make_node(w, std::move(product));
  apply_cache_.emplace(key, r);
  return r;
}

SddNode SddManager::apply(SddNode a, SddNode b, Op op) {
  check(a);
  check(b);
  return {tag_, apply_id(a.id, b.id, op)};
}

SddNode SddManager::condition(SddNode a, const Term& term) {
  check(a);
  for (const auto& l : term.literals()) vtree_.leaf_of(l.var);
  std::unordered_map<SddId, SddId> cache;
  auto touches = [&](NodeId v) {
    for (const auto& l : term.literals())
      if (vtree_.contains(v, vtree_.leaf_of(l.var))) return true;
    return false;
  };
  auto rec = [&](auto&& self, SddId x) -> SddId {
    if (x <= kTrueId) return x;
    const NodeData& n = nodes_[x];
    if (n.kind == Kind::kLiteral) {
      const int v = term.value_of(n.var);
      if (v < 0) return x;
      return (v == 1) == n.positive ? kTrueId : kFalseId;
    }
    if (!touches(n.vnode)) return x;
    if (auto it = cache.find(x); it != cache.end()) return it->second;
    const NodeId vnode = n.vnode;
    const std::vector<Element> elements = n.elements;
    std::vector<Element> out;
    for (const auto& e : elements) {
      const SddId p = self(self, e.prime);
      if (p == kFalseId) continue;
      out.push_back({p, self(self, e.sub)});
    }
    const SddId r = make_node(vnode, std::move(out));
    cache.emplace(x, r);
    return r;
  };
  return {tag_, rec(rec, a.id)};
}

BigInt SddManager::count_at(SddId a, NodeId u, std::unordered_map<SddId, BigInt>& cache) const {
  if (a == kFalseId) return 0;
  if (a == kTrueId) return BigInt(1) << vtree_.leaf_count(u);
  return count_below(a, cache) << (vtree_.leaf_count(u) - vtree_.leaf_count(nodes_[a].vnode));
}

BigInt SddManager::count_below(SddId a, std::unordered_map<SddId, BigInt>& cache) const {
  const NodeData& n = nodes_[a];
  if (n.kind == Kind::kLiteral) return 1;
  if (auto it = cache.find(a); it != cache.end()) return it->second;
  BigInt total = 0;
  const NodeId l = vtree_.left(n.vnode);
  const NodeId r = vtree_.right(n.vnode);
  for (const auto& e : n.elements) total += count_at(e.prime, l, cache) * count_at(e.sub, r, cache);
  cache.emplace(a, total);
  return total;
}

BigInt SddManager::model_count(SddNode a) const {
  check(a);
  std::unordered_map<SddId, BigInt> cache;
  return count_at(a.id, vtree_.root(), cache);
}

std::size_t SddManager::size(SddNode a) const {
  check(a);
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<SddId> stack{a.id};
  std::size_t total = 0;
  while (!stack.empty()) {
    const SddId x = stack.back();
    stack.pop_back();
    if (seen[x]) continue;
    seen[x] = true;
    for (const auto& e : nodes_[x].elements) {
      stack.push_back(e.prime);
      stack.push_back(e.sub);
    }
    total += nodes_[x].elements.size();
  }
  return total;
}

std::size_t SddManager::node_count(SddNode a) const {
  check(a);
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<SddId> stack{a.id};
  std::size_t total = 0;
  while (!stack.empty()) {
    const SddId x = stack.back();
    stack.pop_back();
    if (seen[x]) continue;
    seen[x] = true;
    ++total;
    for (const auto& e : nodes_[x].elements) {
      stack.push_back(e.prime);
      stack.push_back(e.sub);
    }
  }
  return total;
}

}  // namespace vssdd
