#include "vssdd/vs_manager.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "vssdd/error.hpp"

namespace vssdd {

namespace detail {
std::uint64_t next_manager_tag();
}

const char* mode_name(Mode mode) { return mode == Mode::kTrimmed ? "trimmed" : "normalized"; }

namespace {

std::uint64_t pack(StructId s, NodeId k) { return (std::uint64_t{s} << 32) | k; }

// Truth pairs (f(x=0), f(x=1)) of the four terminal structures.
constexpr std::pair<bool, bool> kTerminalTruth[4] = {{false, false}, {true, true}, {false, true}, {true, false}};

StructId terminal_from_truth(bool at0, bool at1) {
  if (!at0 && !at1) return VsManager::kFalse;
  if (at0 && at1) return VsManager::kTrue;
  return at1 ? VsManager::kLiteral : VsManager::kNegLiteral;
}

StructId negate_terminal(StructId s) {
  return terminal_from_truth(!kTerminalTruth[s].first, !kTerminalTruth[s].second);
}

}  // namespace

std::size_t VsManager::UniqueKeyHash::operator()(const UniqueKey& k) const {
  std::size_t h = k.klass;
  for (const auto& e : k.elements) {
    detail::hash_combine(h, e.prime);
    detail::hash_combine(h, static_cast<std::size_t>(e.d));
    detail::hash_combine(h, e.sub);
    detail::hash_combine(h, static_cast<std::size_t>(e.e));
  }
  return h;
}

std::size_t VsManager::ConvKeyHash::operator()(const ConvKey& k) const {
  std::size_t h = k.a;
  detail::hash_combine(h, k.b);
  detail::hash_combine(h, static_cast<std::size_t>(k.ea));
  detail::hash_combine(h, static_cast<std::size_t>(k.eb));
  detail::hash_combine(h, k.klass);
  detail::hash_combine(h, (std::size_t{k.fa} << 3) | (std::size_t{k.fb} << 2) |
                              (static_cast<std::size_t>(k.op) << 4) | std::size_t{k.compress});
  return h;
}

VsManager::VsManager(Vtree vtree, Mode mode, bool compress)
    : vtree_(std::move(vtree)), mode_(mode), compress_(compress), tag_(detail::next_manager_tag()) {
  const NodeId leaf_class = vtree_.iso_class(vtree_.leaf_of(1));
  structures_.push_back({VsStructure::Kind::kFalse, 0, {}});
  structures_.push_back({VsStructure::Kind::kTrue, 0, {}});
  structures_.push_back({VsStructure::Kind::kLiteral, leaf_class, {}});
  structures_.push_back({VsStructure::Kind::kNegLiteral, leaf_class, {}});
  consistent_cache_ = {0, 1, 1, 1};
}

void VsManager::check(VsSdd a) const {
  if (a.manager != tag_) throw ContractViolation("vssdd: handle belongs to a different manager");
  if (a.structure >= structures_.size()) throw ContractViolation("vssdd: unknown structure id");
  const VsStructure& s = structures_[a.structure];
  if (s.is_constant()) {
    if (a.offset != 0) throw ContractViolation("vssdd: constant with non-zero offset");
    return;
  }
  if (!vtree_.valid(a.offset) || a.offset == 0) throw ContractViolation("vssdd: offset out of range");
  if (s.is_terminal()) {
    if (!vtree_.is_leaf(a.offset)) throw ContractViolation("vssdd: literal offset is not a leaf");
  } else if (vtree_.iso_class(a.offset) != s.klass) {
    throw ContractViolation("vssdd: offset violates the identical vtree rule");
  }
}

const VsStructure& VsManager::structure(StructId id) const {
  if (id >= structures_.size()) throw ContractViolation("vssdd: unknown structure id");
  return structures_[id];
}

VsSdd VsManager::make(StructId s, NodeId offset) const {
  return {tag_, s, is_constant(s) ? NodeId{0} : offset};
}

StructId VsManager::intern(NodeId klass, std::vector<VsElement> elements) {
  std::sort(elements.begin(), elements.end());
  UniqueKey key{klass, std::move(elements)};
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  const auto id = static_cast<StructId>(structures_.size());
  structures_.push_back({VsStructure::Kind::kDecomposition, klass, key.elements});
  consistent_cache_.push_back(-1);
  unique_.emplace(std::move(key), id);
  return id;
}

VsSdd VsManager::literal(Var var, bool positive) {
  const NodeId leaf = vtree_.leaf_of(var);
  if (mode_ == Mode::kTrimmed) return make(positive ? kLiteral : kNegLiteral, leaf);
  return literal_normalized(vtree_.root(), var, positive);
}

VsSdd VsManager::literal_at(Var var, bool positive, NodeId u) {
  const NodeId leaf = vtree_.leaf_of(var);
  if (!vtree_.contains(u, leaf)) throw ContractViolation("vssdd: variable is not below the requested node");
  if (mode_ == Mode::kTrimmed) return make(positive ? kLiteral : kNegLiteral, leaf);
  return literal_normalized(u, var, positive);
}

VsSdd VsManager::literal_normalized(NodeId u, Var var, bool positive) {
  if (vtree_.is_leaf(u)) return make(positive ? kLiteral : kNegLiteral, u);
  const NodeId l = vtree_.left(u);
  const NodeId r = vtree_.right(u);
  std::vector<VsElement> elements;
  if (vtree_.contains(l, vtree_.leaf_of(var))) {
    const VsSdd pos = literal_normalized(l, var, positive);
    const VsSdd neg = literal_normalized(l, var, !positive);
    const auto d = static_cast<Delta>(l - u);
    elements = {{pos.structure, d, kTrue, 0}, {neg.structure, d, kFalse, 0}};
  } else {
    const VsSdd sub = literal_normalized(r, var, positive);
    elements = {{kTrue, 0, sub.structure, static_cast<Delta>(r - u)}};
  }
  const NodeRef ref = get_node(std::move(elements), vtree_.iso_class(u));
  return make(ref.structure, u + ref.delta);
}

std::optional<StructId> VsManager::terminal_op(StructId a, StructId b, Op op) const {
  if (!is_terminal(a) || !is_terminal(b)) return std::nullopt;
  const auto [a0, a1] = kTerminalTruth[a];
  const auto [b0, b1] = kTerminalTruth[b];
  return terminal_from_truth(eval_op(op, a0, b0), eval_op(op, a1, b1));
}

// Rules whose answer is already an operand or a constant. They return the
// same handle the general recursion would build.
std::optional<VsSdd> VsManager::shortcut(StructId a, StructId b, NodeId ka, NodeId kb, bool fa,
                                         bool fb, Op op) const {
  if (a == b && ka == kb) {
    if (fa == fb) {
      if (op == Op::kXor) return constant(false);
      if (!fa) return make(a, ka);
      return std::nullopt;
    }
    return constant(op != Op::kAnd);
  }
  auto with_constant = [&](StructId c, StructId x, NodeId kx, bool fx) -> std::optional<VsSdd> {
    const bool value = c == kTrue;
    switch (op) {
      case Op::kAnd:
        if (!value) return constant(false);
        break;
      case Op::kOr:
        if (value) return constant(true);
        break;
      case Op::kXor:
        if (value) {
          if (fx) return make(x, kx);
          return std::nullopt;
        }
        break;
    }
    if (!fx) return make(x, kx);
    return std::nullopt;
  };
  if (is_constant(b)) return with_constant(b, a, ka, fa);
  if (is_constant(a)) return with_constant(a, b, kb, fb);
  return std::nullopt;
}

VsSdd VsManager::apply(VsSdd a, VsSdd b, Op op) {
  check(a);
  check(b);
  if (mode_ == Mode::kTrimmed)
    return apply_trimmed(a.structure, b.structure, a.offset, b.offset, false, false, op);
  if (a.offset != 0 && b.offset != 0 && a.offset != b.offset)
    throw ContractViolation("vssdd: normalized apply needs operands at the same offset");
  const NodeId k = a.offset != 0 ? a.offset : (b.offset != 0 ? b.offset : vtree_.root());
  return apply_normalized(a.structure, b.structure, k, op);
}

VsSdd VsManager::negate(VsSdd a) { return apply(a, constant(true), Op::kXor); }

VsSdd VsManager::apply_with_compression(VsSdd a, VsSdd b, Op op, bool compress) {
  struct Restore {
    bool& flag;
    bool saved;
    ~Restore() { flag = saved; }
  } restore{compress_, compress_};
  compress_ = compress;
  return apply(a, b, op);
}

std::vector<AnnotatedElement> VsManager::expand(StructId a, bool negated, NodeId k, NodeId w) const {
  if (!vtree_.valid(w) || w == 0 || vtree_.is_leaf(w))
    throw ContractViolation("vssdd: expand needs an internal vtree node");
  if (k != 0 && !vtree_.contains(w, k))
    throw ContractViolation("vssdd: expand offset is not below the expansion node");
  if (k == w) {
    const VsStructure& s = structure(a);
    if (s.is_terminal()) throw ContractViolation("vssdd: terminal cannot sit at an internal node");
    std::vector<AnnotatedElement> out;
    out.reserve(s.elements.size());
    for (const auto& e : s.elements) out.push_back({e, false, negated});
    return out;
  }
  if (k != 0 && k < vtree_.right(w)) {
    return {{{a, 0, kTrue, 0}, negated, false}, {{a, 0, kFalse, 0}, !negated, false}};
  }
  return {{{kTrue, 0, a, 0}, false, negated}};
}

VsSdd VsManager::apply_trimmed(StructId a, StructId b, NodeId ka, NodeId kb, bool fa, bool fb,
                               Op op) {
  if (mode_ != Mode::kTrimmed) throw ContractViolation("vssdd: trimmed apply on a normalized manager");
  if (is_terminal(a) && fa) {
    a = negate_terminal(a);
    fa = false;
  }
  if (is_terminal(b) && fb) {
    b = negate_terminal(b);
    fb = false;
  }
  if (is_constant(a)) ka = 0;
  if (is_constant(b)) kb = 0;

  if (is_terminal(a) && is_terminal(b) && (ka == 0 || kb == 0 || ka == kb)) {
    const StructId g = *terminal_op(a, b, op);
    return make(g, std::max(ka, kb));
  }
  if (auto r = shortcut(a, b, ka, kb, fa, fb, op)) return *r;
  ++stats_.apply_calls;

  const NodeId w = vtree_.lca(ka, kb);
  auto ea = static_cast<Delta>(ka != 0 ? ka - w : 0);
  auto eb = static_cast<Delta>(kb != 0 ? kb - w : 0);
  // Every operator is commutative; order operands for more cache hits.
  if (std::tie(b, fb, eb) < std::tie(a, fa, ea)) {
    std::swap(a, b);
    std::swap(ka, kb);
    std::swap(fa, fb);
    std::swap(ea, eb);
  }
  const NodeId klass = vtree_.iso_class(w);
  const ConvKey key{a, b, ea, eb, klass, fa, fb, op, compress_};
  if (auto it = conv_table_.find(key); it != conv_table_.end()) {
    ++stats_.cache_hits;
    return make(it->second.structure, w + it->second.delta);
  }
  ++stats_.cache_misses;

  const auto left = expand(a, fa, ka, w);
  const auto right = expand(b, fb, kb, w);
  std::vector<VsElement> gamma;
  gamma.reserve(left.size() * right.size());
  auto rel = [w](const VsSdd& x) { return static_cast<Delta>(x.offset != 0 ? x.offset - w : 0); };
  for (const auto& x : left) {
    for (const auto& y : right) {
      const VsSdd p = apply_trimmed(x.element.prime, y.element.prime, ka + x.element.d,
                                    kb + y.element.d, x.prime_negated, y.prime_negated, Op::kAnd);
      if (!consistent(p.structure)) continue;
      const VsSdd s = apply_trimmed(x.element.sub, y.element.sub, ka + x.element.e,
                                    kb + y.element.e, x.sub_negated, y.sub_negated, op);
      gamma.push_back({p.structure, rel(p), s.structure, rel(s)});
    }
  }
  const NodeRef ref = get_node(std::move(gamma), klass);
  conv_table_.emplace(key, ref);
  return make(ref.structure, w + ref.delta);
}

VsSdd VsManager::apply_normalized(StructId a, StructId b, NodeId k, Op op) {
  if (mode_ != Mode::kNormalized)
    throw ContractViolation("vssdd: normalized apply on a trimmed manager");
  if (!vtree_.valid(k) || k == 0) throw ContractViolation("vssdd: normalized apply offset out of range");
  if (auto g = terminal_op(a, b, op)) return make(*g, k);
  if (auto r = shortcut(a, b, is_constant(a) ? 0 : k, is_constant(b) ? 0 : k, false, false, op))
    return *r;
  if (vtree_.is_leaf(k)) throw ContractViolation("vssdd: decomposition at a leaf offset");
  ++stats_.apply_calls;
  if (b < a) std::swap(a, b);
  const ConvKey key{a, b, 0, 0, 0, false, false, op, compress_};
  if (auto it = conv_table_.find(key); it != conv_table_.end()) {
    ++stats_.cache_hits;
    return make(it->second.structure, k);
  }
  ++stats_.cache_misses;

  auto elements_of = [&](StructId s) -> std::vector<VsElement> {
    if (s == kTrue) return {{kTrue, 0, kTrue, 0}};
    if (s == kFalse) return {{kTrue, 0, kFalse, 0}};
    if (structures_[s].klass != vtree_.iso_class(k))
      throw ContractViolation("vssdd: normalized operands at different offsets");
    return structures_[s].elements;
  };
  const auto left = elements_of(a);
  const auto right = elements_of(b);
  const NodeId kl = vtree_.left(k);
  const NodeId kr = vtree_.right(k);
  std::vector<VsElement> gamma;
  for (const auto& x : left) {
    for (const auto& y : right) {
      const VsSdd p = apply_normalized(x.prime, y.prime, kl, Op::kAnd);
      if (!consistent(p.structure)) continue;
      const VsSdd s = apply_normalized(x.sub, y.sub, kr, op);
      gamma.push_back({p.structure, static_cast<Delta>(p.offset != 0 ? kl - k : 0), s.structure,
                       static_cast<Delta>(s.offset != 0 ? kr - k : 0)});
    }
  }
  const NodeRef ref = get_node(std::move(gamma), vtree_.iso_class(k));
  conv_table_.emplace(key, ref);
  return make(ref.structure, k);
}

NodeRef VsManager::get_node(std::vector<VsElement> elements, NodeId klass) {
  if (!vtree_.valid(klass) || klass == 0 || vtree_.is_leaf(klass) || vtree_.iso_class(klass) != klass)
    throw ContractViolation("vssdd: get_node needs an internal iso-class representative");
  for (auto& e : elements) {
    if (is_constant(e.prime)) e.d = 0;
    if (is_constant(e.sub)) e.e = 0;
  }
  std::erase_if(elements, [](const VsElement& e) { return e.prime == kFalse; });
  if (elements.empty()) throw InvariantViolation("vssdd: decomposition without a consistent prime");

  if (compress_) {
    std::map<std::pair<StructId, Delta>, std::pair<StructId, Delta>> by_sub;
    for (const auto& e : elements) {
      auto [it, fresh] = by_sub.try_emplace({e.sub, e.e}, e.prime, e.d);
      if (fresh) continue;
      auto& [p, d] = it->second;
      VsSdd merged;
      if (mode_ == Mode::kTrimmed) {
        merged = apply_trimmed(p, e.prime, is_constant(p) ? 0 : klass + d,
                               is_constant(e.prime) ? 0 : klass + e.d, false, false, Op::kOr);
      } else {
        merged = apply_normalized(p, e.prime, vtree_.left(klass), Op::kOr);
      }
      p = merged.structure;
      d = static_cast<Delta>(merged.offset != 0 ? merged.offset - klass : 0);
    }
    elements.clear();
    for (const auto& [sub, prime] : by_sub) elements.push_back({prime.first, prime.second, sub.first, sub.second});
  }

  if (elements.size() == 1 && elements[0].prime == kTrue) {
    const VsElement& e = elements[0];
    if (mode_ == Mode::kTrimmed || is_constant(e.sub)) return {e.sub, e.e};
  }
  if (mode_ == Mode::kTrimmed && elements.size() == 2) {
    const VsElement& x = elements[0];
    const VsElement& y = elements[1];
    if (x.sub == kTrue && y.sub == kFalse) return {x.prime, x.d};
    if (y.sub == kTrue && x.sub == kFalse) return {y.prime, y.d};
  }
  return {intern(klass, std::move(elements)), 0};
}

StructId VsManager::intern_raw(std::vector<VsElement> elements, NodeId klass) {
  if (!vtree_.valid(klass) || klass == 0 || vtree_.is_leaf(klass) || vtree_.iso_class(klass) != klass)
    throw ContractViolation("vssdd: class " + std::to_string(klass) + " is not an internal iso-class representative");
  if (elements.empty()) throw ContractViolation("vssdd: decomposition without elements");
  auto check_child = [&](StructId s, Delta d, Side side) {
    if (s >= structures_.size()) throw ContractViolation("vssdd: unknown child structure");
    const VsStructure& c = structures_[s];
    if (c.is_constant()) {
      if (d != 0) throw ContractViolation("vssdd: constant child with non-zero delta");
      return;
    }
    const std::int64_t target = std::int64_t{klass} + d;
    if (target <= 0 || !vtree_.valid(static_cast<NodeId>(target)) ||
        vtree_.descendant_side(klass, static_cast<NodeId>(target)) != side)
      throw ContractViolation("vssdd: child delta does not point to the required side");
    const auto t = static_cast<NodeId>(target);
    if (c.is_terminal() ? !vtree_.is_leaf(t) : c.klass != vtree_.iso_class(t))
      throw ContractViolation("vssdd: child structure does not fit its offset");
  };
  for (const auto& e : elements) {
    check_child(e.prime, e.d, Side::left);
    check_child(e.sub, e.e, Side::right);
  }
  return intern(klass, std::move(elements));
}

bool VsManager::consistent(StructId a) {
  if (a >= structures_.size()) throw ContractViolation("vssdd: unknown structure id");
  if (consistent_cache_[a] >= 0) return consistent_cache_[a] == 1;
  bool result = false;
  const std::vector<VsElement> elements = structures_[a].elements;
  for (const auto& e : elements) {
    if (consistent(e.prime) && consistent(e.sub)) {
      result = true;
      break;
    }
  }
  consistent_cache_[a] = result ? 1 : 0;
  return result;
}

VsSdd VsManager::condition_rec(StructId a, NodeId k, const Term& term,
                               std::unordered_map<std::uint64_t, VsSdd>& cache) {
  if (is_constant(a)) return make(a, 0);
  bool touches = false;
  for (const auto& l : term.literals()) {
    if (vtree_.contains(k, vtree_.leaf_of(l.var))) {
      touches = true;
      break;
    }
  }
  if (!touches) return make(a, k);
  if (is_terminal(a)) {
    const int v = term.value_of(vtree_.var_of(k));
    return constant((v == 1) == (a == kLiteral));
  }
  if (auto it = cache.find(pack(a, k)); it != cache.end()) return it->second;
  const std::vector<VsElement> elements = structures_[a].elements;
  std::vector<VsElement> gamma;
  for (const auto& e : elements) {
    const VsSdd p = condition_rec(e.prime, is_constant(e.prime) ? 0 : k + e.d, term, cache);
    if (!consistent(p.structure)) continue;
    const VsSdd s = condition_rec(e.sub, is_constant(e.sub) ? 0 : k + e.e, term, cache);
    gamma.push_back({p.structure, static_cast<Delta>(p.offset != 0 ? p.offset - k : 0), s.structure,
                     static_cast<Delta>(s.offset != 0 ? s.offset - k : 0)});
  }
  const NodeRef ref = get_node(std::move(gamma), vtree_.iso_class(k));
  const VsSdd r = make(ref.structure, k + ref.delta);
  cache.emplace(pack(a, k), r);
  return r;
}

VsSdd VsManager::condition(VsSdd a, const Term& term) {
  check(a);
  for (const auto& l : term.literals()) vtree_.leaf_of(l.var);
  std::unordered_map<std::uint64_t, VsSdd> cache;
  return condition_rec(a.structure, a.offset, term, cache);
}

VsSdd VsManager::shift(VsSdd a, std::int64_t delta) const {
  check(a);
  if (is_constant(a.structure)) return a;
  const std::int64_t target = std::int64_t{a.offset} + delta;
  if (target <= 0 || !vtree_.valid(static_cast<NodeId>(target)) ||
      vtree_.iso_class(static_cast<NodeId>(target)) != vtree_.iso_class(a.offset))
    throw ContractViolation("vssdd: shift target is not isomorphic to the source subtree");
  if (mode_ == Mode::kNormalized && !is_terminal(a.structure)) {
    // Normalized offsets still name the respected node, so any isomorphic target is valid.
  }
  return make(a.structure, static_cast<NodeId>(target));
}

std::size_t VsManager::size(StructId a) const {
  std::unordered_set<StructId> seen;
  std::vector<StructId> stack{a};
  std::size_t total = 0;
  while (!stack.empty()) {
    const StructId x = stack.back();
    stack.pop_back();
    if (!seen.insert(x).second) continue;
    const auto& s = structure(x);
    total += s.elements.size();
    for (const auto& e : s.elements) {
      stack.push_back(e.prime);
      stack.push_back(e.sub);
    }
  }
  return total;
}

std::size_t VsManager::node_count(StructId a) const {
  std::unordered_set<StructId> seen;
  std::vector<StructId> stack{a};
  while (!stack.empty()) {
    const StructId x = stack.back();
    stack.pop_back();
    if (!seen.insert(x).second) continue;
    for (const auto& e : structure(x).elements) {
      stack.push_back(e.prime);
      stack.push_back(e.sub);
    }
  }
  return seen.size();
}

namespace {

template <typename Visit>
void walk_instances(const VsManager& m, VsSdd root, Visit&& visit) {
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<StructId, NodeId>> stack{{root.structure, root.offset}};
  while (!stack.empty()) {
    const auto [s, k] = stack.back();
    stack.pop_back();
    if (!seen.insert(pack(s, k)).second) continue;
    const VsStructure& st = m.structure(s);
    visit(s, k, st);
    for (const auto& e : st.elements) {
      stack.emplace_back(e.prime, m.structure(e.prime).is_constant() ? 0 : k + e.d);
      stack.emplace_back(e.sub, m.structure(e.sub).is_constant() ? 0 : k + e.e);
    }
  }
}

}  // namespace

std::size_t VsManager::unshared_size(VsSdd a) const {
  check(a);
  std::size_t total = 0;
  walk_instances(*this, a, [&](StructId, NodeId, const VsStructure& s) { total += s.elements.size(); });
  return total;
}

std::size_t VsManager::unshared_node_count(VsSdd a) const {
  check(a);
  std::size_t total = 0;
  walk_instances(*this, a, [&](StructId, NodeId, const VsStructure& s) {
    total += s.kind == VsStructure::Kind::kDecomposition;
  });
  return total;
}

std::vector<std::pair<StructId, NodeId>> VsManager::identical_vtree_rule_violations(
    std::span<const VsSdd> roots) const {
  std::vector<std::pair<StructId, NodeId>> bad;
  for (const VsSdd& r : roots) {
    check(r);
    walk_instances(*this, r, [&](StructId s, NodeId k, const VsStructure& st) {
      if (st.is_constant()) return;
      const bool ok = st.is_terminal() ? vtree_.is_leaf(k) : vtree_.iso_class(k) == st.klass;
      if (!ok) bad.emplace_back(s, k);
    });
  }
  return bad;
}

SddNode VsManager::to_baseline_sdd(VsSdd a, SddManager& sdd) const {
  check(a);
  if (!(sdd.vtree() == vtree_)) throw ContractViolation("vssdd: baseline manager uses another vtree");
  std::unordered_map<std::uint64_t, SddNode> memo;
  auto rec = [&](auto&& self, StructId s, NodeId k) -> SddNode {
    if (s == kFalse) return sdd.constant(false);
    if (s == kTrue) return sdd.constant(true);
    if (s == kLiteral || s == kNegLiteral) return sdd.literal(vtree_.var_of(k), s == kLiteral);
    if (auto it = memo.find(pack(s, k)); it != memo.end()) return it->second;
    std::vector<std::pair<SddNode, SddNode>> elements;
    for (const auto& e : structures_[s].elements) {
      elements.emplace_back(self(self, e.prime, k + e.d), self(self, e.sub, k + e.e));
    }
    const SddNode r = sdd.make_decomposition(k, std::move(elements));
    memo.emplace(pack(s, k), r);
    return r;
  };
  return rec(rec, a.structure, a.offset);
}

}  // namespace vssdd
