#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vssdd/types.hpp"
#include "vssdd/vtree.hpp"

namespace vssdd {

using SddId = std::uint32_t;

/// Handle to a node of one SddManager. The tag identifies the owning manager.
struct SddNode {
  std::uint64_t manager = 0;
  SddId id = 0;

  friend bool operator==(const SddNode&, const SddNode&) = default;
};

/// Compressed and trimmed SDD manager over a fixed vtree. Nodes are
/// hash-consed, so two handles for the same function compare equal.
class SddManager {
 public:
  enum class Kind : std::uint8_t { kFalse, kTrue, kLiteral, kDecomposition };

  struct Element {
    SddId prime;
    SddId sub;
    friend bool operator==(const Element&, const Element&) = default;
    friend auto operator<=>(const Element&, const Element&) = default;
  };

  struct NodeData {
    Kind kind;
    NodeId vnode;  // respected vtree node, 0 for constants
    Var var;       // literal variable
    bool positive;
    std::vector<Element> elements;
  };

  struct Stats {
    std::uint64_t apply_calls = 0;
    std::uint64_t cache_hits = 0;
  };

  explicit SddManager(Vtree vtree);
  SddManager(const SddManager&) = delete;
  SddManager& operator=(const SddManager&) = delete;
  SddManager(SddManager&&) = default;
  SddManager& operator=(SddManager&&) = default;

  const Vtree& vtree() const { return vtree_; }
  std::uint64_t tag() const { return tag_; }

  SddNode constant(bool value) const { return {tag_, value ? kTrueId : kFalseId}; }
  SddNode literal(Var var, bool positive);
  SddNode literal(Literal lit) { return literal(lit.var, lit.positive); }

  SddNode apply(SddNode a, SddNode b, Op op);
  SddNode conjoin(SddNode a, SddNode b) { return apply(a, b, Op::kAnd); }
  SddNode disjoin(SddNode a, SddNode b) { return apply(a, b, Op::kOr); }
  SddNode negate(SddNode a);
  SddNode condition(SddNode a, const Term& term);

  /// Model count over all vtree variables.
  BigInt model_count(SddNode a) const;
  /// Sum of element counts over distinct reachable decompositions.
  std::size_t size(SddNode a) const;
  /// Number of distinct reachable nodes, terminals included.
  std::size_t node_count(SddNode a) const;

  /// Builds the node for the partition `elements` at vtree node v,
  /// compressing (OR-ing primes of equal subs) and trimming.
  SddNode make_decomposition(NodeId v, std::vector<std::pair<SddNode, SddNode>> elements);

  const NodeData& node(SddNode a) const;
  bool is_constant(SddNode a) const { return a.id <= kTrueId; }
  /// Vtree node the SDD respects, 0 for constants.
  NodeId vnode(SddNode a) const { return node(a).vnode; }
  const Stats& stats() const { return stats_; }

  static constexpr SddId kFalseId = 0;
  static constexpr SddId kTrueId = 1;

 private:
  struct UniqueKey {
    NodeId vnode;
    std::vector<Element> elements;
    friend bool operator==(const UniqueKey&, const UniqueKey&) = default;
  };
  struct UniqueKeyHash {
    std::size_t operator()(const UniqueKey& k) const;
  };
  struct ApplyKeyHash {
    std::size_t operator()(const std::tuple<SddId, SddId, Op>& k) const;
  };

  void check(SddNode a) const;
  SddId apply_id(SddId a, SddId b, Op op);
  SddId negate_id(SddId a);
  SddId make_node(NodeId v, std::vector<Element> elements);
  SddId literal_id(Var var, bool positive);
  BigInt count_below(SddId a, std::unordered_map<SddId, BigInt>& cache) const;
  BigInt count_at(SddId a, NodeId u, std::unordered_map<SddId, BigInt>& cache) const;

  Vtree vtree_;
  std::uint64_t tag_;
  std::vector<NodeData> nodes_;
  std::vector<SddId> literal_ids_;  // 2 * var + positive -> id, 0 if absent
  std::unordered_map<UniqueKey, SddId, UniqueKeyHash> unique_;
  std::unordered_map<std::tuple<SddId, SddId, Op>, SddId, ApplyKeyHash> apply_cache_;
  std::unordered_map<SddId, SddId> negate_cache_;
  Stats stats_;
};

}  // namespace vssdd
