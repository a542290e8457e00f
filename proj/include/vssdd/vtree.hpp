#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vssdd {

/// Boolean variable label, 1-based.
using Var = std::uint32_t;

/// Preorder vtree node id, 1-based. Id 0 is the constant sentinel.
using NodeId = std::uint32_t;

inline constexpr NodeId kSentinel = 0;

enum class Side { left, right, equal, unrelated };

/// One node in an arbitrary-id tree description; used to build a Vtree from
/// external sources (files, generators). Leaves have var != 0.
struct RawVtreeNode {
  Var var = 0;
  std::size_t left = 0;
  std::size_t right = 0;
};

/// Ordered full binary tree over variables 1..M with preorder ids.
///
/// For an internal node v, left(v) = v + 1 and right(v) = v + 2 * L(left(v)),
/// where L is the subtree leaf count. The subtree of v spans ids
/// [v, v + 2 L(v) - 2]. Immutable once built.
class Vtree {
 public:
  /// Builds from an arbitrary-id description rooted at raw[root]. Leaf
  /// variables must be a bijection with 1..M.
  static Vtree from_raw(std::span<const RawVtreeNode> raw, std::size_t root);

  static Vtree balanced(std::span<const Var> variables);
  static Vtree right_linear(std::span<const Var> variables);
  /// balanced / right_linear over 1..M in natural order.
  static Vtree balanced(Var num_vars);
  static Vtree right_linear(Var num_vars);

  Var num_vars() const noexcept { return num_vars_; }
  NodeId num_nodes() const noexcept { return static_cast<NodeId>(nodes_.size() - 1); }
  NodeId root() const noexcept { return 1; }

  bool valid(NodeId id) const noexcept { return id < nodes_.size(); }
  bool is_leaf(NodeId id) const;
  NodeId left(NodeId id) const;
  NodeId right(NodeId id) const;
  /// 0 for the root.
  NodeId parent(NodeId id) const;
  /// Variable of a leaf, 0 for internal nodes.
  Var var_of(NodeId id) const;
  NodeId leaf_of(Var v) const;
  std::uint32_t leaf_count(NodeId id) const;
  std::uint32_t depth(NodeId id) const;
  /// Largest id inside the subtree of `id`.
  NodeId subtree_end(NodeId id) const { return id + 2 * leaf_count(id) - 2; }
  bool contains(NodeId anc, NodeId desc) const;

  /// Lowest common ancestor. The sentinel counts as a right descendant of
  /// every node: lca(0, w) = w.
  NodeId lca(NodeId u, NodeId w) const;

  /// Smallest preorder id whose subtree has the same shape as subtree(w).
  NodeId iso_class(NodeId w) const;
  /// ID(w) - ID(u) when the subtrees are isomorphic.
  std::optional<std::int64_t> shift_delta(NodeId u, NodeId w) const;
  Side descendant_side(NodeId anc, NodeId desc) const;

  /// Variables of subtree(id) in leaf preorder.
  std::vector<Var> variables_under(NodeId id) const;

  /// Same shape and same leaf labels.
  bool operator==(const Vtree& other) const;
  /// Same shape, labels ignored.
  bool same_shape(const Vtree& other) const;

 private:
  struct Node {
    NodeId left = 0;
    NodeId right = 0;
    NodeId parent = 0;
    Var var = 0;
    std::uint32_t leaves = 0;
    std::uint32_t depth = 0;
    NodeId iso = 0;
  };

  Vtree() = default;
  void check(NodeId id) const;
  void build_indexes();

  Var num_vars_ = 0;
  std::vector<Node> nodes_;        // index 0 is the sentinel
  std::vector<NodeId> leaf_of_;    // var -> leaf id, index 0 unused
  // Euler tour + sparse table over depths
  std::vector<NodeId> euler_;
  std::vector<std::uint32_t> first_;
  std::vector<std::vector<std::uint32_t>> sparse_;
};

/// Parses the SDD-package vtree grammar: `c` comments, `vtree <count>`,
/// `L <id> <var>` and `I <id> <left> <right>`. Ids are reassigned in preorder.
Vtree parse_vtree(std::string_view text);
/// Emits the same grammar with preorder ids, children before parents.
std::string serialize_vtree(const Vtree& vtree);

}  // namespace vssdd
