#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vssdd/sdd.hpp"
#include "vssdd/types.hpp"
#include "vssdd/vtree.hpp"

namespace vssdd {

using StructId = std::uint32_t;

/// Offsets stored on elements are differences of preorder ids.
using Delta = std::int32_t;

enum class Mode : std::uint8_t { kTrimmed, kNormalized };

const char* mode_name(Mode mode);

/// One prime/sub pair of a decomposition. Child offsets are the parent
/// offset plus the delta; constants always carry delta 0.
struct VsElement {
  StructId prime = 0;
  Delta d = 0;
  StructId sub = 0;
  Delta e = 0;

  friend bool operator==(const VsElement&, const VsElement&) = default;
  friend auto operator<=>(const VsElement&, const VsElement&) = default;
};

/// Element with deferred negation flags, as produced by expand().
struct AnnotatedElement {
  VsElement element;
  bool prime_negated = false;
  bool sub_negated = false;

  friend bool operator==(const AnnotatedElement&, const AnnotatedElement&) = default;
};

/// Interned, offset-free node.
struct VsStructure {
  enum class Kind : std::uint8_t { kFalse, kTrue, kLiteral, kNegLiteral, kDecomposition };

  Kind kind = Kind::kFalse;
  /// Iso-class representative the decomposition was interned under; the leaf
  /// class for literal shapes and 0 for constants.
  NodeId klass = 0;
  std::vector<VsElement> elements;

  bool is_constant() const { return kind == Kind::kFalse || kind == Kind::kTrue; }
  bool is_terminal() const { return kind != Kind::kDecomposition; }
};

/// A Boolean function: structure instantiated at a vtree offset (0 iff the
/// structure is a constant).
struct VsSdd {
  std::uint64_t manager = 0;
  StructId structure = 0;
  NodeId offset = 0;

  friend bool operator==(const VsSdd&, const VsSdd&) = default;
};

/// Result of get_node: a structure and its offset relative to the node the
/// elements were built for (0 for constants).
struct NodeRef {
  StructId structure = 0;
  Delta delta = 0;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

/// Manager for Variable Shift SDDs over one vtree.
///
/// Structures are interned per (iso class, element list), so one structure
/// may be instantiated at every offset whose vtree subtree has the same shape.
/// Trimmed mode keeps compressed+trimmed forms and runs the offset-aware
/// Apply with negation flags; normalized mode keeps compressed, lightly
/// trimmed, normalized forms and runs the same-offset Apply. The two modes
/// never mix within one manager.
///
/// Not thread-safe: every operation may mutate caches.
class VsManager {
 public:
  struct Stats {
    std::uint64_t apply_calls = 0;   // non-terminal apply invocations
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;  // apply bodies actually executed
  };

  static constexpr StructId kFalse = 0;
  static constexpr StructId kTrue = 1;
  static constexpr StructId kLiteral = 2;
  static constexpr StructId kNegLiteral = 3;

  explicit VsManager(Vtree vtree, Mode mode = Mode::kTrimmed, bool compress = true);
  VsManager(const VsManager&) = delete;
  VsManager& operator=(const VsManager&) = delete;
  VsManager(VsManager&&) = default;
  VsManager& operator=(VsManager&&) = default;

  const Vtree& vtree() const { return vtree_; }
  Mode mode() const { return mode_; }
  bool compressing() const { return compress_; }
  /// Compressed managers hold canonical forms: equal functions share a handle.
  bool canonical() const { return compress_; }
  std::uint64_t tag() const { return tag_; }

  VsSdd constant(bool value) const { return {tag_, value ? kTrue : kFalse, 0}; }
  /// Trimmed mode: the literal shape at the variable's leaf. Normalized mode:
  /// the normalized chain down from the root.
  VsSdd literal(Var var, bool positive);
  VsSdd literal(Literal lit) { return literal(lit.var, lit.positive); }
  /// Literal as a function respecting vtree node u, which must contain the
  /// variable's leaf. Normalized mode builds the chain down from u; trimmed
  /// mode ignores u beyond the containment check.
  VsSdd literal_at(Var var, bool positive, NodeId u);

  VsSdd apply(VsSdd a, VsSdd b, Op op);
  VsSdd conjoin(VsSdd a, VsSdd b) { return apply(a, b, Op::kAnd); }
  VsSdd disjoin(VsSdd a, VsSdd b) { return apply(a, b, Op::kOr); }
  /// xor with true.
  VsSdd negate(VsSdd a);
  /// apply() with compression forced to `compress` for this call only.
  VsSdd apply_with_compression(VsSdd a, VsSdd b, Op op, bool compress);

  /// Offset-aware Apply over trimmed structures (five-case dispatch).
  VsSdd apply_trimmed(StructId a, StructId b, NodeId ka, NodeId kb, bool fa, bool fb, Op op);
  /// Same-offset Apply over normalized structures.
  VsSdd apply_normalized(StructId a, StructId b, NodeId k, Op op);

  /// Elements of (a, k) viewed as a decomposition at vtree node w.
  std::vector<AnnotatedElement> expand(StructId a, bool negated, NodeId k, NodeId w) const;

  /// Compresses, trims and interns a decomposition for iso class `klass`.
  NodeRef get_node(std::vector<VsElement> elements, NodeId klass);

  /// False iff the structure denotes the constant false function.
  bool consistent(StructId a);

  VsSdd condition(VsSdd a, const Term& term);

  /// (a.structure, a.offset + delta); the target subtree must be isomorphic.
  VsSdd shift(VsSdd a, std::int64_t delta) const;

  /// Sum of element counts over distinct reachable decomposition structures.
  std::size_t size(StructId a) const;
  std::size_t size(VsSdd a) const { return size(a.structure); }
  /// Distinct reachable structures, terminals included.
  std::size_t node_count(StructId a) const;
  std::size_t node_count(VsSdd a) const { return node_count(a.structure); }
  /// Size of the SDD obtained by instantiating every structure at every
  /// absolute offset it is reached with (no sharing across offsets).
  std::size_t unshared_size(VsSdd a) const;
  /// Number of distinct (decomposition structure, absolute offset) pairs.
  std::size_t unshared_node_count(VsSdd a) const;

  /// Materializes the canonical SDD of the same function.
  SddNode to_baseline_sdd(VsSdd a, SddManager& sdd) const;

  /// (structure, offset) pairs reachable from the roots that break the
  /// identical vtree rule; empty when the rule holds.
  std::vector<std::pair<StructId, NodeId>> identical_vtree_rule_violations(
      std::span<const VsSdd> roots) const;

  /// Interns a decomposition exactly as given after validating its deltas
  /// against `klass`. Used when loading serialized diagrams.
  StructId intern_raw(std::vector<VsElement> elements, NodeId klass);

  const VsStructure& structure(StructId id) const;
  std::size_t num_structures() const { return structures_.size(); }
  const Stats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }
  /// Throws ContractViolation for foreign or malformed handles.
  void check(VsSdd a) const;

 private:
  struct UniqueKey {
    NodeId klass;
    std::vector<VsElement> elements;
    friend bool operator==(const UniqueKey&, const UniqueKey&) = default;
  };
  struct UniqueKeyHash {
    std::size_t operator()(const UniqueKey& k) const;
  };
  struct ConvKey {
    StructId a, b;
    Delta ea, eb;
    NodeId klass;
    bool fa, fb;
    Op op;
    bool compress;
    friend bool operator==(const ConvKey&, const ConvKey&) = default;
  };
  struct ConvKeyHash {
    std::size_t operator()(const ConvKey& k) const;
  };

  VsSdd make(StructId s, NodeId offset) const;
  StructId intern(NodeId klass, std::vector<VsElement> elements);
  bool is_terminal(StructId s) const { return s <= kNegLiteral; }
  bool is_constant(StructId s) const { return s <= kTrue; }
  std::optional<StructId> terminal_op(StructId a, StructId b, Op op) const;
  std::optional<VsSdd> shortcut(StructId a, StructId b, NodeId ka, NodeId kb, bool fa, bool fb,
                                Op op) const;
  VsSdd literal_normalized(NodeId u, Var var, bool positive);
  VsSdd condition_rec(StructId a, NodeId k, const Term& term,
                      std::unordered_map<std::uint64_t, VsSdd>& cache);

  Vtree vtree_;
  Mode mode_;
  bool compress_;
  std::uint64_t tag_;
  std::vector<VsStructure> structures_;
  std::vector<std::int8_t> consistent_cache_;  // -1 unknown
  std::unordered_map<UniqueKey, StructId, UniqueKeyHash> unique_;
  std::unordered_map<ConvKey, NodeRef, ConvKeyHash> conv_table_;
  Stats stats_;
};

}  // namespace vssdd
