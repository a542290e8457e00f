#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vssdd/vs_manager.hpp"

namespace vssdd {

/// Model counter over one manager. The cache is keyed on structure ids, so a
/// structure counted at one offset is free at every other offset.
class CountContext {
 public:
  explicit CountContext(const VsManager& manager) : manager_(&manager) {}

  /// Count over all vtree variables.
  BigInt count(VsSdd a);
  /// Count over the variables of the subtree at a.offset (1 for true at 0).
  BigInt count_local(VsSdd a);

  std::uint64_t decomposition_visits() const { return visits_; }

 private:
  BigInt count_below(StructId a, NodeId k);
  BigInt factor(StructId a, NodeId k, NodeId scope);

  const VsManager* manager_;
  std::unordered_map<StructId, BigInt> cache_;
  std::uint64_t visits_ = 0;
};

/// Model count over all vtree variables.
BigInt count(const VsManager& m, VsSdd a);
/// Model count over `universe`. Every vtree variable the function depends on
/// must be in the universe (InvalidUniverse otherwise); universe variables
/// outside the vtree are free.
BigInt count(VsManager& m, VsSdd a, std::span<const Var> universe);

/// Assignment to variables 1..M, index 0 unused.
using Model = std::vector<bool>;

/// Calls `emit` for each model over all vtree variables, in depth-first order
/// over stored elements, free variables false before true in leaf preorder.
/// Stops early when `emit` returns false or after `limit` models (0 = all).
/// Returns the number of models emitted.
std::uint64_t enumerate_models(const VsManager& m, VsSdd a,
                               const std::function<bool(const Model&)>& emit,
                               std::uint64_t limit = 0);
std::vector<Model> models(const VsManager& m, VsSdd a, std::uint64_t limit = 0);
/// "X1=0 X2=1 ..."
std::string format_model(const Model& model);

bool entails(VsManager& m, VsSdd a, VsSdd b);
bool equivalent(VsManager& m, VsSdd a, VsSdd b);
bool satisfiable(VsManager& m, VsSdd a);
bool valid(VsManager& m, VsSdd a);
bool clausal_entails(VsManager& m, VsSdd a, std::span<const Literal> clause);
bool is_implicant(VsManager& m, VsSdd a, const Term& term);
VsSdd forget_singleton(VsManager& m, VsSdd a, Var x);

}  // namespace vssdd
