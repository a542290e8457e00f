#pragma once

#include <string>
#include <string_view>

#include "vssdd/vs_manager.hpp"

namespace vssdd {

/// Text form of one diagram with its vtree inline:
///
///   c mode trimmed|normalized
///   c compress 0|1
///   vtree ... (vtree grammar)
///   vssdd <structure-count>
///   T <id> 0|1 | V <id> | NV <id> | D <id> <class> <n> (<prime> <d> <sub> <e>)*n
///   root <structure-id> <offset>
///
/// File ids depend only on the diagram's shape, so text -> load -> save
/// reproduces the text byte for byte.
std::string save_diagram(const VsManager& m, VsSdd root);

struct LoadedDiagram {
  VsManager manager;
  VsSdd root;
};

LoadedDiagram load_diagram(std::string_view text);
/// Loads into an existing manager; the file's vtree, mode and compression
/// must match the manager's (InvalidInput otherwise).
VsSdd load_diagram_into(VsManager& m, std::string_view text);

/// Graphviz drawing: decompositions as records of prime/sub ports, edges
/// labelled with deltas, the root edge labelled with the offset.
std::string export_dot(const VsManager& m, VsSdd root);

}  // namespace vssdd
