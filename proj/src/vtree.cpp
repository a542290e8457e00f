#include "vssdd/vtree.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>
#include <utility>

#include "vssdd/error.hpp"

namespace vssdd {

Vtree Vtree::from_raw(std::span<const RawVtreeNode> raw, std::size_t root) {
  if (raw.empty() || root >= raw.size()) throw InvalidInput("vtree: empty node list or bad root");
  Vtree t;
  t.nodes_.resize(1);
  std::vector<bool> seen(raw.size(), false);
  std::size_t leaves = 0;
  for (const auto& n : raw) leaves += n.var != 0;

  // Iterative preorder: pop, number, push right then left.
  struct Frame {
    std::size_t raw_index;
    NodeId parent;
    bool is_left;
  };
  std::vector<Frame> stack{{root, 0, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.raw_index >= raw.size()) throw InvalidInput("vtree: dangling child reference");
    if (seen[f.raw_index]) throw InvalidInput("vtree: node reachable twice");
    seen[f.raw_index] = true;
    const RawVtreeNode& r = raw[f.raw_index];
    const auto id = static_cast<NodeId>(t.nodes_.size());
    Node n;
    n.parent = f.parent;
    n.var = r.var;
    t.nodes_.push_back(n);
    if (f.parent != 0) {
      if (f.is_left) t.nodes_[f.parent].left = id;
      else t.nodes_[f.parent].right = id;
    }
    if (r.var == 0) {
      stack.push_back({r.right, id, false});
      stack.push_back({r.left, id, true});
    }
  }
  if (std::count(seen.begin(), seen.end(), true) != static_cast<std::ptrdiff_t>(raw.size()))
    throw InvalidInput("vtree: unreachable nodes");

  t.num_vars_ = static_cast<Var>(leaves);
  t.leaf_of_.assign(leaves + 1, 0);
  for (NodeId id = 1; id < t.nodes_.size(); ++id) {
    const Var v = t.nodes_[id].var;
    if (v == 0) continue;
    if (v > leaves || t.leaf_of_[v] != 0)
      throw InvalidInput("vtree: leaf variables must be a bijection with 1..M");
    t.leaf_of_[v] = id;
  }
  t.build_indexes();
  return t;
}

namespace {

std::size_t add_balanced(std::vector<RawVtreeNode>& raw, std::span<const Var> vars) {
  if (vars.size() == 1) {
    raw.push_back({vars[0], 0, 0});
    return raw.size() - 1;
  }
  const std::size_t half = (vars.size() + 1) / 2;
  const std::size_t l = add_balanced(raw, vars.first(half));
  const std::size_t r = add_balanced(raw, vars.subspan(half));
  raw.push_back({0, l, r});
  return raw.size() - 1;
}

std::vector<Var> iota_vars(Var n) {
  std::vector<Var> v(n);
  for (Var i = 0; i < n; ++i) v[i] = i + 1;
  return v;
}

}  // namespace

Vtree Vtree::balanced(std::span<const Var> variables) {
  if (variables.empty()) throw InvalidInput("vtree: empty variable list");
  std::vector<RawVtreeNode> raw;
  const std::size_t root = add_balanced(raw, variables);
  return from_raw(raw, root);
}

Vtree Vtree::right_linear(std::span<const Var> variables) {
  if (variables.empty()) throw InvalidInput("vtree: empty variable list");
  std::vector<RawVtreeNode> raw;
  raw.push_back({variables.back(), 0, 0});
  std::size_t acc = 0;
  for (std::size_t i = variables.size() - 1; i-- > 0;) {
    raw.push_back({variables[i], 0, 0});
    raw.push_back({0, raw.size() - 1, acc});
    acc = raw.size() - 1;
  }
  return from_raw(raw, acc);
}

Vtree Vtree::balanced(Var num_vars) {
  const auto v = iota_vars(num_vars);
  return balanced(std::span<const Var>(v));
}

Vtree Vtree::right_linear(Var num_vars) {
  const auto v = iota_vars(num_vars);
  return right_linear(std::span<const Var>(v));
}

void Vtree::build_indexes() {
  const NodeId n = num_nodes();
  for (NodeId id = n; id >= 1; --id) {
    Node& nd = nodes_[id];
    nd.leaves = nd.var != 0 ? 1 : nodes_[nd.left].leaves + nodes_[nd.right].leaves;
  }
  for (NodeId id = 2; id <= n; ++id) nodes_[id].depth = nodes_[nodes_[id].parent].depth + 1;

  // Exact shape interning: leaf shape 0, internal shape = interned (left, right).
  std::vector<std::uint32_t> shape(n + 1, 0);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> shapes;
  for (NodeId id = n; id >= 1; --id) {
    const Node& nd = nodes_[id];
    if (nd.var != 0) continue;
    auto key = std::make_pair(shape[nd.left], shape[nd.right]);
    auto [it, fresh] = shapes.try_emplace(key, static_cast<std::uint32_t>(shapes.size() + 1));
    shape[id] = it->second;
  }
  std::map<std::uint32_t, NodeId> rep;
  for (NodeId id = 1; id <= n; ++id) {
    auto [it, fresh] = rep.try_emplace(shape[id], id);
    nodes_[id].iso = it->second;
  }

  // Euler tour.
  euler_.clear();
  first_.assign(n + 1, 0);
  struct Frame {
    NodeId id;
    int stage;
  };
  std::vector<Frame> stack{{root(), 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    const Node& nd = nodes_[f.id];
    if (f.stage == 0) first_[f.id] = static_cast<std::uint32_t>(euler_.size());
    euler_.push_back(f.id);
    if (nd.var != 0 || f.stage == 2) {
      stack.pop_back();
      continue;
    }
    const NodeId child = f.stage == 0 ? nd.left : nd.right;
    ++f.stage;
    stack.push_back({child, 0});
  }
  const std::size_t m = euler_.size();
  const int levels = std::bit_width(m);
  sparse_.assign(levels, {});
  sparse_[0].resize(m);
  for (std::uint32_t i = 0; i < m; ++i) sparse_[0][i] = i;
  for (int k = 1; k < levels; ++k) {
    const std::size_t span = std::size_t{1} << k;
    sparse_[k].resize(m - span + 1);
    for (std::size_t i = 0; i + span <= m; ++i) {
      const auto a = sparse_[k - 1][i];
      const auto b = sparse_[k - 1][i + span / 2];
      sparse_[k][i] = nodes_[euler_[a]].depth <= nodes_[euler_[b]].depth ? a : b;
    }
  }
}

void Vtree::check(NodeId id) const {
  if (id == 0 || id >= nodes_.size())
    throw InvalidId("vtree: node id " + std::to_string(id) + " out of range");
}

bool Vtree::is_leaf(NodeId id) const {
  check(id);
  return nodes_[id].var != 0;
}

NodeId Vtree::left(NodeId id) const {
  check(id);
  return nodes_[id].left;
}

NodeId Vtree::right(NodeId id) const {
  check(id);
  return nodes_[id].right;
}

NodeId Vtree::parent(NodeId id) const {
  check(id);
  return nodes_[id].parent;
}

Var Vtree::var_of(NodeId id) const {
  check(id);
  return nodes_[id].var;
}

NodeId Vtree::leaf_of(Var v) const {
  if (v == 0 || v > num_vars_) throw InvalidInput("vtree: unknown variable " + std::to_string(v));
  return leaf_of_[v];
}

std::uint32_t Vtree::leaf_count(NodeId id) const {
  check(id);
  return nodes_[id].leaves;
}

std::uint32_t Vtree::depth(NodeId id) const {
  check(id);
  return nodes_[id].depth;
}

bool Vtree::contains(NodeId anc, NodeId desc) const {
  check(anc);
  check(desc);
  return anc <= desc && desc <= subtree_end(anc);
}

NodeId Vtree::lca(NodeId u, NodeId w) const {
  if (u >= nodes_.size() || w >= nodes_.size())
    throw InvalidId("vtree: lca argument out of range");
  if (u == 0) return w;
  if (w == 0) return u;
  auto a = first_[u];
  auto b = first_[w];
  if (a > b) std::swap(a, b);
  const int k = std::bit_width(b - a + 1) - 1;
  const auto x = sparse_[k][a];
  const auto y = sparse_[k][b - (1u << k) + 1];
  return nodes_[euler_[x]].depth <= nodes_[euler_[y]].depth ? euler_[x] : euler_[y];
}

NodeId Vtree::iso_class(NodeId w) const {
  check(w);
  return nodes_[w].iso;
}

std::optional<std::int64_t> Vtree::shift_delta(NodeId u, NodeId w) const {
  if (iso_class(u) != iso_class(w)) return std::nullopt;
  return static_cast<std::int64_t>(w) - static_cast<std::int64_t>(u);
}

Side Vtree::descendant_side(NodeId anc, NodeId desc) const {
  if (anc >= nodes_.size() || desc >= nodes_.size())
    throw InvalidId("vtree: descendant_side argument out of range");
  if (anc == desc) return Side::equal;
  if (desc == 0) return Side::right;
  if (anc == 0) return Side::unrelated;
  const Node& a = nodes_[anc];
  if (a.var != 0) return Side::unrelated;
  if (anc < desc && desc < a.right) return Side::left;
  if (a.right <= desc && desc <= subtree_end(anc)) return Side::right;
  return Side::unrelated;
}

std::vector<Var> Vtree::variables_under(NodeId id) const {
  std::vector<Var> out;
  for (NodeId i = id; i <= subtree_end(id); ++i)
    if (nodes_[i].var != 0) out.push_back(nodes_[i].var);
  return out;
}

bool Vtree::operator==(const Vtree& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (nodes_[i].var != other.nodes_[i].var || nodes_[i].left != other.nodes_[i].left) return false;
  return true;
}

bool Vtree::same_shape(const Vtree& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if ((nodes_[i].var == 0) != (other.nodes_[i].var == 0) || nodes_[i].left != other.nodes_[i].left)
      return false;
  return true;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t to_uint(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

}  // namespace

Vtree parse_vtree(std::string_view text) {
  std::map<std::uint64_t, std::size_t> index;  // external id -> raw index
  std::map<std::uint64_t, std::size_t> line_of;
  std::vector<RawVtreeNode> raw;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> children;  // external ids
  std::optional<std::uint64_t> declared;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "c") continue;
    if (tok[0] == "vtree") {
      if (declared) throw ParseError(line_no, "duplicate vtree header");
      if (tok.size() != 2) throw ParseError(line_no, "malformed header, expected 'vtree <count>'");
      declared = to_uint(tok[1], line_no);
      continue;
    }
    if (!declared) throw ParseError(line_no, "node line before 'vtree' header");
    std::uint64_t id = 0;
    if (tok[0] == "L") {
      if (tok.size() != 3) throw ParseError(line_no, "malformed leaf line, expected 'L <id> <var>'");
      id = to_uint(tok[1], line_no);
      const auto var = to_uint(tok[2], line_no);
      if (var == 0 || var > 0xffffffffu) throw ParseError(line_no, "variable out of range");
      raw.push_back({static_cast<Var>(var), 0, 0});
      children.emplace_back(0, 0);
    } else if (tok[0] == "I") {
      if (tok.size() != 4)
        throw ParseError(line_no, "malformed internal line, expected 'I <id> <left> <right>'");
      id = to_uint(tok[1], line_no);
      raw.push_back({0, 0, 0});
      children.emplace_back(to_uint(tok[2], line_no), to_uint(tok[3], line_no));
    } else {
      throw ParseError(line_no, "unknown line type '" + std::string(tok[0]) + "'");
    }
    if (!index.emplace(id, raw.size() - 1).second)
      throw ParseError(line_no, "duplicate node id " + std::to_string(id));
    line_of[id] = line_no;
  }
  if (!declared) throw ParseError(0, "missing 'vtree' header");
  if (raw.empty()) throw ParseError(0, "vtree has no nodes");
  if (*declared != raw.size())
    throw ParseError(0, "header declares " + std::to_string(*declared) + " nodes but " +
                            std::to_string(raw.size()) + " were given");

  std::vector<bool> is_child(raw.size(), false);
  for (const auto& [ext, idx] : index) {
    if (raw[idx].var != 0) continue;
    const auto [l, r] = children[idx];
    for (auto c : {l, r}) {
      auto it = index.find(c);
      if (it == index.end())
        throw ParseError(line_of[ext], "dangling child id " + std::to_string(c));
      if (is_child[it->second])
        throw ParseError(line_of[ext], "node " + std::to_string(c) + " has two parents");
      is_child[it->second] = true;
    }
    raw[idx].left = index[l];
    raw[idx].right = index[r];
  }
  std::size_t root = raw.size();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (is_child[i]) continue;
    if (root != raw.size()) throw ParseError(0, "vtree has more than one root");
    root = i;
  }
  if (root == raw.size()) throw ParseError(0, "vtree has no root (cycle)");
  try {
    return Vtree::from_raw(raw, root);
  } catch (const InvalidInput& e) {
    throw ParseError(0, e.what());
  }
}

std::string serialize_vtree(const Vtree& vtree) {
  std::ostringstream os;
  os << "vtree " << vtree.num_nodes() << '\n';
  // Postorder so that children precede parents.
  std::vector<std::pair<NodeId, bool>> stack{{vtree.root(), false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    if (vtree.is_leaf(id)) {
      os << "L " << id << ' ' << vtree.var_of(id) << '\n';
    } else if (expanded) {
      os << "I " << id << ' ' << vtree.left(id) << ' ' << vtree.right(id) << '\n';
    } else {
      stack.push_back({id, true});
      stack.push_back({vtree.right(id), false});
      stack.push_back({vtree.left(id), false});
    }
  }
  return os.str();
}

}  // namespace vssdd
