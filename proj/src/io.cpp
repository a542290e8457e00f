#include "vssdd/io.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "vssdd/error.hpp"

namespace vssdd {

namespace {

// Reachable structures ranked by height, ties broken by their element lists
// written in ranks of lower structures.
struct Ranking {
  std::vector<StructId> order;                  // rank -> structure
  std::unordered_map<StructId, std::size_t> rank;
};

std::vector<VsElement> ranked_elements(const VsStructure& s, const Ranking& r) {
  std::vector<VsElement> out;
  for (const auto& e : s.elements)
    out.push_back({static_cast<StructId>(r.rank.at(e.prime)), e.d, static_cast<StructId>(r.rank.at(e.sub)), e.e});
  std::sort(out.begin(), out.end());
  return out;
}

Ranking rank_structures(const VsManager& m, StructId root) {
  std::unordered_map<StructId, std::size_t> height;
  auto visit = [&](auto&& self, StructId s) -> std::size_t {
    if (auto it = height.find(s); it != height.end()) return it->second;
    std::size_t h = 0;
    for (const auto& e : m.structure(s).elements)
      h = std::max({h, self(self, e.prime) + 1, self(self, e.sub) + 1});
    height.emplace(s, h);
    return h;
  };
  visit(visit, root);
  std::map<std::size_t, std::vector<StructId>> levels;
  for (const auto& [s, h] : height) levels[h].push_back(s);
  Ranking r;
  for (auto& [h, ids] : levels) {
    if (h == 0) {
      std::sort(ids.begin(), ids.end());
    } else {
      std::vector<std::pair<std::pair<NodeId, std::vector<VsElement>>, StructId>> keyed;
      for (StructId s : ids) keyed.push_back({{m.structure(s).klass, ranked_elements(m.structure(s), r)}, s});
      std::sort(keyed.begin(), keyed.end());
      for (std::size_t i = 0; i < keyed.size(); ++i) ids[i] = keyed[i].second;
    }
    for (StructId s : ids) {
      r.rank.emplace(s, r.order.size());
      r.order.push_back(s);
    }
  }
  return r;
}

}  // namespace

std::string save_diagram(const VsManager& m, VsSdd root) {
  m.check(root);
  const Ranking r = rank_structures(m, root.structure);
  std::ostringstream out;
  out << "c mode " << mode_name(m.mode()) << '\n';
  out << "c compress " << (m.compressing() ? 1 : 0) << '\n';
  out << serialize_vtree(m.vtree());
  out << "vssdd " << r.order.size() << '\n';
  for (std::size_t id = 0; id < r.order.size(); ++id) {
    const StructId s = r.order[id];
    switch (s) {
      case VsManager::kFalse: out << "T " << id << " 0\n"; continue;
      case VsManager::kTrue: out << "T " << id << " 1\n"; continue;
      case VsManager::kLiteral: out << "V " << id << '\n'; continue;
      case VsManager::kNegLiteral: out << "NV " << id << '\n'; continue;
      default: break;
    }
    const VsStructure& st = m.structure(s);
    const auto elements = ranked_elements(st, r);
    out << "D " << id << ' ' << st.klass << ' ' << elements.size();
    for (const auto& e : elements) out << ' ' << e.prime << ' ' << e.d << ' ' << e.sub << ' ' << e.e;
    out << '\n';
  }
  out << "root " << r.rank.at(root.structure) << ' ' << root.offset << '\n';
  return out.str();
}

namespace {

struct Header {
  Mode mode = Mode::kTrimmed;
  bool compress = true;
  std::string vtree_text;
  std::size_t body_line = 0;  // first line after the vtree section
  std::vector<std::string> lines;
};

Header split(std::string_view text) {
  Header h;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) h.lines.push_back(line);
  std::size_t i = 0;
  for (; i < h.lines.size(); ++i) {
    std::istringstream ls(h.lines[i]);
    std::string tok;
    ls >> tok;
    if (tok == "vssdd") break;
    if (tok == "c") {
      std::string key;
      std::string value;
      ls >> key >> value;
      if (key == "mode") {
        if (value == "trimmed") h.mode = Mode::kTrimmed;
        else if (value == "normalized") h.mode = Mode::kNormalized;
        else throw ParseError(i + 1, "unknown mode '" + value + "'");
      } else if (key == "compress") {
        if (value != "0" && value != "1") throw ParseError(i + 1, "compress must be 0 or 1");
        h.compress = value == "1";
      }
    }
    h.vtree_text += h.lines[i];
    h.vtree_text += '\n';
  }
  if (i == h.lines.size()) throw ParseError(0, "missing 'vssdd' section");
  h.body_line = i;
  return h;
}

VsSdd load_body(VsManager& m, const Header& h) {
  std::size_t i = h.body_line;
  auto fail = [&](const std::string& msg) { throw ParseError(i + 1, msg); };
  std::istringstream head(h.lines[i]);
  std::string tok;
  long long count = -1;
  head >> tok >> count;
  if (count < 0) fail("malformed 'vssdd <count>' line");
  std::vector<StructId> ids;
  for (++i; i < h.lines.size(); ++i) {
    std::istringstream ls(h.lines[i]);
    if (!(ls >> tok) || tok == "c") continue;
    if (tok == "root") {
      long long sid = -1;
      long long offset = -1;
      if (!(ls >> sid >> offset) || sid < 0 || offset < 0) fail("malformed root line");
      if (static_cast<std::size_t>(sid) >= ids.size()) fail("root refers to an unknown structure");
      if (ids.size() != static_cast<std::size_t>(count)) fail("structure count does not match the header");
      const VsSdd root{m.tag(), ids[sid], static_cast<NodeId>(offset)};
      try {
        m.check(root);
      } catch (const ContractViolation& e) {
        fail(e.what());
      }
      return root;
    }
    long long id = -1;
    if (!(ls >> id) || id != static_cast<long long>(ids.size())) fail("structure ids must be consecutive from 0");
    if (tok == "T") {
      int value = -1;
      if (!(ls >> value) || (value != 0 && value != 1)) fail("malformed terminal line");
      ids.push_back(value ? VsManager::kTrue : VsManager::kFalse);
    } else if (tok == "V") {
      ids.push_back(VsManager::kLiteral);
    } else if (tok == "NV") {
      ids.push_back(VsManager::kNegLiteral);
    } else if (tok == "D") {
      long long klass = -1;
      long long n = -1;
      if (!(ls >> klass >> n) || klass <= 0 || n <= 0) fail("malformed decomposition line");
      std::vector<VsElement> elements;
      for (long long j = 0; j < n; ++j) {
        long long p = -1, d = 0, s = -1, e = 0;
        if (!(ls >> p >> d >> s >> e)) fail("decomposition line has too few elements");
        if (p < 0 || s < 0 || p >= id || s >= id) fail("element refers to an undefined structure");
        elements.push_back({ids[p], static_cast<Delta>(d), ids[s], static_cast<Delta>(e)});
      }
      if (ls >> tok) fail("trailing tokens on decomposition line");
      try {
        ids.push_back(m.intern_raw(std::move(elements), static_cast<NodeId>(klass)));
      } catch (const ContractViolation& e) {
        fail(e.what());
      }
    } else {
      fail("unknown line kind '" + tok + "'");
    }
  }
  throw ParseError(i, "missing root line");
}

}  // namespace

LoadedDiagram load_diagram(std::string_view text) {
  const Header h = split(text);
  LoadedDiagram out{VsManager(parse_vtree(h.vtree_text), h.mode, h.compress), {}};
  out.root = load_body(out.manager, h);
  return out;
}

VsSdd load_diagram_into(VsManager& m, std::string_view text) {
  const Header h = split(text);
  if (!(parse_vtree(h.vtree_text) == m.vtree())) throw InvalidInput("diagram uses a different vtree");
  if (h.mode != m.mode() || h.compress != m.compressing())
    throw InvalidInput("diagram was built with a different mode or compression setting");
  return load_body(m, h);
}

std::string export_dot(const VsManager& m, VsSdd root) {
  m.check(root);
  const Ranking r = rank_structures(m, root.structure);
  std::ostringstream out;
  out << "digraph vssdd {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  out << "  root [shape=point];\n";
  for (std::size_t id = 0; id < r.order.size(); ++id) {
    const StructId s = r.order[id];
    const VsStructure& st = m.structure(s);
    out << "  n" << id;
    switch (st.kind) {
      case VsStructure::Kind::kFalse: out << " [shape=box,label=\"F\"];\n"; continue;
      case VsStructure::Kind::kTrue: out << " [shape=box,label=\"T\"];\n"; continue;
      case VsStructure::Kind::kLiteral: out << " [shape=box,label=\"v\"];\n"; continue;
      case VsStructure::Kind::kNegLiteral: out << " [shape=box,label=\"-v\"];\n"; continue;
      case VsStructure::Kind::kDecomposition: break;
    }
    out << " [shape=record,label=\"";
    for (std::size_t i = 0; i < st.elements.size(); ++i) {
      if (i) out << '|';
      out << "{<p" << i << "> p|<s" << i << "> s}";
    }
    out << "\",xlabel=\"class " << st.klass << "\"];\n";
  }
  for (std::size_t id = 0; id < r.order.size(); ++id) {
    const VsStructure& st = m.structure(r.order[id]);
    for (std::size_t i = 0; i < st.elements.size(); ++i) {
      const auto& e = st.elements[i];
      out << "  n" << id << ":p" << i << " -> n" << r.rank.at(e.prime) << " [label=\"" << e.d << "\"];\n";
      out << "  n" << id << ":s" << i << " -> n" << r.rank.at(e.sub) << " [label=\"" << e.e << "\"];\n";
    }
  }
  out << "  root -> n" << r.rank.at(root.structure) << " [label=\"" << root.offset << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace vssdd
