#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "vssdd/frontend.hpp"
#include "vssdd/oracle.hpp"
#include "vssdd/vs_manager.hpp"
#include "vssdd/vtree.hpp"

namespace support {

using namespace vssdd;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240531);
  return gen;
}

inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }
inline bool coin() { return uniform(0, 1) == 1; }

// Random full binary shape over a shuffled variable order.
inline Vtree random_vtree(Var n) {
  std::vector<Var> vars(n);
  std::iota(vars.begin(), vars.end(), 1);
  std::shuffle(vars.begin(), vars.end(), rng());
  std::vector<RawVtreeNode> raw;
  auto build = [&](auto&& self, std::size_t lo, std::size_t hi) -> std::size_t {
    if (hi - lo == 1) {
      raw.push_back({vars[lo], 0, 0});
      return raw.size() - 1;
    }
    const std::size_t mid = lo + static_cast<std::size_t>(uniform(1, static_cast<int>(hi - lo) - 1));
    const std::size_t l = self(self, lo, mid);
    const std::size_t r = self(self, mid, hi);
    raw.push_back({0, l, r});
    return raw.size() - 1;
  };
  const std::size_t root = build(build, 0, n);
  return Vtree::from_raw(raw, root);
}

inline Vtree random_standard_vtree(Var n) {
  std::vector<Var> vars(n);
  std::iota(vars.begin(), vars.end(), 1);
  std::shuffle(vars.begin(), vars.end(), rng());
  return coin() ? Vtree::balanced(vars) : Vtree::right_linear(vars);
}

inline Cnf random_cnf(Var vars, int clauses, int max_len = 3) {
  Cnf cnf;
  cnf.num_vars = vars;
  for (int i = 0; i < clauses; ++i) {
    Clause c;
    const int len = uniform(1, max_len);
    for (int j = 0; j < len; ++j) {
      const int v = uniform(1, static_cast<int>(vars));
      c.push_back(coin() ? v : -v);
    }
    cnf.clauses.push_back(c);
  }
  return cnf;
}

inline oracle::TruthTable random_table(Var n, int density_percent = 50) {
  return oracle::table_of(n, [&](std::uint64_t) { return uniform(0, 99) < density_percent; });
}

// Builds a table's function by Shannon expansion on variables 1..n; the
// result never passes through CNF compilation.
inline VsSdd from_table(VsManager& m, const oracle::TruthTable& t) {
  const Var n = t.num_vars();
  auto rec = [&](auto&& self, Var x, std::uint64_t fixed) -> VsSdd {
    if (x > n) return m.constant(t.get(fixed));
    const VsSdd lo = self(self, x + 1, fixed);
    const VsSdd hi = self(self, x + 1, fixed | (std::uint64_t{1} << (x - 1)));
    if (lo == hi) return lo;
    return m.disjoin(m.conjoin(m.literal(x, true), hi), m.conjoin(m.literal(x, false), lo));
  };
  return rec(rec, 1, 0);
}

inline Term random_term(Var n, int max_size) {
  std::vector<Literal> lits;
  std::vector<Var> vars(n);
  std::iota(vars.begin(), vars.end(), 1);
  std::shuffle(vars.begin(), vars.end(), rng());
  const int size = uniform(0, std::min<int>(max_size, static_cast<int>(n)));
  for (int i = 0; i < size; ++i) lits.push_back({vars[i], coin()});
  return Term(lits);
}

// All full binary shapes with `leaves` leaves, variables in leaf order.
inline std::vector<Vtree> all_shapes(Var leaves) {
  std::vector<std::vector<std::vector<RawVtreeNode>>> memo(leaves + 1);
  // Shapes as raw node lists whose last entry is the root, leaves labelled 0.
  memo[1] = {{{1, 0, 0}}};
  for (Var n = 2; n <= leaves; ++n) {
    for (Var l = 1; l < n; ++l) {
      for (const auto& a : memo[l]) {
        for (const auto& b : memo[n - l]) {
          std::vector<RawVtreeNode> t = a;
          const std::size_t off = t.size();
          for (auto node : b) {
            if (node.var == 0) {
              node.left += off;
              node.right += off;
            }
            t.push_back(node);
          }
          t.push_back({0, off - 1, t.size() - 1});
          memo[n].push_back(std::move(t));
        }
      }
    }
  }
  std::vector<Vtree> out;
  for (auto raw : memo[leaves]) {
    Var next = 1;
    // Label leaves in left-to-right order.
    auto label = [&](auto&& self, std::size_t i) -> void {
      if (raw[i].var != 0) {
        raw[i].var = next++;
        return;
      }
      self(self, raw[i].left);
      self(self, raw[i].right);
    };
    label(label, raw.size() - 1);
    out.push_back(Vtree::from_raw(raw, raw.size() - 1));
  }
  return out;
}

}  // namespace support
