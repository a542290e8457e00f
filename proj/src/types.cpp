#include "vssdd/types.hpp"

#include <algorithm>
#include <atomic>

#include "vssdd/error.hpp"

namespace vssdd {

namespace detail {

std::uint64_t next_manager_tag() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

}  // namespace detail

const char* op_name(Op op) {
  switch (op) {
    case Op::kAnd: return "and";
    case Op::kOr: return "or";
    case Op::kXor: return "xor";
  }
  return "?";
}

Term::Term(std::span<const Literal> literals) : literals_(literals.begin(), literals.end()) {
  std::sort(literals_.begin(), literals_.end(), [](const Literal& a, const Literal& b) {
    return a.var != b.var ? a.var < b.var : a.positive < b.positive;
  });
  literals_.erase(std::unique(literals_.begin(), literals_.end()), literals_.end());
  for (std::size_t i = 0; i < literals_.size(); ++i) {
    if (literals_[i].var == 0) throw InvalidTerm("term: variable 0 is not a variable");
    if (i > 0 && literals_[i].var == literals_[i - 1].var)
      throw InvalidTerm("term: contains both polarities of variable " +
                        std::to_string(literals_[i].var));
  }
}

int Term::value_of(Var v) const {
  auto it = std::lower_bound(literals_.begin(), literals_.end(), v,
                             [](const Literal& l, Var x) { return l.var < x; });
  if (it == literals_.end() || it->var != v) return -1;
  return it->positive ? 1 : 0;
}

}  // namespace vssdd
