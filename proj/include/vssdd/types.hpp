#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vssdd/vtree.hpp"

namespace vssdd {

using BigInt = boost::multiprecision::cpp_int;

enum class Op : std::uint8_t { kAnd, kOr, kXor };

inline bool eval_op(Op op, bool a, bool b) {
  switch (op) {
    case Op::kAnd: return a && b;
    case Op::kOr: return a || b;
    case Op::kXor: return a != b;
  }
  return false;
}

const char* op_name(Op op);

struct Literal {
  Var var = 0;
  bool positive = true;

  Literal negated() const { return {var, !positive}; }
  /// DIMACS-style signed encoding.
  std::int64_t signed_value() const { return positive ? std::int64_t{var} : -std::int64_t{var}; }
  static Literal from_signed(std::int64_t v) {
    return {static_cast<Var>(v < 0 ? -v : v), v > 0};
  }
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Consistent set of literals (a conjunction). Duplicates are folded.
class Term {
 public:
  Term() = default;
  /// Throws InvalidTerm when the set contains X and not X.
  explicit Term(std::span<const Literal> literals);
  Term(std::initializer_list<Literal> literals)
      : Term(std::span<const Literal>(literals.begin(), literals.size())) {}

  std::span<const Literal> literals() const { return literals_; }
  bool empty() const { return literals_.empty(); }
  std::size_t size() const { return literals_.size(); }
  /// Value assigned to v: 1, 0, or -1 when unassigned.
  int value_of(Var v) const;

 private:
  std::vector<Literal> literals_;  // sorted by var
};

namespace detail {

inline void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace detail

}  // namespace vssdd
