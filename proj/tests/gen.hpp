#ifndef RW_TESTS_GEN_HPP
#define RW_TESTS_GEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rw/formula.hpp"
#include "rw/vocab.hpp"

namespace rwtest {

// Deterministic generator for property-style tests.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed * 2654435769ULL + 1) {}
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  int pick(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  bool chance(int percent) { return pick(100) < percent; }
};

inline rw::FormulaPtr gen_ep(Rng& rng, const rw::Vocabulary& vocab, const std::string& var,
                             int depth) {
  using namespace rw;
  if (depth <= 0 || rng.chance(45)) {
    int p = rng.pick(vocab.k());
    FormulaPtr lit = f_pred(vocab.unary_predicates[p], {Term{false, var}});
    return rng.chance(30) ? f_not(lit) : lit;
  }
  switch (rng.pick(4)) {
    case 0:
      return f_and(gen_ep(rng, vocab, var, depth - 1), gen_ep(rng, vocab, var, depth - 1));
    case 1:
      return f_or(gen_ep(rng, vocab, var, depth - 1), gen_ep(rng, vocab, var, depth - 1));
    case 2:
      return f_not(gen_ep(rng, vocab, var, depth - 1));
    default:
      return f_implies(gen_ep(rng, vocab, var, depth - 1), gen_ep(rng, vocab, var, depth - 1));
  }
}

inline rw::Rational gen_rational(Rng& rng) {
  static const int nums[] = {0, 1, 1, 1, 2, 3, 1, 3};
  static const int dens[] = {1, 2, 3, 4, 5, 4, 10, 10};
  int i = rng.pick(8);
  return rw::Rational(nums[i], dens[i]);
}

inline rw::PropExprPtr gen_prop_expr(Rng& rng, const rw::Vocabulary& vocab, int depth) {
  using namespace rw;
  std::string var = "v";
  if (depth <= 0 || rng.chance(50)) {
    switch (rng.pick(3)) {
      case 0:
        return p_const(gen_rational(rng));
      case 1:
        return p_prop(gen_ep(rng, vocab, var, 1), {var});
      default:
        return p_cond_prop(gen_ep(rng, vocab, var, 1), gen_ep(rng, vocab, var, 1), {var});
    }
  }
  switch (rng.pick(3)) {
    case 0:
      return p_sum(gen_prop_expr(rng, vocab, depth - 1), gen_prop_expr(rng, vocab, depth - 1));
    case 1:
      return p_product(p_const(gen_rational(rng)), gen_prop_expr(rng, vocab, depth - 1));
    default:
      return p_diff(gen_prop_expr(rng, vocab, depth - 1), p_const(gen_rational(rng)));
  }
}

// A random closed KB-side formula: unary predicates, at most one constant,
// proportion comparisons with tolerance indices 1..3.
inline rw::FormulaPtr gen_kb_formula(Rng& rng, const rw::Vocabulary& vocab, int depth) {
  using namespace rw;
  if (depth <= 0 || rng.chance(40)) {
    switch (rng.pick(4)) {
      case 0: {  // proportion comparison
        PropExprPtr lhs = gen_prop_expr(rng, vocab, 1);
        PropExprPtr rhs = p_const(gen_rational(rng));
        CmpOp op = rng.chance(50) ? CmpOp::ApproxEq : CmpOp::ApproxLeq;
        return f_compare(lhs, op, 1 + rng.pick(3), rhs);
      }
      case 1: {  // quantified essentially propositional
        FormulaPtr body = gen_ep(rng, vocab, "y", 1);
        return rng.chance(50) ? f_exists("y", body) : f_forall("y", body);
      }
      case 2: {  // ground literal
        if (vocab.constants.empty()) return f_exists("y", gen_ep(rng, vocab, "y", 1));
        int p = rng.pick(vocab.k());
        FormulaPtr lit = f_pred(vocab.unary_predicates[p], {Term{true, vocab.constants[0]}});
        return rng.chance(30) ? f_not(lit) : lit;
      }
      default:
        return rng.chance(50) ? f_true() : f_exists("y", gen_ep(rng, vocab, "y", 1));
    }
  }
  switch (rng.pick(3)) {
    case 0:
      return f_and(gen_kb_formula(rng, vocab, depth - 1), gen_kb_formula(rng, vocab, depth - 1));
    case 1:
      return f_or(gen_kb_formula(rng, vocab, depth - 1), gen_kb_formula(rng, vocab, depth - 1));
    default:
      return f_not(gen_kb_formula(rng, vocab, depth - 1));
  }
}

}  // namespace rwtest

#endif
