#ifndef RW_TRANSLATE_HPP
#define RW_TRANSLATE_HPP

#include <map>
#include <string>
#include <vector>

#include "rw/formula.hpp"

namespace rw {

// Polynomial over proportion-term symbols with rational coefficients.
// Symbols are interned per Workspace; a monomial is a sorted id multiset.
struct TermSymbol {
  FormulaPtr body;
  std::vector<std::string> vars;
  FormulaPtr cond;  // null for unconditional symbols
  std::string key;
};

class SymTable {
 public:
  int intern(const PropExprPtr& term);             // Prop or CondProp
  int intern_uncond(FormulaPtr body, std::vector<std::string> vars);
  const TermSymbol& at(int id) const { return syms_[id]; }
  int size() const { return static_cast<int>(syms_.size()); }

 private:
  std::vector<TermSymbol> syms_;
  std::map<std::string, int> by_key_;
};

struct SymPoly {
  // monomial (sorted symbol ids with multiplicity) -> coefficient
  std::map<std::vector<int>, Rational> mono;

  bool is_zero() const { return mono.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // valid when is_constant()
  void add_term(std::vector<int> m, const Rational& c);

  SymPoly operator+(const SymPoly& o) const;
  SymPoly operator-(const SymPoly& o) const;
  SymPoly operator*(const SymPoly& o) const;
  static SymPoly constant(const Rational& c);
  static SymPoly symbol(int id);
};

// Builds the polynomial of an epsilon-free proportion expression over interned
// term symbols. Conditional terms intern as conditional symbols.
SymPoly prop_to_poly(const PropExprPtr& p, SymTable* table);

// Rebuilds a deterministic PropExpr from a polynomial.
PropExprPtr poly_to_expr(const SymPoly& poly, const SymTable& table);

// chi -> chi*: replaces ~=[i] / <~[i] with epsilon comparisons and clears
// conditional proportions by multiplying out, so tolerances scale with the
// condition (t <= t' * eps_i with t' a product of condition proportions).
FormulaPtr to_exact(const FormulaPtr& chi);

// chi*[tau]: replaces every eps_i by tau_i. Zero values are permitted (the
// Gamma(KB[0]) route). Throws on a missing index.
FormulaPtr substitute_tau(const FormulaPtr& chi_star, const ToleranceVector& tau);

}  // namespace rw

#endif
