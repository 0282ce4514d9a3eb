#ifndef RW_FORMULA_HPP
#define RW_FORMULA_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rw/rational.hpp"
#include "rw/vocab.hpp"

namespace rw {

struct Formula;
struct PropExpr;
using FormulaPtr = std::shared_ptr<const Formula>;
using PropExprPtr = std::shared_ptr<const PropExpr>;

// A term is a variable or a constant symbol.
struct Term {
  bool is_constant = false;
  std::string name;

  bool operator==(const Term& o) const {
    return is_constant == o.is_constant && name == o.name;
  }
};

enum class CmpOp {
  ApproxEq,   // ~=[i]
  ApproxLeq,  // <~[i]
  ExactEq,    // =
  ExactLeq,   // <=
  ExactLt,    // <
  ExactGt,    // >
  ExactGeq,   // >=
};

bool cmp_is_approx(CmpOp op);

enum class FKind {
  True,
  False,
  Pred,     // predicate or relation application
  TermEq,   // t = t' (query side only)
  Not,
  And,
  Or,
  Implies,  // sugar
  Exists,
  Forall,   // sugar
  Compare,  // proportion comparison
};

enum class PKind {
  Const,     // exact rational constant
  Prop,      // ||psi||_X
  CondProp,  // ||psi | theta||_X
  Sum,
  Diff,
  Product,
  Epsilon,   // tolerance variable, L= only
};

struct PropExpr {
  PKind kind;
  Rational value;                  // Const
  FormulaPtr body;                 // Prop / CondProp: psi
  FormulaPtr cond;                 // CondProp: theta
  std::vector<std::string> vars;   // Prop / CondProp binder set (sorted, nonempty)
  PropExprPtr lhs, rhs;            // Sum / Diff / Product
  int tol_index = 0;               // Epsilon
};

struct Formula {
  FKind kind;
  std::string name;             // Pred: symbol name; Exists/Forall: bound variable
  std::vector<Term> args;       // Pred
  Term tlhs, trhs;              // TermEq
  FormulaPtr child, child2;     // Not: child; And/Or/Implies: child, child2
  PropExprPtr plhs, prhs;       // Compare
  CmpOp cmp = CmpOp::ExactEq;   // Compare
  int tol_index = 0;            // Compare, approx ops only
};

// Constructors (all values immutable after construction).
FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_pred(std::string name, std::vector<Term> args);
FormulaPtr f_term_eq(Term a, Term b);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_exists(std::string var, FormulaPtr body);
FormulaPtr f_forall(std::string var, FormulaPtr body);
FormulaPtr f_compare(PropExprPtr lhs, CmpOp op, int tol_index, PropExprPtr rhs);
FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs);  // true for empty
FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs);   // false for empty

PropExprPtr p_const(Rational v);
PropExprPtr p_prop(FormulaPtr body, std::vector<std::string> vars);
PropExprPtr p_cond_prop(FormulaPtr body, FormulaPtr cond, std::vector<std::string> vars);
PropExprPtr p_sum(PropExprPtr a, PropExprPtr b);
PropExprPtr p_diff(PropExprPtr a, PropExprPtr b);
PropExprPtr p_product(PropExprPtr a, PropExprPtr b);
PropExprPtr p_epsilon(int index);

// Structural equality.
bool equal(const FormulaPtr& a, const FormulaPtr& b);
bool equal(const PropExprPtr& a, const PropExprPtr& b);

// Tolerance vector: index -> positive rational (zero permitted only for the
// Gamma(KB[0]) route; oracle paths must call validate_positive()).
struct ToleranceVector {
  std::map<int, Rational> values;

  bool has(int i) const { return values.count(i) > 0; }
  const Rational& at(int i) const;
  void validate_positive() const;
  static ToleranceVector uniform(const Rational& v, int max_index);
};

// Syntactic inspection helpers.
void collect_tolerance_indices(const FormulaPtr& f, std::set<int>* out);
void collect_constants(const FormulaPtr& f, std::set<std::string>* out);
bool mentions_relation(const FormulaPtr& f, const Vocabulary& vocab);
bool mentions_term_equality(const FormulaPtr& f);
bool has_quantifier(const FormulaPtr& f);
bool has_proportion(const FormulaPtr& f);
bool has_approx_compare(const FormulaPtr& f);
int quantifier_rank(const FormulaPtr& f);
void free_variables(const FormulaPtr& f, std::set<std::string>* out);

// Essentially propositional: quantifier-free,
// proportion-free, no constants, free variables within {var}.
bool essentially_propositional(const FormulaPtr& f, const Vocabulary& vocab,
                               const std::string& var);

// Replaces every occurrence of constant c by variable var (Pred args and TermEq).
FormulaPtr substitute_constant_by_var(const FormulaPtr& f, const std::string& c,
                                      const std::string& var);

// Renames bound variables so that no two binders (quantifier or proportion
// subscript) share a name and binders never shadow free variables.
FormulaPtr rename_apart(const FormulaPtr& f);

// Rewrites Implies and Forall away (-> and forall are parser-level sugar).
FormulaPtr desugar(const FormulaPtr& f);

}  // namespace rw

#endif
