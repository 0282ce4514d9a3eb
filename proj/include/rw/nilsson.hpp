#ifndef RW_NILSSON_HPP
#define RW_NILSSON_HPP

#include <optional>
#include <string>
#include <vector>

#include "rw/belief.hpp"
#include "rw/formula.hpp"

namespace rw {

// Pr(beta | beta') REL bound(s) over propositions p_1..p_k. Propositional
// formulas are represented as essentially propositional formulas over the
// corresponding unary predicates applied to "x".
struct PropConstraint {
  FormulaPtr beta;
  FormulaPtr beta_prime;  // null for unconditional
  enum class Kind { Eq, Le, Ge, Interval } kind = Kind::Eq;
  Rational lo, hi;  // Eq/Le/Ge use lo; Interval uses both
};

struct PropConstraintSet {
  Vocabulary vocab;  // unary predicates named after the propositions
  std::vector<PropConstraint> constraints;
};

struct NilssonTranslation {
  std::vector<FormulaPtr> kb;  // KB'[Lambda] plus psi(c) when querying
  FormulaPtr phi;              // xi_beta(c)
  FormulaPtr psi;              // xi_beta'(c)
  Vocabulary vocab;            // with the fresh query constant
};

// Lambda -> KB'[Lambda]; fresh tolerance index per comparison.
NilssonTranslation nilsson_translate(const PropConstraintSet& lambda, const FormulaPtr& beta,
                                     const FormulaPtr& beta_prime);

// Pr_{mu*}(beta | beta') via the random-worlds route (believe_simple on the
// translation).
BeliefResult nilsson_believe(const PropConstraintSet& lambda, const FormulaPtr& beta,
                             const FormulaPtr& beta_prime, const BeliefConfig& cfg = {});

// Independent route for the two-route check: maximum entropy directly over
// the 2^k-outcome distribution space, bypassing the formula pipeline.
struct DirectMaxEnt {
  bool feasible = false;
  VectorXd mu;
  std::optional<double> query_value;  // Pr_mu*(beta | beta')
};
DirectMaxEnt nilsson_direct(const PropConstraintSet& lambda, const FormulaPtr& beta,
                            const FormulaPtr& beta_prime, const MaxEntOptions& opt = {});

}  // namespace rw

#endif
