#ifndef RW_DEFAULTS_HPP
#define RW_DEFAULTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "rw/belief.hpp"
#include "rw/formula.hpp"

namespace rw {

// B -> C (default) or B => C (strict), B and C propositional formulas
// represented over unary predicates applied to "x".
struct DefaultRule {
  FormulaPtr premise;
  FormulaPtr conclusion;
  bool strict = false;
};

struct DefaultRuleSet {
  Vocabulary vocab;
  std::vector<DefaultRule> rules;
};

// Rules-file grammar: `Bird -> Fly;` (default), `Penguin => Bird;` (strict);
// sides are propositional formulas over identifiers with !, &, |, parentheses.
DefaultRuleSet parse_rules(const std::string& text);
DefaultRuleSet parse_rules_with_query(const std::string& text, const std::string& query,
                                      DefaultRule* query_rule);

// theta_r per rule: defaults share tolerance index 1; strict rules become
// universally quantified implications.
FormulaPtr defaults_translate(const DefaultRuleSet& rules);

enum class MEVerdict { True, False, Undefined, Inconclusive };

struct METrace {
  Rational tau;
  std::optional<double> value;
  std::string status;
};

struct MEPlausibleResult {
  MEVerdict verdict = MEVerdict::Inconclusive;
  std::vector<METrace> trace;
  double fitted_slope = 0;  // c with 1 - value ~= c * tau on the trailing points
  std::string note;
};

// Evaluates Pr^tau(xi_C(c) | xi_B(c) & /\ theta_r) along a decreasing shared
// tolerance and extrapolates: TRUE when the deficit 1-value shrinks at least
// proportionally to tau; UNDEFINED when the premise is inconsistent with the
// rules at every probed tau.
MEPlausibleResult me_plausible(const DefaultRuleSet& rules, const DefaultRule& query,
                               const BeliefConfig& cfg = {});

}  // namespace rw

#endif
