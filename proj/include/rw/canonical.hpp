#ifndef RW_CANONICAL_HPP
#define RW_CANONICAL_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rw/atoms.hpp"
#include "rw/formula.hpp"
#include "rw/vocab.hpp"

namespace rw {

// Polynomial over atomic proportion terms ||A_j(x)||_x, rational coefficients.
struct AtomPoly {
  std::map<std::vector<int>, Rational> mono;  // sorted 0-based atom ids -> coeff

  bool is_zero() const { return mono.empty(); }
  bool is_constant() const { return mono.empty() || (mono.size() == 1 && mono.begin()->first.empty()); }
  Rational constant_value() const { return mono.empty() ? Rational(0) : mono.begin()->second; }
  // Def-3.3 positivity: every coefficient strictly positive (vacuous for 0).
  bool positive() const;
  void add_term(std::vector<int> m, const Rational& c);
  AtomPoly operator+(const AtomPoly& o) const;
  AtomPoly operator-(const AtomPoly& o) const;
  AtomPoly operator*(const AtomPoly& o) const;
  static AtomPoly constant(const Rational& c);
  static AtomPoly atom(int idx0);
  Rational eval(const std::vector<Rational>& u) const;
  std::string key() const;  // deterministic serialization
};

struct CanonConstraint {
  enum class Kind {
    ZeroEq,     // t' = 0, t' positive (or the vacuous 0 = 0)
    Pos,        // t' > 0, t' positive
    TolLeq,     //   t <= t' * eps_i   (with t' > 0 bundled when t' nonconstant)
    NegTolLeq,  // !(t <= t' * eps_i)  (with t' > 0 bundled)
  };
  Kind kind;
  AtomPoly t;       // unused for ZeroEq / Pos
  AtomPoly tprime;
  int tol_index = 0;

  std::string key() const;
};

struct CanonDisjunct {
  std::map<std::string, int> constant_atom;  // c -> 0-based atom (A_i(c))
  std::set<int> must_exist;                  // exists x A_i(x)
  std::set<int> must_not_exist;              // !exists x A_i(x)
  std::vector<CanonConstraint> constraints;

  std::string key() const;
};

struct CanonicalForm {
  int K = 1;
  std::vector<CanonDisjunct> disjuncts;  // empty means FALSE
};

struct CanonicalError : std::runtime_error {
  explicit CanonicalError(const std::string& m) : std::runtime_error(m) {}
};

struct CanonicalOptions {
  int max_disjuncts = 4096;
  int max_case_split = 12;  // basic subformulas pulled per quantifier
};

// Scope flattening: no quantifier (including proportion subscripts) keeps
// in scope any constant or variable other than the ones it binds.
FormulaPtr flatten(const FormulaPtr& xi, const Vocabulary& vocab,
                   const CanonicalOptions& opt = {});

// Scope-audit predicate for the output of flatten.
bool is_flat(const FormulaPtr& f);

// Canonicalization: rename apart, flatten, translate, rewrite over
// atoms, DNF, drop inconsistent disjuncts.
CanonicalForm to_canonical(const FormulaPtr& kb, const Vocabulary& vocab,
                           const CanonicalOptions& opt = {});

// Canonical form rendered back as a formula in the concrete grammar
// (re-parses and re-canonicalizes to itself up to disjunct order).
FormulaPtr canonical_to_formula(const CanonicalForm& cf, const Vocabulary& vocab);

// Constant-propagation simplifier (true/false folding, trivial quantifiers).
FormulaPtr simplify_constants(const FormulaPtr& f);

}  // namespace rw

#endif
