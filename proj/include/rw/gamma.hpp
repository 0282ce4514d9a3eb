#ifndef RW_GAMMA_HPP
#define RW_GAMMA_HPP

#include <string>
#include <vector>

#include "rw/canonical.hpp"
#include "rw/formula.hpp"

namespace rw {

// Relation of an instantiated polynomial constraint "poly REL 0".
enum class Rel { EQ, LE, LT, GE, GT };

inline bool rel_is_strict(Rel r) { return r == Rel::LT || r == Rel::GT; }

// One symbolic constraint of Gamma(KB): polynomials over u_1..u_K, with the
// tolerance slack kept separate so any tau (including 0) can be substituted.
struct SymbolicConstraint {
  enum class Kind {
    EqZero,  // t' = 0
    GtZero,  // t' > 0
    TolLe,   // t - eps_i * t' <= 0
    TolGt,   // t - eps_i * t' > 0   (negated tolerance comparison)
  };
  Kind kind;
  AtomPoly t;       // unused for EqZero / GtZero
  AtomPoly tprime;
  int tol_index = 0;
};

struct SymbolicCell {
  std::vector<SymbolicConstraint> constraints;
};

// Gamma(KB): disjunction of conjunctions of polynomial constraints over the
// simplex variables, with eps symbols still present.
struct ConstraintFormula {
  int K = 1;
  std::vector<SymbolicCell> cells;
};

struct InstConstraint {
  AtomPoly poly;  // over u variables, exact rational coefficients
  Rel rel;        // poly REL 0
};

struct InstCell {
  std::vector<InstConstraint> constraints;
};

struct InstConstraintFormula {
  int K = 1;
  std::vector<InstCell> cells;
};

ConstraintFormula gamma(const CanonicalForm& cf);

// Gamma(KB[tau]): substitute tau (zeros allowed) into every tolerance slack.
InstConstraintFormula instantiate(const ConstraintFormula& g, const ToleranceVector& tau);

// Gamma^<=(KB[0]): instantiate at 0 and weaken every strict inequality.
InstConstraintFormula gamma_weakened(const ConstraintFormula& g);

// Exact membership of a rational point (strict constraints strictly).
bool cell_satisfied(const InstCell& cell, const std::vector<Rational>& u);
bool formula_satisfied(const InstConstraintFormula& g, const std::vector<Rational>& u);

// Region descriptor: per-cell constraint data plus convexity metadata; strict
// constraints are tracked (they are solved over the closed relaxation, which
// realizes the closure the solution space is defined as, and audited afterwards).
struct RegionCell {
  std::vector<InstConstraint> constraints;
  bool linear = true;
  bool has_strict = false;
};

struct RegionDescriptor {
  int K = 1;
  std::vector<RegionCell> cells;  // conjunctive cells; the region is their union

  bool all_linear() const {
    for (auto& c : cells)
      if (!c.linear) return false;
    return true;
  }
};

RegionDescriptor solution_space(const ConstraintFormula& g, const ToleranceVector& tau);
RegionDescriptor region_from_instantiated(const InstConstraintFormula& g);

// Printing for the `constraints` subcommand: symbolic Gamma with eps symbols
// like "u1 + u2 <= (0.8 + e1)*(u1 + u2 + u5 + u6)", or instantiated cells.
std::string print_symbolic(const ConstraintFormula& g);
std::string print_instantiated(const InstConstraintFormula& g);
std::string print_upoly(const AtomPoly& p);

}  // namespace rw

#endif
