#ifndef RW_WORLD_HPP
#define RW_WORLD_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rw/formula.hpp"
#include "rw/rational.hpp"
#include "rw/vocab.hpp"

namespace rw {

// Finite model over domain {1..N} (stored 0-based). Elements carry their atom
// index; constants denote elements; relations are materialized tuple sets.
struct World {
  int N = 1;
  std::vector<int> atom_of;                       // size N, 0-based atom index
  std::map<std::string, int> constant_denotation; // constant -> element (0-based)
  std::map<std::string, std::set<std::vector<int>>> relation_tuples;

  bool pred_holds(const Vocabulary& vocab, int pred, int element) const {
    int k = vocab.k();
    return ((static_cast<unsigned>(atom_of[element]) >> (k - 1 - pred)) & 1u) == 0;
  }

  // pi(W): per-atom fraction of the domain, exact.
  std::vector<Rational> pi(const Vocabulary& vocab) const;
};

using Valuation = std::map<std::string, int>;

// Truth of f in (w, v, tau). f may be in the approximate language; it is
// translated and tau-substituted internally, so tau must cover every index.
bool eval(const World& w, const Valuation& v, const ToleranceVector& tau, const FormulaPtr& f,
          const Vocabulary& vocab);

// Truth of an epsilon-free exact formula (no translation pass).
bool eval_exact(const World& w, const Valuation& v, const FormulaPtr& f, const Vocabulary& vocab);

// Exact value of an epsilon-free proportion expression.
Rational eval_prop_exact(const World& w, const Valuation& v, const PropExprPtr& p,
                         const Vocabulary& vocab);

}  // namespace rw

#endif
