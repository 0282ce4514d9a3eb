#ifndef RW_DESCRIPTIONS_HPP
#define RW_DESCRIPTIONS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rw/constraint_ops.hpp"
#include "rw/formula.hpp"
#include "rw/vocab.hpp"

namespace rw {

// Complete description over a constant set Z: unary part
// (an atom per equality class), equality part (a partition of Z), and an
// optional non-unary part (relation tuples over classes). Building relation
// facts per class keeps descriptions consistent by construction.
struct CompleteDescription {
  std::vector<std::string> constants;  // Z, fixed order
  std::vector<int> eq_class;           // per constant -> class id
  std::vector<int> class_atom;         // per class -> 0-based atom
  std::map<std::string, std::set<std::vector<int>>> relation_tuples;  // over class ids
  bool has_relation_part = false;

  int n_classes() const { return static_cast<int>(class_atom.size()); }
  int atom_of(const std::string& c) const;
  bool all_distinct() const { return n_classes() == static_cast<int>(constants.size()); }
};

struct DescriptionOptions {
  long long budget = 200000;
  bool force_distinct = false;   // conjoin chi^{!=}
  bool with_relations = false;   // include the non-unary part
};

// Truth of a quantifier- and proportion-free formula over Z under D.
bool satisfies(const CompleteDescription& d, const FormulaPtr& f, const Vocabulary& vocab);

// All consistent complete descriptions over Z satisfying `constraint` (pass
// nullptr for no constraint).
std::vector<CompleteDescription> enumerate_descriptions(const std::vector<std::string>& Z,
                                                        const Vocabulary& vocab,
                                                        const FormulaPtr& constraint,
                                                        const DescriptionOptions& opt = {});

// F_[D](u): product of u at each constant's atom (depends only on the unary part).
double f_description(const CompleteDescription& d, const VectorXd& u);

// F_[xi](u) for essentially propositional xi, and the conditional version
// (nullopt when F_[psi](u) = 0).
double f_formula(const FormulaPtr& xi, const VectorXd& u, const Vocabulary& vocab,
                 const std::string& var = "x");
std::optional<double> f_cond(const FormulaPtr& phi, const FormulaPtr& psi, const VectorXd& u,
                             const Vocabulary& vocab, const std::string& var = "x");

// Pr_inf(phi | sigma* & D) for first-order phi: quantifier-free phi is decided
// by D; quantified phi over the unary language (plus equality) is evaluated in
// the saturated test model with quantifier_rank + |Z| + 1 witnesses per
// inhabited atom. Quantified phi mentioning a relation is unsupported.
struct ZeroOneUnsupported : std::runtime_error {
  explicit ZeroOneUnsupported(const std::string& m) : std::runtime_error(m) {}
};
int zero_one_limit(const FormulaPtr& phi, const SizeDescription& sigma_star,
                   const CompleteDescription& d, const Vocabulary& vocab);

}  // namespace rw

#endif
