#include "rw/atoms.hpp"

#include <stdexcept>

namespace rw {

std::vector<Atom> atoms_of(const Vocabulary& vocab) {
  int K = vocab.atom_count();
  std::vector<Atom> out;
  out.reserve(K);
  for (int m = 0; m < K; ++m) out.push_back(Atom{m + 1, static_cast<unsigned>(m)});
  return out;
}

int atom_index_of_signs(const std::vector<bool>& signs) {
  unsigned mask = 0;
  int k = static_cast<int>(signs.size());
  for (int i = 0; i < k; ++i)
    if (!signs[i]) mask |= (1u << (k - 1 - i));
  return static_cast<int>(mask);
}

// Evaluates a quantifier/proportion/constant-free formula whose only leaves
// are P(x) literals, under the sign pattern of one atom.
static bool eval_under_atom(const FormulaPtr& f, const Vocabulary& vocab, unsigned mask) {
  int k = vocab.k();
  switch (f->kind) {
    case FKind::True:
      return true;
    case FKind::False:
      return false;
    case FKind::Pred: {
      int p = vocab.predicate_index(f->name);
      if (p < 0 || f->args.size() != 1)
        throw std::invalid_argument("atom_set: not essentially propositional: " + f->name);
      return ((mask >> (k - 1 - p)) & 1u) == 0;
    }
    case FKind::Not:
      return !eval_under_atom(f->child, vocab, mask);
    case FKind::And:
      return eval_under_atom(f->child, vocab, mask) && eval_under_atom(f->child2, vocab, mask);
    case FKind::Or:
      return eval_under_atom(f->child, vocab, mask) || eval_under_atom(f->child2, vocab, mask);
    case FKind::Implies:
      return !eval_under_atom(f->child, vocab, mask) || eval_under_atom(f->child2, vocab, mask);
    default:
      throw std::invalid_argument("atom_set: not essentially propositional");
  }
}

bool atom_satisfies(const FormulaPtr& xi, const Vocabulary& vocab, unsigned atom_mask) {
  return eval_under_atom(xi, vocab, atom_mask);
}

std::set<int> atom_set(const FormulaPtr& xi, const Vocabulary& vocab, const std::string& var) {
  if (!essentially_propositional(xi, vocab, var))
    throw std::invalid_argument("atom_set: input is not essentially propositional");
  std::set<int> out;
  int K = vocab.atom_count();
  for (int m = 0; m < K; ++m)
    if (eval_under_atom(xi, vocab, static_cast<unsigned>(m))) out.insert(m);
  return out;
}

FormulaPtr atom_formula(const Vocabulary& vocab, int atom_idx0, const Term& t) {
  int k = vocab.k();
  if (k == 0) return f_true();  // the empty-conjunction atom
  std::vector<FormulaPtr> parts;
  for (int i = 0; i < k; ++i) {
    auto lit = f_pred(vocab.unary_predicates[i], {t});
    bool pos = ((static_cast<unsigned>(atom_idx0) >> (k - 1 - i)) & 1u) == 0;
    parts.push_back(pos ? lit : f_not(lit));
  }
  return f_and_all(parts);
}

std::string atom_name(const Vocabulary& vocab, int atom_idx0) {
  int k = vocab.k();
  if (k == 0) return "true";
  std::string s;
  for (int i = 0; i < k; ++i) {
    if (i) s += " & ";
    bool pos = ((static_cast<unsigned>(atom_idx0) >> (k - 1 - i)) & 1u) == 0;
    if (!pos) s += "!";
    s += vocab.unary_predicates[i];
  }
  return s;
}

}  // namespace rw
