#ifndef RW_ATOMS_HPP
#define RW_ATOMS_HPP

#include <set>
#include <string>
#include <vector>

#include "rw/formula.hpp"
#include "rw/vocab.hpp"

namespace rw {

// Atom A_j over P_1..P_k: a maximal sign pattern. Bit i of `mask` set means
// !P_{i+1}, with P_1 as the most significant bit; index = mask + 1, so the
// ordering is A_1 = P_1 & P_2, A_2 = P_1 & !P_2, ... as in the usual listing.
struct Atom {
  int index = 1;       // 1-based
  unsigned mask = 0;

  bool positive(int pred, int k) const { return ((mask >> (k - 1 - pred)) & 1u) == 0; }
};

std::vector<Atom> atoms_of(const Vocabulary& vocab);

// Atom index (0-based) of the sign vector: signs[i] == true means P_{i+1} holds.
int atom_index_of_signs(const std::vector<bool>& signs);

// A(xi): the unique atom set with xi == \/_{A in set} A(x). Requires xi
// essentially propositional; indices 0-based. Throws otherwise.
std::set<int> atom_set(const FormulaPtr& xi, const Vocabulary& vocab,
                       const std::string& var = "x");

// Truth of an essentially propositional formula under a fixed atom.
bool atom_satisfies(const FormulaPtr& xi, const Vocabulary& vocab, unsigned atom_mask);

// A_j(x) or A_j(c) as a conjunction of signed predicates, and the atom's
// display name like "P1 & !P2".
FormulaPtr atom_formula(const Vocabulary& vocab, int atom_idx0, const Term& t);
std::string atom_name(const Vocabulary& vocab, int atom_idx0);

}  // namespace rw

#endif
