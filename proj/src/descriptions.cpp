#include "rw/descriptions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rw/atoms.hpp"

namespace rw {

int CompleteDescription::atom_of(const std::string& c) const {
  for (size_t i = 0; i < constants.size(); ++i)
    if (constants[i] == c) return class_atom[eq_class[i]];
  throw std::logic_error("description: unknown constant " + c);
}

namespace {

int class_of(const CompleteDescription& d, const Term& t) {
  if (!t.is_constant) throw std::logic_error("description: free variable " + t.name);
  for (size_t i = 0; i < d.constants.size(); ++i)
    if (d.constants[i] == t.name) return d.eq_class[i];
  throw std::logic_error("description: constant outside Z: " + t.name);
}

}  // namespace

bool satisfies(const CompleteDescription& d, const FormulaPtr& f, const Vocabulary& vocab) {
  switch (f->kind) {
    case FKind::True:
      return true;
    case FKind::False:
      return false;
    case FKind::Pred: {
      int p = vocab.predicate_index(f->name);
      if (p >= 0) {
        int atom = d.class_atom[class_of(d, f->args[0])];
        int k = vocab.k();
        return ((static_cast<unsigned>(atom) >> (k - 1 - p)) & 1u) == 0;
      }
      auto it = d.relation_tuples.find(f->name);
      if (it == d.relation_tuples.end())
        throw std::logic_error("description: relation part missing for " + f->name);
      std::vector<int> tup;
      for (auto& a : f->args) tup.push_back(class_of(d, a));
      return it->second.count(tup) > 0;
    }
    case FKind::TermEq:
      return class_of(d, f->tlhs) == class_of(d, f->trhs);
    case FKind::Not:
      return !satisfies(d, f->child, vocab);
    case FKind::And:
      return satisfies(d, f->child, vocab) && satisfies(d, f->child2, vocab);
    case FKind::Or:
      return satisfies(d, f->child, vocab) || satisfies(d, f->child2, vocab);
    case FKind::Implies:
      return !satisfies(d, f->child, vocab) || satisfies(d, f->child2, vocab);
    default:
      throw std::logic_error("description: formula is not quantifier- and proportion-free");
  }
}

std::vector<CompleteDescription> enumerate_descriptions(const std::vector<std::string>& Z,
                                                        const Vocabulary& vocab,
                                                        const FormulaPtr& constraint,
                                                        const DescriptionOptions& opt) {
  std::vector<CompleteDescription> out;
  int n = static_cast<int>(Z.size());
  int K = vocab.atom_count();

  // set partitions via restricted growth strings
  std::vector<std::vector<int>> partitions;
  if (n == 0) {
    partitions.push_back({});
  } else if (opt.force_distinct) {
    std::vector<int> identity(n);
    for (int i = 0; i < n; ++i) identity[i] = i;
    partitions.push_back(identity);
  } else {
    std::vector<int> cls(n, 0);
    std::function<void(int, int)> rec = [&](int i, int maxc) {
      if (i == n) {
        partitions.push_back(cls);
        return;
      }
      for (int c = 0; c <= maxc; ++c) {
        cls[i] = c;
        rec(i + 1, std::max(maxc, c + 1));
      }
    };
    rec(0, 0);
  }

  long long produced = 0;
  for (auto& cls : partitions) {
    int nclasses = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
    std::vector<int> atoms(nclasses, 0);
    std::function<void(int)> assign = [&](int ci) {
      if (ci == nclasses) {
        CompleteDescription d;
        d.constants = Z;
        d.eq_class = cls;
        d.class_atom = atoms;
        if (opt.with_relations) {
          // enumerate every relation-tuple subset over classes
          std::vector<std::pair<std::string, std::vector<std::vector<int>>>> universes;
          long long total_bits = 0;
          for (auto& r : vocab.relations) {
            std::vector<std::vector<int>> tuples;
            std::vector<int> t(r.second, 0);
            if (nclasses == 0) {
              universes.emplace_back(r.first, tuples);
              continue;
            }
            for (;;) {
              tuples.push_back(t);
              int i = 0;
              while (i < r.second) {
                if (++t[i] < nclasses) break;
                t[i] = 0;
                ++i;
              }
              if (i == r.second) break;
            }
            total_bits += static_cast<long long>(tuples.size());
            universes.emplace_back(r.first, std::move(tuples));
          }
          if (total_bits > 20)
            throw std::runtime_error("enumerate_descriptions: relation part exceeds budget");
          std::function<void(size_t, CompleteDescription&)> rel_rec =
              [&](size_t ri, CompleteDescription& cur) {
                if (ri == universes.size()) {
                  cur.has_relation_part = true;
                  if (!constraint || satisfies(cur, constraint, vocab)) {
                    out.push_back(cur);
                    if (++produced > opt.budget)
                      throw std::runtime_error("enumerate_descriptions: budget exceeded");
                  }
                  return;
                }
                auto& [name, universe] = universes[ri];
                unsigned long long m = 1ULL << universe.size();
                for (unsigned long long bits = 0; bits < m; ++bits) {
                  std::set<std::vector<int>> tuples;
                  for (size_t b = 0; b < universe.size(); ++b)
                    if (bits & (1ULL << b)) tuples.insert(universe[b]);
                  cur.relation_tuples[name] = std::move(tuples);
                  rel_rec(ri + 1, cur);
                }
              };
          rel_rec(0, d);
        } else {
          if (!constraint || satisfies(d, constraint, vocab)) {
            out.push_back(d);
            if (++produced > opt.budget)
              throw std::runtime_error("enumerate_descriptions: budget exceeded");
          }
        }
        return;
      }
      for (int a = 0; a < K; ++a) {
        atoms[ci] = a;
        assign(ci + 1);
      }
    };
    if (nclasses == 0) {
      CompleteDescription d;
      d.constants = Z;
      if (!constraint || satisfies(d, constraint, vocab)) out.push_back(d);
      continue;
    }
    assign(0);
  }
  return out;
}

double f_description(const CompleteDescription& d, const VectorXd& u) {
  double w = 1.0;
  for (size_t i = 0; i < d.constants.size(); ++i) w *= u(d.class_atom[d.eq_class[i]]);
  return w;
}

double f_formula(const FormulaPtr& xi, const VectorXd& u, const Vocabulary& vocab,
                 const std::string& var) {
  std::set<int> atoms = atom_set(xi, vocab, var);
  double s = 0;
  for (int a : atoms) s += u(a);
  return s;
}

std::optional<double> f_cond(const FormulaPtr& phi, const FormulaPtr& psi, const VectorXd& u,
                             const Vocabulary& vocab, const std::string& var) {
  double den = f_formula(psi, u, vocab, var);
  if (den <= 0) return std::nullopt;
  return f_formula(f_and(phi, psi), u, vocab, var) / den;
}

int zero_one_limit(const FormulaPtr& phi, const SizeDescription& sigma_star,
                   const CompleteDescription& d, const Vocabulary& vocab) {
  if (!has_quantifier(phi)) return satisfies(d, phi, vocab) ? 1 : 0;
  if (mentions_relation(phi, vocab))
    throw ZeroOneUnsupported(
        "quantified query over a non-unary relation requires the full unary-case decision "
        "procedure, which this engine does not implement; it can be estimated by the oracle");

  // Saturated test model: every inhabited atom of sigma* gets
  // quantifier_rank + |Z| + 1 elements; constants are placed per D.
  int q = quantifier_rank(phi);
  int witnesses = q + static_cast<int>(d.constants.size()) + 1;
  int K = static_cast<int>(sigma_star.exists.size());
  World w;
  std::vector<int> start(K, -1);
  int N = 0;
  for (int a = 0; a < K; ++a) {
    if (!sigma_star.exists[a]) continue;
    start[a] = N;
    N += witnesses;
  }
  if (N == 0) throw std::logic_error("zero_one_limit: empty size description");
  w.N = N;
  w.atom_of.assign(N, 0);
  for (int a = 0; a < K; ++a) {
    if (start[a] < 0) continue;
    for (int i = 0; i < witnesses; ++i) w.atom_of[start[a] + i] = a;
  }
  std::vector<int> used(K, 0);
  for (int ci = 0; ci < d.n_classes(); ++ci) {
    int a = d.class_atom[ci];
    if (start[a] < 0)
      throw std::logic_error("zero_one_limit: description is inconsistent with sigma*");
    // distinct element per class inside the atom block (witnesses >= classes)
    int elem = start[a] + used[a]++;
    for (size_t i = 0; i < d.constants.size(); ++i)
      if (d.eq_class[i] == ci) w.constant_denotation[d.constants[i]] = elem;
  }
  Valuation v;
  return eval_exact(w, v, phi, vocab) ? 1 : 0;
}

}  // namespace rw
