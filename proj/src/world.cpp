#include "rw/world.hpp"

#include <stdexcept>

#include "rw/translate.hpp"

namespace rw {

std::vector<Rational> World::pi(const Vocabulary& vocab) const {
  std::vector<long long> counts(vocab.atom_count(), 0);
  for (int e = 0; e < N; ++e) ++counts[atom_of[e]];
  std::vector<Rational> u;
  u.reserve(counts.size());
  for (long long c : counts) u.push_back(Rational(c, N));
  return u;
}

namespace {

int resolve_term(const World& w, const Valuation& v, const Term& t) {
  if (t.is_constant) {
    auto it = w.constant_denotation.find(t.name);
    if (it == w.constant_denotation.end())
      throw std::logic_error("eval: constant '" + t.name + "' has no denotation");
    return it->second;
  }
  auto it = v.find(t.name);
  if (it == v.end()) throw std::logic_error("eval: unbound variable '" + t.name + "'");
  return it->second;
}

}  // namespace

Rational eval_prop_exact(const World& w, const Valuation& v, const PropExprPtr& p,
                         const Vocabulary& vocab) {
  switch (p->kind) {
    case PKind::Const:
      return p->value;
    case PKind::Epsilon:
      throw std::logic_error("eval: tolerance variable was not substituted");
    case PKind::CondProp:
      throw std::logic_error("eval: conditional proportion was not multiplied out");
    case PKind::Sum:
      return eval_prop_exact(w, v, p->lhs, vocab) + eval_prop_exact(w, v, p->rhs, vocab);
    case PKind::Diff:
      return eval_prop_exact(w, v, p->lhs, vocab) - eval_prop_exact(w, v, p->rhs, vocab);
    case PKind::Product:
      return eval_prop_exact(w, v, p->lhs, vocab) * eval_prop_exact(w, v, p->rhs, vocab);
    case PKind::Prop: {
      // fraction of |X|-tuples satisfying the body
      size_t kvars = p->vars.size();
      std::vector<int> tuple(kvars, 0);
      Valuation env = v;
      long long count = 0;
      for (;;) {
        for (size_t i = 0; i < kvars; ++i) env[p->vars[i]] = tuple[i];
        if (eval_exact(w, env, p->body, vocab)) ++count;
        size_t i = 0;
        while (i < kvars) {
          if (++tuple[i] < w.N) break;
          tuple[i] = 0;
          ++i;
        }
        if (i == kvars) break;
      }
      BigInt denom = BigInt::pow(BigInt(w.N), kvars);
      return Rational(BigInt(count), denom);
    }
  }
  throw std::logic_error("eval: bad proportion kind");
}

bool eval_exact(const World& w, const Valuation& v, const FormulaPtr& f, const Vocabulary& vocab) {
  switch (f->kind) {
    case FKind::True:
      return true;
    case FKind::False:
      return false;
    case FKind::Pred: {
      int p = vocab.predicate_index(f->name);
      if (p >= 0) {
        return w.pred_holds(vocab, p, resolve_term(w, v, f->args[0]));
      }
      auto it = w.relation_tuples.find(f->name);
      if (it == w.relation_tuples.end())
        throw std::logic_error("eval: relation '" + f->name + "' is not materialized");
      std::vector<int> tup;
      tup.reserve(f->args.size());
      for (auto& a : f->args) tup.push_back(resolve_term(w, v, a));
      return it->second.count(tup) > 0;
    }
    case FKind::TermEq:
      return resolve_term(w, v, f->tlhs) == resolve_term(w, v, f->trhs);
    case FKind::Not:
      return !eval_exact(w, v, f->child, vocab);
    case FKind::And:
      return eval_exact(w, v, f->child, vocab) && eval_exact(w, v, f->child2, vocab);
    case FKind::Or:
      return eval_exact(w, v, f->child, vocab) || eval_exact(w, v, f->child2, vocab);
    case FKind::Implies:
      return !eval_exact(w, v, f->child, vocab) || eval_exact(w, v, f->child2, vocab);
    case FKind::Exists: {
      Valuation env = v;
      for (int e = 0; e < w.N; ++e) {
        env[f->name] = e;
        if (eval_exact(w, env, f->child, vocab)) return true;
      }
      return false;
    }
    case FKind::Forall: {
      Valuation env = v;
      for (int e = 0; e < w.N; ++e) {
        env[f->name] = e;
        if (!eval_exact(w, env, f->child, vocab)) return false;
      }
      return true;
    }
    case FKind::Compare: {
      Rational a = eval_prop_exact(w, v, f->plhs, vocab);
      Rational b = eval_prop_exact(w, v, f->prhs, vocab);
      switch (f->cmp) {
        case CmpOp::ExactEq: return a == b;
        case CmpOp::ExactLeq: return a <= b;
        case CmpOp::ExactLt: return a < b;
        case CmpOp::ExactGt: return a > b;
        case CmpOp::ExactGeq: return a >= b;
        default:
          throw std::logic_error("eval: approximate comparison was not translated");
      }
    }
  }
  throw std::logic_error("eval: bad formula kind");
}

bool eval(const World& w, const Valuation& v, const ToleranceVector& tau, const FormulaPtr& f,
          const Vocabulary& vocab) {
  return eval_exact(w, v, substitute_tau(to_exact(f), tau), vocab);
}

}  // namespace rw
