#include "rw/nilsson.hpp"

#include "rw/atoms.hpp"

namespace rw {

namespace {

PropExprPtr proportion_of(const FormulaPtr& beta, const FormulaPtr& beta_prime) {
  if (beta_prime) return p_cond_prop(beta, beta_prime, {"x"});
  return p_prop(beta, {"x"});
}

}  // namespace

NilssonTranslation nilsson_translate(const PropConstraintSet& lambda, const FormulaPtr& beta,
                                     const FormulaPtr& beta_prime) {
  NilssonTranslation out;
  out.vocab = lambda.vocab;
  std::string c = "c";
  while (out.vocab.is_predicate(c) || out.vocab.is_constant(c)) c += "_q";
  out.vocab.constants.push_back(c);

  int next_tol = 1;
  for (auto& pc : lambda.constraints) {
    PropExprPtr lhs = proportion_of(pc.beta, pc.beta_prime);
    switch (pc.kind) {
      case PropConstraint::Kind::Eq:
        out.kb.push_back(f_compare(lhs, CmpOp::ApproxEq, next_tol++, p_const(pc.lo)));
        break;
      case PropConstraint::Kind::Le:
        out.kb.push_back(f_compare(lhs, CmpOp::ApproxLeq, next_tol++, p_const(pc.lo)));
        break;
      case PropConstraint::Kind::Ge:
        // zeta >~[i] lo  ==  lo <~[i] zeta
        out.kb.push_back(f_compare(p_const(pc.lo), CmpOp::ApproxLeq, next_tol++, lhs));
        break;
      case PropConstraint::Kind::Interval:
        out.kb.push_back(f_compare(p_const(pc.lo), CmpOp::ApproxLeq, next_tol++, lhs));
        out.kb.push_back(f_compare(lhs, CmpOp::ApproxLeq, next_tol++, p_const(pc.hi)));
        break;
    }
  }
  Term qc{true, c};
  FormulaPtr subst_beta = beta;   // propositional formulas use variable "x"
  out.phi = nullptr;
  // xi_beta(c): substitute the free variable x by the constant c
  std::function<FormulaPtr(const FormulaPtr&)> ground = [&](const FormulaPtr& f) -> FormulaPtr {
    switch (f->kind) {
      case FKind::Pred:
        return f_pred(f->name, {qc});
      case FKind::Not:
        return f_not(ground(f->child));
      case FKind::And:
        return f_and(ground(f->child), ground(f->child2));
      case FKind::Or:
        return f_or(ground(f->child), ground(f->child2));
      case FKind::Implies:
        return f_implies(ground(f->child), ground(f->child2));
      default:
        return f;
    }
  };
  out.phi = ground(beta);
  out.psi = beta_prime ? ground(beta_prime) : f_true();
  return out;
}

BeliefResult nilsson_believe(const PropConstraintSet& lambda, const FormulaPtr& beta,
                             const FormulaPtr& beta_prime, const BeliefConfig& cfg) {
  NilssonTranslation tr = nilsson_translate(lambda, beta, beta_prime);
  std::vector<FormulaPtr> kb = tr.kb;
  if (tr.psi->kind != FKind::True) kb.push_back(tr.psi);
  return believe_simple(tr.phi, kb, tr.vocab, cfg);
}

DirectMaxEnt nilsson_direct(const PropConstraintSet& lambda, const FormulaPtr& beta,
                            const FormulaPtr& beta_prime, const MaxEntOptions& opt) {
  DirectMaxEnt out;
  const Vocabulary& vocab = lambda.vocab;
  int K = vocab.atom_count();

  // Each truth assignment omega corresponds to an atom; constraints become
  // linear rows over mu(omega) assembled from truth tables.
  auto indicator = [&](const FormulaPtr& f) {
    AtomPoly p;
    for (int a : atom_set(f, vocab, "x")) p = p + AtomPoly::atom(a);
    return p;
  };

  RegionCell cell;
  for (auto& pc : lambda.constraints) {
    AtomPoly num =
        pc.beta_prime ? indicator(f_and(pc.beta, pc.beta_prime)) : indicator(pc.beta);
    AtomPoly den = pc.beta_prime ? indicator(pc.beta_prime) : AtomPoly::constant(Rational(1));
    // Pr(beta|beta') REL bound  ->  num - bound*den REL 0 (mu(beta') >= 0
    // always; the exact-equality reading at tau=0 matches the translation)
    switch (pc.kind) {
      case PropConstraint::Kind::Eq:
        cell.constraints.push_back(InstConstraint{num - AtomPoly::constant(pc.lo) * den, Rel::EQ});
        break;
      case PropConstraint::Kind::Le:
        cell.constraints.push_back(InstConstraint{num - AtomPoly::constant(pc.lo) * den, Rel::LE});
        break;
      case PropConstraint::Kind::Ge:
        cell.constraints.push_back(InstConstraint{num - AtomPoly::constant(pc.lo) * den, Rel::GE});
        break;
      case PropConstraint::Kind::Interval:
        cell.constraints.push_back(InstConstraint{num - AtomPoly::constant(pc.lo) * den, Rel::GE});
        cell.constraints.push_back(InstConstraint{num - AtomPoly::constant(pc.hi) * den, Rel::LE});
        break;
    }
  }
  RegionDescriptor region;
  region.K = K;
  region.cells.push_back(cell);
  MaxEntResult me = maximize(region, opt);
  if (!me.feasible || me.maxima.empty()) return out;
  out.feasible = true;
  out.mu = me.maxima[0].u;
  double num = 0, den = 0;
  for (int a = 0; a < K; ++a) {
    bool in_beta = atom_satisfies(beta, vocab, static_cast<unsigned>(a));
    bool in_prime = !beta_prime || atom_satisfies(beta_prime, vocab, static_cast<unsigned>(a));
    if (in_prime) {
      den += out.mu(a);
      if (in_beta) num += out.mu(a);
    }
  }
  if (den > 0) out.query_value = num / den;
  return out;
}

}  // namespace rw
