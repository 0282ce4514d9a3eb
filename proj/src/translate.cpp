#include "rw/translate.hpp"

#include <algorithm>
#include <stdexcept>

#include "rw/parser.hpp"

namespace rw {

int SymTable::intern(const PropExprPtr& term) {
  if (term->kind == PKind::Prop) return intern_uncond(term->body, term->vars);
  if (term->kind != PKind::CondProp) throw std::logic_error("intern: not a proportion term");
  TermSymbol s;
  s.body = term->body;
  s.cond = term->cond;
  s.vars = term->vars;
  s.key = "C|" + print(term->body) + "|" + print(term->cond) + "|";
  for (auto& v : s.vars) s.key += v + ",";
  auto it = by_key_.find(s.key);
  if (it != by_key_.end()) return it->second;
  syms_.push_back(s);
  by_key_[s.key] = static_cast<int>(syms_.size()) - 1;
  return static_cast<int>(syms_.size()) - 1;
}

int SymTable::intern_uncond(FormulaPtr body, std::vector<std::string> vars) {
  std::sort(vars.begin(), vars.end());
  TermSymbol s;
  s.body = std::move(body);
  s.vars = std::move(vars);
  s.key = "U|" + print(s.body) + "|";
  for (auto& v : s.vars) s.key += v + ",";
  auto it = by_key_.find(s.key);
  if (it != by_key_.end()) return it->second;
  syms_.push_back(s);
  by_key_[s.key] = static_cast<int>(syms_.size()) - 1;
  return static_cast<int>(syms_.size()) - 1;
}

bool SymPoly::is_constant() const {
  return mono.empty() || (mono.size() == 1 && mono.begin()->first.empty());
}

Rational SymPoly::constant_value() const {
  if (mono.empty()) return Rational(0);
  return mono.begin()->second;
}

void SymPoly::add_term(std::vector<int> m, const Rational& c) {
  if (c.is_zero()) return;
  std::sort(m.begin(), m.end());
  auto it = mono.find(m);
  if (it == mono.end()) {
    mono.emplace(std::move(m), c);
  } else {
    it->second += c;
    if (it->second.is_zero()) mono.erase(it);
  }
}

SymPoly SymPoly::operator+(const SymPoly& o) const {
  SymPoly r = *this;
  for (auto& [m, c] : o.mono) r.add_term(m, c);
  return r;
}

SymPoly SymPoly::operator-(const SymPoly& o) const {
  SymPoly r = *this;
  for (auto& [m, c] : o.mono) r.add_term(m, -c);
  return r;
}

SymPoly SymPoly::operator*(const SymPoly& o) const {
  SymPoly r;
  for (auto& [m1, c1] : mono) {
    for (auto& [m2, c2] : o.mono) {
      std::vector<int> m = m1;
      m.insert(m.end(), m2.begin(), m2.end());
      r.add_term(std::move(m), c1 * c2);
    }
  }
  return r;
}

SymPoly SymPoly::constant(const Rational& c) {
  SymPoly r;
  r.add_term({}, c);
  return r;
}

SymPoly SymPoly::symbol(int id) {
  SymPoly r;
  r.add_term({id}, Rational(1));
  return r;
}

SymPoly prop_to_poly(const PropExprPtr& p, SymTable* table) {
  switch (p->kind) {
    case PKind::Const:
      return SymPoly::constant(p->value);
    case PKind::Prop:
    case PKind::CondProp:
      return SymPoly::symbol(table->intern(p));
    case PKind::Sum:
      return prop_to_poly(p->lhs, table) + prop_to_poly(p->rhs, table);
    case PKind::Diff:
      return prop_to_poly(p->lhs, table) - prop_to_poly(p->rhs, table);
    case PKind::Product:
      return prop_to_poly(p->lhs, table) * prop_to_poly(p->rhs, table);
    case PKind::Epsilon:
      throw std::logic_error("prop_to_poly: unexpected tolerance variable");
  }
  throw std::logic_error("prop_to_poly: bad kind");
}

PropExprPtr poly_to_expr(const SymPoly& poly, const SymTable& table) {
  if (poly.mono.empty()) return p_const(Rational(0));
  PropExprPtr acc;
  for (auto& [m, c] : poly.mono) {
    PropExprPtr me;
    for (int id : m) {
      const TermSymbol& s = table.at(id);
      PropExprPtr t = s.cond ? p_cond_prop(s.body, s.cond, s.vars) : p_prop(s.body, s.vars);
      me = me ? p_product(me, t) : t;
    }
    Rational mag = c.sign() < 0 ? -c : c;
    PropExprPtr termExpr;
    if (!me) {
      termExpr = p_const(mag);
    } else if (mag == Rational(1)) {
      termExpr = me;
    } else {
      termExpr = p_product(p_const(mag), me);
    }
    if (!acc) {
      acc = c.sign() < 0 ? p_diff(p_const(Rational(0)), termExpr) : termExpr;
    } else {
      acc = c.sign() < 0 ? p_diff(acc, termExpr) : p_sum(acc, termExpr);
    }
  }
  return acc;
}

namespace {

bool prop_has_conditional(const PropExprPtr& p) {
  switch (p->kind) {
    case PKind::CondProp:
      return true;
    case PKind::Sum:
    case PKind::Diff:
    case PKind::Product:
      return prop_has_conditional(p->lhs) || prop_has_conditional(p->rhs);
    default:
      return false;
  }
}

bool prop_has_epsilon(const PropExprPtr& p) {
  switch (p->kind) {
    case PKind::Epsilon:
      return true;
    case PKind::Sum:
    case PKind::Diff:
    case PKind::Product:
      return prop_has_epsilon(p->lhs) || prop_has_epsilon(p->rhs);
    default:
      return false;
  }
}

PropExprPtr translate_prop(const PropExprPtr& p);

// Clears conditional symbols from poly: each C = ||psi|theta||_X with maximum
// degree d is replaced via C^p -> ||psi&theta||^p * ||theta||^(d-p), and the
// returned scale picks up ||theta||^d.
void clear_conditionals(SymPoly* poly, SymPoly* scale, SymTable* table) {
  for (;;) {
    int cond_id = -1;
    for (auto& [m, c] : poly->mono) {
      for (int id : m) {
        if (table->at(id).cond) {
          cond_id = id;
          break;
        }
      }
      if (cond_id >= 0) break;
    }
    if (cond_id < 0) return;
    const TermSymbol sym = table->at(cond_id);
    int theta_id = table->intern_uncond(sym.cond, sym.vars);
    int both_id = table->intern_uncond(f_and(sym.body, sym.cond), sym.vars);
    int d = 0;
    for (auto& [m, c] : poly->mono)
      d = std::max<int>(d, static_cast<int>(std::count(m.begin(), m.end(), cond_id)));
    SymPoly out;
    for (auto& [m, c] : poly->mono) {
      std::vector<int> nm;
      int p = 0;
      for (int id : m) {
        if (id == cond_id) {
          ++p;
        } else {
          nm.push_back(id);
        }
      }
      for (int i = 0; i < p; ++i) nm.push_back(both_id);
      for (int i = 0; i < d - p; ++i) nm.push_back(theta_id);
      out.add_term(std::move(nm), c);
    }
    *poly = out;
    SymPoly theta_pow = SymPoly::constant(Rational(1));
    for (int i = 0; i < d; ++i) theta_pow = theta_pow * SymPoly::symbol(theta_id);
    *scale = (*scale) * theta_pow;
  }
}

// Builds "t <= t' * eps_i" (or plain comparisons for exact operators) from a
// difference expression that may contain conditional proportions.
FormulaPtr cleared_compare(const PropExprPtr& diff, CmpOp op, int tol) {
  SymTable table;
  SymPoly poly = prop_to_poly(diff, &table);
  SymPoly scale = SymPoly::constant(Rational(1));
  clear_conditionals(&poly, &scale, &table);
  PropExprPtr lhs = poly_to_expr(poly, table);
  if (cmp_is_approx(op)) throw std::logic_error("cleared_compare: op must be exact");
  if (tol > 0) {
    PropExprPtr rhs;
    if (scale.is_constant() && scale.constant_value() == Rational(1)) {
      rhs = p_epsilon(tol);
    } else {
      rhs = p_product(poly_to_expr(scale, table), p_epsilon(tol));
    }
    return f_compare(lhs, CmpOp::ExactLeq, 0, rhs);
  }
  return f_compare(lhs, op, 0, p_const(Rational(0)));
}

FormulaPtr translate_formula(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::True:
    case FKind::False:
    case FKind::Pred:
    case FKind::TermEq:
      return f;
    case FKind::Not:
      return f_not(translate_formula(f->child));
    case FKind::And:
      return f_and(translate_formula(f->child), translate_formula(f->child2));
    case FKind::Or:
      return f_or(translate_formula(f->child), translate_formula(f->child2));
    case FKind::Implies:
      return f_implies(translate_formula(f->child), translate_formula(f->child2));
    case FKind::Exists:
      return f_exists(f->name, translate_formula(f->child));
    case FKind::Forall:
      return f_forall(f->name, translate_formula(f->child));
    case FKind::Compare: {
      PropExprPtr lhs = translate_prop(f->plhs);
      PropExprPtr rhs = translate_prop(f->prhs);
      bool conds = prop_has_conditional(lhs) || prop_has_conditional(rhs);
      if (cmp_is_approx(f->cmp)) {
        if (prop_has_epsilon(lhs) || prop_has_epsilon(rhs))
          throw std::invalid_argument("tolerance variable inside an approximate comparison");
        if (f->cmp == CmpOp::ApproxLeq) {
          if (!conds)
            return f_compare(p_diff(lhs, rhs), CmpOp::ExactLeq, 0, p_epsilon(f->tol_index));
          return cleared_compare(p_diff(lhs, rhs), CmpOp::ExactLeq, f->tol_index);
        }
        // zeta ~=[i] zeta': both one-sided bounds.
        FormulaPtr a, b;
        if (!conds) {
          a = f_compare(p_diff(lhs, rhs), CmpOp::ExactLeq, 0, p_epsilon(f->tol_index));
          b = f_compare(p_diff(rhs, lhs), CmpOp::ExactLeq, 0, p_epsilon(f->tol_index));
        } else {
          a = cleared_compare(p_diff(lhs, rhs), CmpOp::ExactLeq, f->tol_index);
          b = cleared_compare(p_diff(rhs, lhs), CmpOp::ExactLeq, f->tol_index);
        }
        return f_and(a, b);
      }
      if (!conds) {
        if (equal(lhs, f->plhs) && equal(rhs, f->prhs)) return f;
        return f_compare(lhs, f->cmp, 0, rhs);
      }
      return cleared_compare(p_diff(lhs, rhs), f->cmp, 0);
    }
  }
  return f;
}

PropExprPtr translate_prop(const PropExprPtr& p) {
  switch (p->kind) {
    case PKind::Const:
    case PKind::Epsilon:
      return p;
    case PKind::Prop: {
      FormulaPtr b = translate_formula(p->body);
      if (equal(b, p->body)) return p;
      return p_prop(b, p->vars);
    }
    case PKind::CondProp: {
      FormulaPtr b = translate_formula(p->body);
      FormulaPtr c = translate_formula(p->cond);
      if (equal(b, p->body) && equal(c, p->cond)) return p;
      return p_cond_prop(b, c, p->vars);
    }
    case PKind::Sum:
      return p_sum(translate_prop(p->lhs), translate_prop(p->rhs));
    case PKind::Diff:
      return p_diff(translate_prop(p->lhs), translate_prop(p->rhs));
    case PKind::Product:
      return p_product(translate_prop(p->lhs), translate_prop(p->rhs));
  }
  return p;
}

PropExprPtr subst_tau_prop(const PropExprPtr& p, const ToleranceVector& tau) {
  switch (p->kind) {
    case PKind::Const:
      return p;
    case PKind::Epsilon:
      return p_const(tau.at(p->tol_index));
    case PKind::Prop: {
      // Bodies of proportion terms may contain comparisons with tolerances.
      return p_prop(substitute_tau(p->body, tau), p->vars);
    }
    case PKind::CondProp:
      return p_cond_prop(substitute_tau(p->body, tau), substitute_tau(p->cond, tau), p->vars);
    case PKind::Sum:
      return p_sum(subst_tau_prop(p->lhs, tau), subst_tau_prop(p->rhs, tau));
    case PKind::Diff:
      return p_diff(subst_tau_prop(p->lhs, tau), subst_tau_prop(p->rhs, tau));
    case PKind::Product:
      return p_product(subst_tau_prop(p->lhs, tau), subst_tau_prop(p->rhs, tau));
  }
  return p;
}

}  // namespace

FormulaPtr to_exact(const FormulaPtr& chi) { return translate_formula(chi); }

FormulaPtr substitute_tau(const FormulaPtr& chi_star, const ToleranceVector& tau) {
  switch (chi_star->kind) {
    case FKind::True:
    case FKind::False:
    case FKind::Pred:
    case FKind::TermEq:
      return chi_star;
    case FKind::Not:
      return f_not(substitute_tau(chi_star->child, tau));
    case FKind::And:
      return f_and(substitute_tau(chi_star->child, tau), substitute_tau(chi_star->child2, tau));
    case FKind::Or:
      return f_or(substitute_tau(chi_star->child, tau), substitute_tau(chi_star->child2, tau));
    case FKind::Implies:
      return f_implies(substitute_tau(chi_star->child, tau),
                       substitute_tau(chi_star->child2, tau));
    case FKind::Exists:
      return f_exists(chi_star->name, substitute_tau(chi_star->child, tau));
    case FKind::Forall:
      return f_forall(chi_star->name, substitute_tau(chi_star->child, tau));
    case FKind::Compare: {
      if (cmp_is_approx(chi_star->cmp))
        throw std::logic_error("substitute_tau: approximate comparison survived translation");
      return f_compare(subst_tau_prop(chi_star->plhs, tau), chi_star->cmp, 0,
                       subst_tau_prop(chi_star->prhs, tau));
    }
  }
  return chi_star;
}

}  // namespace rw
