#include "rw/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rw/parser.hpp"
#include "rw/translate.hpp"

namespace rw {

// --- AtomPoly ---

bool AtomPoly::positive() const {
  for (auto& [m, c] : mono)
    if (c.sign() <= 0) return false;
  return true;
}

void AtomPoly::add_term(std::vector<int> m, const Rational& c) {
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

AtomPoly AtomPoly::operator+(const AtomPoly& o) const {
  AtomPoly r = *this;
  for (auto& [m, c] : o.mono) r.add_term(m, c);
  return r;
}

AtomPoly AtomPoly::operator-(const AtomPoly& o) const {
  AtomPoly r = *this;
  for (auto& [m, c] : o.mono) r.add_term(m, -c);
  return r;
}

AtomPoly AtomPoly::operator*(const AtomPoly& o) const {
  AtomPoly r;
  for (auto& [m1, c1] : mono)
    for (auto& [m2, c2] : o.mono) {
      std::vector<int> m = m1;
      m.insert(m.end(), m2.begin(), m2.end());
      r.add_term(std::move(m), c1 * c2);
    }
  return r;
}

AtomPoly AtomPoly::constant(const Rational& c) {
  AtomPoly r;
  r.add_term({}, c);
  return r;
}

AtomPoly AtomPoly::atom(int idx0) {
  AtomPoly r;
  r.add_term({idx0}, Rational(1));
  return r;
}

Rational AtomPoly::eval(const std::vector<Rational>& u) const {
  Rational acc(0);
  for (auto& [m, c] : mono) {
    Rational term = c;
    for (int id : m) term *= u[id];
    acc += term;
  }
  return acc;
}

std::string AtomPoly::key() const {
  std::string s;
  for (auto& [m, c] : mono) {
    s += c.to_string() + ":";
    for (int id : m) s += std::to_string(id) + ".";
    s += ";";
  }
  return s;
}

std::string CanonConstraint::key() const {
  std::string s = std::to_string(static_cast<int>(kind)) + "|" + t.key() + "|" + tprime.key() +
                  "|" + std::to_string(tol_index);
  return s;
}

std::string CanonDisjunct::key() const {
  std::string s;
  for (auto& [c, a] : constant_atom) s += c + "=" + std::to_string(a) + ",";
  s += "|E";
  for (int a : must_exist) s += std::to_string(a) + ",";
  s += "|N";
  for (int a : must_not_exist) s += std::to_string(a) + ",";
  s += "|C";
  std::vector<std::string> keys;
  for (auto& c : constraints) keys.push_back(c.key());
  std::sort(keys.begin(), keys.end());
  for (auto& k : keys) s += k + "&";
  return s;
}

// --- constant simplification ---

FormulaPtr simplify_constants(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Not: {
      FormulaPtr c = simplify_constants(f->child);
      if (c->kind == FKind::True) return f_false();
      if (c->kind == FKind::False) return f_true();
      if (c->kind == FKind::Not) return c->child;
      return f_not(c);
    }
    case FKind::And: {
      FormulaPtr a = simplify_constants(f->child), b = simplify_constants(f->child2);
      if (a->kind == FKind::False || b->kind == FKind::False) return f_false();
      if (a->kind == FKind::True) return b;
      if (b->kind == FKind::True) return a;
      return f_and(a, b);
    }
    case FKind::Or: {
      FormulaPtr a = simplify_constants(f->child), b = simplify_constants(f->child2);
      if (a->kind == FKind::True || b->kind == FKind::True) return f_true();
      if (a->kind == FKind::False) return b;
      if (b->kind == FKind::False) return a;
      return f_or(a, b);
    }
    case FKind::Implies: {
      FormulaPtr a = simplify_constants(f->child), b = simplify_constants(f->child2);
      if (a->kind == FKind::False || b->kind == FKind::True) return f_true();
      if (a->kind == FKind::True) return b;
      if (b->kind == FKind::False) return simplify_constants(f_not(a));
      return f_implies(a, b);
    }
    case FKind::Exists: {
      FormulaPtr c = simplify_constants(f->child);
      if (c->kind == FKind::True) return f_true();   // domains are nonempty
      if (c->kind == FKind::False) return f_false();
      return f_exists(f->name, c);
    }
    case FKind::Forall: {
      FormulaPtr c = simplify_constants(f->child);
      if (c->kind == FKind::True) return f_true();
      if (c->kind == FKind::False) return f_false();
      return f_forall(f->name, c);
    }
    case FKind::Compare: {
      std::function<PropExprPtr(const PropExprPtr&)> sp = [&](const PropExprPtr& p) -> PropExprPtr {
        switch (p->kind) {
          case PKind::Prop: {
            FormulaPtr b = simplify_constants(p->body);
            if (b->kind == FKind::True) return p_const(Rational(1));
            if (b->kind == FKind::False) return p_const(Rational(0));
            return p_prop(b, p->vars);
          }
          case PKind::CondProp: {
            FormulaPtr b = simplify_constants(p->body);
            FormulaPtr c = simplify_constants(p->cond);
            if (c->kind == FKind::True) {
              if (b->kind == FKind::True) return p_const(Rational(1));
              if (b->kind == FKind::False) return p_const(Rational(0));
              return p_prop(b, p->vars);
            }
            return p_cond_prop(b, c, p->vars);
          }
          case PKind::Sum:
            return p_sum(sp(p->lhs), sp(p->rhs));
          case PKind::Diff:
            return p_diff(sp(p->lhs), sp(p->rhs));
          case PKind::Product:
            return p_product(sp(p->lhs), sp(p->rhs));
          default:
            return p;
        }
      };
      return f_compare(sp(f->plhs), f->cmp, f->tol_index, sp(f->prhs));
    }
    default:
      return f;
  }
}

// --- flatten ---

namespace {

// Does f mention a constant or a variable outside `binders`? (free vars only)
bool mentions_outside(const FormulaPtr& f, const std::set<std::string>& binders) {
  std::set<std::string> consts;
  collect_constants(f, &consts);
  if (!consts.empty()) return true;
  std::set<std::string> fv;
  free_variables(f, &fv);
  for (auto& v : fv)
    if (!binders.count(v)) return true;
  return false;
}

bool is_basic(const FormulaPtr& f) {
  return f->kind == FKind::Pred || f->kind == FKind::TermEq || f->kind == FKind::Compare ||
         f->kind == FKind::Exists || f->kind == FKind::Forall;
}

// Maximal basic subformulas of `f` that do not mention any binder in X and do
// not mention anything bound deeper. First-occurrence order, deduplicated.
void collect_pullable(const FormulaPtr& f, const std::set<std::string>& binders,
                      std::vector<FormulaPtr>* out) {
  if (is_basic(f)) {
    std::set<std::string> fv;
    free_variables(f, &fv);
    bool mentions_binder = false;
    for (auto& v : fv)
      if (binders.count(v)) mentions_binder = true;
    if (!mentions_binder) {
      // Constant with respect to the binders: pull it out (dedup).
      for (auto& g : *out)
        if (equal(g, f)) return;
      out->push_back(f);
      return;
    }
    if (!mentions_outside(f, binders)) return;  // mentions only binders: stays
    // Mentions both a binder and something outside: only possible for
    // non-unary leaves (relations / term equality); flatten cannot help.
    if (f->kind == FKind::Pred || f->kind == FKind::TermEq)
      throw CanonicalError("flatten: non-unary symbol mixes bound and outside terms");
    throw CanonicalError("flatten: nested scope still mentions an outside symbol");
  }
  switch (f->kind) {
    case FKind::Not:
      collect_pullable(f->child, binders, out);
      break;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      collect_pullable(f->child, binders, out);
      collect_pullable(f->child2, binders, out);
      break;
    default:
      break;
  }
}

// Structural replacement of a subformula by a constant.
FormulaPtr replace_sub(const FormulaPtr& f, const FormulaPtr& target, bool value) {
  if (equal(f, target)) return value ? f_true() : f_false();
  switch (f->kind) {
    case FKind::Not:
      return f_not(replace_sub(f->child, target, value));
    case FKind::And:
      return f_and(replace_sub(f->child, target, value), replace_sub(f->child2, target, value));
    case FKind::Or:
      return f_or(replace_sub(f->child, target, value), replace_sub(f->child2, target, value));
    case FKind::Implies:
      return f_implies(replace_sub(f->child, target, value),
                       replace_sub(f->child2, target, value));
    default:
      return f;  // do not descend into basic subformulas
  }
}

struct Flattener {
  const Vocabulary& vocab;
  const CanonicalOptions& opt;

  // Case-splits body over its pullable basic subformulas; wrap(body') builds
  // the quantified construct around the cleaned body.
  FormulaPtr case_split(const FormulaPtr& body, const std::set<std::string>& binders,
                        const std::function<FormulaPtr(FormulaPtr)>& wrap) {
    std::vector<FormulaPtr> pulled;
    collect_pullable(body, binders, &pulled);
    if (pulled.empty()) return simplify_constants(wrap(body));
    if (static_cast<int>(pulled.size()) > opt.max_case_split)
      throw CanonicalError("flatten: case split over " + std::to_string(pulled.size()) +
                           " subformulas exceeds the configured limit");
    size_t n = pulled.size();
    std::vector<FormulaPtr> disjuncts;
    for (size_t mask = 0; mask < (1u << n); ++mask) {
      FormulaPtr inner = body;
      std::vector<FormulaPtr> guard;
      for (size_t i = 0; i < n; ++i) {
        bool val = (mask >> i) & 1u;
        guard.push_back(val ? pulled[i] : f_not(pulled[i]));
        inner = replace_sub(inner, pulled[i], val);
      }
      inner = simplify_constants(inner);
      FormulaPtr piece = simplify_constants(f_and(f_and_all(guard), simplify_constants(wrap(inner))));
      if (piece->kind != FKind::False) disjuncts.push_back(piece);
    }
    if (disjuncts.empty()) return f_false();
    return f_or_all(disjuncts);
  }

  PropExprPtr flatten_prop(const PropExprPtr& p) {
    switch (p->kind) {
      case PKind::Prop:
        return p_prop(run(p->body), p->vars);
      case PKind::CondProp:
        return p_cond_prop(run(p->body), run(p->cond), p->vars);
      case PKind::Sum:
        return p_sum(flatten_prop(p->lhs), flatten_prop(p->rhs));
      case PKind::Diff:
        return p_diff(flatten_prop(p->lhs), flatten_prop(p->rhs));
      case PKind::Product:
        return p_product(flatten_prop(p->lhs), flatten_prop(p->rhs));
      default:
        return p;
    }
  }

  void collect_from_prop(const PropExprPtr& p, std::vector<FormulaPtr>* pulled) {
    switch (p->kind) {
      case PKind::Prop:
      case PKind::CondProp: {
        std::set<std::string> binders(p->vars.begin(), p->vars.end());
        collect_pullable(p->body, binders, pulled);
        if (p->cond) collect_pullable(p->cond, binders, pulled);
        break;
      }
      case PKind::Sum:
      case PKind::Diff:
      case PKind::Product:
        collect_from_prop(p->lhs, pulled);
        collect_from_prop(p->rhs, pulled);
        break;
      default:
        break;
    }
  }

  PropExprPtr replace_in_prop(const PropExprPtr& p, const FormulaPtr& target, bool value) {
    switch (p->kind) {
      case PKind::Prop:
        return p_prop(replace_sub(p->body, target, value), p->vars);
      case PKind::CondProp:
        return p_cond_prop(replace_sub(p->body, target, value),
                           replace_sub(p->cond, target, value), p->vars);
      case PKind::Sum:
        return p_sum(replace_in_prop(p->lhs, target, value), replace_in_prop(p->rhs, target, value));
      case PKind::Diff:
        return p_diff(replace_in_prop(p->lhs, target, value), replace_in_prop(p->rhs, target, value));
      case PKind::Product:
        return p_product(replace_in_prop(p->lhs, target, value),
                         replace_in_prop(p->rhs, target, value));
      default:
        return p;
    }
  }

  FormulaPtr run(const FormulaPtr& f) {
    switch (f->kind) {
      case FKind::True:
      case FKind::False:
      case FKind::Pred:
      case FKind::TermEq:
        return f;
      case FKind::Not:
        return f_not(run(f->child));
      case FKind::And:
        return f_and(run(f->child), run(f->child2));
      case FKind::Or:
        return f_or(run(f->child), run(f->child2));
      case FKind::Implies:
        return f_implies(run(f->child), run(f->child2));
      case FKind::Exists:
      case FKind::Forall: {
        FormulaPtr body = run(f->child);
        std::set<std::string> binders = {f->name};
        bool ex = f->kind == FKind::Exists;
        std::string var = f->name;
        return case_split(body, binders, [ex, var](FormulaPtr b) {
          return ex ? f_exists(var, b) : f_forall(var, b);
        });
      }
      case FKind::Compare: {
        PropExprPtr lhs = flatten_prop(f->plhs);
        PropExprPtr rhs = flatten_prop(f->prhs);
        std::vector<FormulaPtr> pulled;
        collect_from_prop(lhs, &pulled);
        collect_from_prop(rhs, &pulled);
        // dedup (collect_from_prop dedups per call, not across)
        std::vector<FormulaPtr> uniq;
        for (auto& g : pulled) {
          bool seen = false;
          for (auto& h : uniq)
            if (equal(g, h)) seen = true;
          if (!seen) uniq.push_back(g);
        }
        if (uniq.empty())
          return f_compare(lhs, f->cmp, f->tol_index, rhs);
        if (static_cast<int>(uniq.size()) > opt.max_case_split)
          throw CanonicalError("flatten: case split exceeds the configured limit");
        size_t n = uniq.size();
        std::vector<FormulaPtr> disjuncts;
        for (size_t mask = 0; mask < (1u << n); ++mask) {
          PropExprPtr l2 = lhs, r2 = rhs;
          std::vector<FormulaPtr> guard;
          for (size_t i = 0; i < n; ++i) {
            bool val = (mask >> i) & 1u;
            guard.push_back(val ? uniq[i] : f_not(uniq[i]));
            l2 = replace_in_prop(l2, uniq[i], val);
            r2 = replace_in_prop(r2, uniq[i], val);
          }
          FormulaPtr cmp = simplify_constants(f_compare(l2, f->cmp, f->tol_index, r2));
          FormulaPtr piece = simplify_constants(f_and(f_and_all(guard), cmp));
          if (piece->kind != FKind::False) disjuncts.push_back(piece);
        }
        if (disjuncts.empty()) return f_false();
        return f_or_all(disjuncts);
      }
    }
    return f;
  }
};

}  // namespace

FormulaPtr flatten(const FormulaPtr& xi, const Vocabulary& vocab, const CanonicalOptions& opt) {
  Flattener fl{vocab, opt};
  return simplify_constants(fl.run(xi));
}

namespace {

bool flat_rec(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Not:
      return flat_rec(f->child);
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      return flat_rec(f->child) && flat_rec(f->child2);
    case FKind::Exists:
    case FKind::Forall: {
      if (mentions_outside(f->child, {f->name})) return false;
      return flat_rec(f->child);
    }
    case FKind::Compare: {
      std::function<bool(const PropExprPtr&)> ok = [&](const PropExprPtr& p) -> bool {
        switch (p->kind) {
          case PKind::Prop:
          case PKind::CondProp: {
            std::set<std::string> binders(p->vars.begin(), p->vars.end());
            if (mentions_outside(p->body, binders)) return false;
            if (has_quantifier(p->body) || has_proportion(p->body)) return false;
            if (p->cond) {
              if (mentions_outside(p->cond, binders)) return false;
              if (has_quantifier(p->cond) || has_proportion(p->cond)) return false;
            }
            return true;
          }
          case PKind::Sum:
          case PKind::Diff:
          case PKind::Product:
            return ok(p->lhs) && ok(p->rhs);
          default:
            return true;
        }
      };
      return ok(f->plhs) && ok(f->prhs);
    }
    default:
      return true;
  }
}

}  // namespace

bool is_flat(const FormulaPtr& f) { return flat_rec(f); }

// --- canonical form ---

namespace {

// Expands a flat unconditional proportion term body over the given binders to
// a polynomial over atomic proportion terms (independence across distinct
// variables).
AtomPoly expand_proportion(const FormulaPtr& body, const std::vector<std::string>& vars,
                           const Vocabulary& vocab) {
  int K = vocab.atom_count();
  size_t n = vars.size();
  double combos = std::pow(static_cast<double>(K), n);
  if (combos > 1 << 20) throw CanonicalError("proportion expansion: too many atom combinations");
  std::map<std::string, int> var_slot;
  for (size_t i = 0; i < n; ++i) var_slot[vars[i]] = static_cast<int>(i);

  std::function<bool(const FormulaPtr&, const std::vector<int>&)> truth =
      [&](const FormulaPtr& g, const std::vector<int>& atom_of_slot) -> bool {
    switch (g->kind) {
      case FKind::True:
        return true;
      case FKind::False:
        return false;
      case FKind::Pred: {
        int p = vocab.predicate_index(g->name);
        if (p < 0 || g->args.size() != 1 || g->args[0].is_constant)
          throw CanonicalError("canonical: proportion body is not flat over unary predicates");
        auto it = var_slot.find(g->args[0].name);
        if (it == var_slot.end())
          throw CanonicalError("canonical: proportion body mentions an unbound variable");
        int k = vocab.k();
        unsigned mask = static_cast<unsigned>(atom_of_slot[it->second]);
        return ((mask >> (k - 1 - p)) & 1u) == 0;
      }
      case FKind::Not:
        return !truth(g->child, atom_of_slot);
      case FKind::And:
        return truth(g->child, atom_of_slot) && truth(g->child2, atom_of_slot);
      case FKind::Or:
        return truth(g->child, atom_of_slot) || truth(g->child2, atom_of_slot);
      case FKind::Implies:
        return !truth(g->child, atom_of_slot) || truth(g->child2, atom_of_slot);
      default:
        throw CanonicalError("canonical: proportion body is not flat");
    }
  };

  AtomPoly out;
  std::vector<int> assign(n, 0);
  for (;;) {
    if (truth(body, assign)) {
      std::vector<int> m(assign.begin(), assign.end());
      out.add_term(std::move(m), Rational(1));
    }
    size_t i = 0;
    while (i < n) {
      if (++assign[i] < K) break;
      assign[i] = 0;
      ++i;
    }
    if (i == n) break;
  }
  return out;
}

// Literal tree used between atom expansion and DNF.
struct LTree {
  enum class Kind { And, Or, TrueL, FalseL, ConstAtom, ExistsAtom, NotExistsAtom, Constraint };
  Kind kind;
  std::vector<LTree> kids;                 // And / Or
  std::string constant;                    // ConstAtom
  int atom = 0;                            // ConstAtom / ExistsAtom / NotExistsAtom
  CanonConstraint constraint;              // Constraint

  static LTree mk_true() { return LTree{Kind::TrueL, {}, "", 0, {}}; }
  static LTree mk_false() { return LTree{Kind::FalseL, {}, "", 0, {}}; }
};

struct Canonicalizer {
  const Vocabulary& vocab;
  const CanonicalOptions& opt;
  int K;

  AtomPoly prop_expr_to_atompoly(const PropExprPtr& p) {
    switch (p->kind) {
      case PKind::Const:
        return AtomPoly::constant(p->value);
      case PKind::Prop: {
        // ||A_i(x)||_x-style direct atoms are a special case of expansion
        return expand_proportion(p->body, p->vars, vocab);
      }
      case PKind::CondProp:
        throw CanonicalError("canonical: conditional proportion survived translation");
      case PKind::Sum:
        return prop_expr_to_atompoly(p->lhs) + prop_expr_to_atompoly(p->rhs);
      case PKind::Diff:
        return prop_expr_to_atompoly(p->lhs) - prop_expr_to_atompoly(p->rhs);
      case PKind::Product:
        return prop_expr_to_atompoly(p->lhs) * prop_expr_to_atompoly(p->rhs);
      case PKind::Epsilon:
        throw CanonicalError("canonical: bare tolerance variable in an unexpected position");
    }
    throw CanonicalError("canonical: bad proportion expression");
  }

  // Recognizes rhs shapes "eps[i]" and "T * eps[i]".
  bool split_eps_rhs(const PropExprPtr& rhs, AtomPoly* scale, int* tol) {
    if (rhs->kind == PKind::Epsilon) {
      *scale = AtomPoly::constant(Rational(1));
      *tol = rhs->tol_index;
      return true;
    }
    if (rhs->kind == PKind::Product && rhs->rhs->kind == PKind::Epsilon) {
      *scale = prop_expr_to_atompoly(rhs->lhs);
      *tol = rhs->rhs->tol_index;
      return true;
    }
    if (rhs->kind == PKind::Product && rhs->lhs->kind == PKind::Epsilon) {
      *scale = prop_expr_to_atompoly(rhs->rhs);
      *tol = rhs->lhs->tol_index;
      return true;
    }
    return false;
  }

  LTree compare_to_ltree(const FormulaPtr& f, bool positive) {
    AtomPoly scale;
    int tol = 0;
    if (f->cmp == CmpOp::ExactLeq && split_eps_rhs(f->prhs, &scale, &tol)) {
      AtomPoly t = prop_expr_to_atompoly(f->plhs);
      if (!scale.positive() && !scale.is_zero())
        throw CanonicalError("canonical: epsilon scale polynomial is not positive");
      bool scale_const = scale.is_constant();
      if (positive) {
        CanonConstraint c{CanonConstraint::Kind::TolLeq, t, scale, tol};
        if (scale_const) {
          if (scale.constant_value().sign() <= 0)
            throw CanonicalError("canonical: epsilon scale must be positive");
          LTree leaf{LTree::Kind::Constraint, {}, "", 0, c};
          return leaf;
        }
        // (t' = 0) or (t' > 0 and t <= t'*eps_i); the Pos conjunct is bundled
        // into the TolLeq leaf.
        LTree zero{LTree::Kind::Constraint, {}, "", 0,
                   CanonConstraint{CanonConstraint::Kind::ZeroEq, {}, scale, 0}};
        LTree leaf{LTree::Kind::Constraint, {}, "", 0, c};
        LTree orn{LTree::Kind::Or, {zero, leaf}, "", 0, {}};
        return orn;
      }
      CanonConstraint c{CanonConstraint::Kind::NegTolLeq, t, scale, tol};
      LTree leaf{LTree::Kind::Constraint, {}, "", 0, c};
      return leaf;
    }
    // epsilon-free exact comparisons: the canonical fragment
    AtomPoly diff = prop_expr_to_atompoly(f->plhs) - prop_expr_to_atompoly(f->prhs);
    auto mk_zero = [&](const AtomPoly& tp) {
      return LTree{LTree::Kind::Constraint, {}, "", 0,
                   CanonConstraint{CanonConstraint::Kind::ZeroEq, {}, tp, 0}};
    };
    auto mk_pos = [&](const AtomPoly& tp) {
      return LTree{LTree::Kind::Constraint, {}, "", 0,
                   CanonConstraint{CanonConstraint::Kind::Pos, {}, tp, 0}};
    };
    switch (f->cmp) {
      case CmpOp::ExactEq: {
        AtomPoly tp = diff;
        if (!tp.positive() && !tp.is_zero()) {
          AtomPoly neg = AtomPoly::constant(Rational(0)) - tp;
          if (!neg.positive()) {
            // Constant-only equalities fold to truth values.
            if (tp.is_constant())
              return tp.constant_value().is_zero() == positive ? LTree::mk_true()
                                                               : LTree::mk_false();
            throw CanonicalError(
                "canonical: equality between mixed-sign atomic terms is outside the canonical "
                "fragment");
          }
          tp = neg;
        }
        if (tp.is_constant() && !tp.constant_value().is_zero())
          return positive ? LTree::mk_false() : LTree::mk_true();
        if (tp.is_zero()) return positive ? LTree::mk_true() : LTree::mk_false();
        return positive ? mk_zero(tp) : mk_pos(tp);  // !(t'=0) == t'>0 for positive t'
      }
      case CmpOp::ExactGt:
      case CmpOp::ExactLt: {
        AtomPoly tp = f->cmp == CmpOp::ExactGt ? diff : AtomPoly::constant(Rational(0)) - diff;
        if (tp.is_constant())
          return (tp.constant_value().sign() > 0) == positive ? LTree::mk_true()
                                                              : LTree::mk_false();
        if (!tp.positive())
          throw CanonicalError(
              "canonical: strict comparison outside the canonical fragment (t' must be positive)");
        return positive ? mk_pos(tp) : mk_zero(tp);
      }
      default:
        throw CanonicalError("canonical: comparison operator outside the canonical fragment");
    }
  }

  // NNF + atom expansion into an LTree. `positive` is the polarity.
  LTree build(const FormulaPtr& f, bool positive) {
    switch (f->kind) {
      case FKind::True:
        return positive ? LTree::mk_true() : LTree::mk_false();
      case FKind::False:
        return positive ? LTree::mk_false() : LTree::mk_true();
      case FKind::Not:
        return build(f->child, !positive);
      case FKind::And:
      case FKind::Or: {
        bool conj = (f->kind == FKind::And) == positive;
        LTree n{conj ? LTree::Kind::And : LTree::Kind::Or, {}, "", 0, {}};
        n.kids.push_back(build(f->child, positive));
        n.kids.push_back(build(f->child2, positive));
        return n;
      }
      case FKind::Implies:
        return build(f_or(f_not(f->child), f->child2), positive);
      case FKind::Pred: {
        int p = vocab.predicate_index(f->name);
        if (p < 0) throw CanonicalError("canonical: non-unary symbol '" + f->name + "'");
        if (f->args.size() != 1 || !f->args[0].is_constant)
          throw CanonicalError("canonical: free variable under no quantifier");
        const std::string& c = f->args[0].name;
        // P(c) (or its negation) expands to the disjunction of A_i(c) over the
        // atom set of the literal.
        LTree orn{LTree::Kind::Or, {}, "", 0, {}};
        int k = vocab.k();
        for (int a = 0; a < K; ++a) {
          bool holds = ((static_cast<unsigned>(a) >> (k - 1 - p)) & 1u) == 0;
          if (holds == positive) {
            LTree leaf{LTree::Kind::ConstAtom, {}, c, a, {}};
            orn.kids.push_back(leaf);
          }
        }
        if (orn.kids.empty()) return LTree::mk_false();
        return orn;
      }
      case FKind::Exists: {
        FormulaPtr body = f->child;
        std::set<int> atoms;
        try {
          atoms = atom_set(body, vocab, f->name);
        } catch (const std::exception&) {
          throw CanonicalError("canonical: quantified body is not essentially propositional");
        }
        if (positive) {
          LTree orn{LTree::Kind::Or, {}, "", 0, {}};
          for (int a : atoms) orn.kids.push_back(LTree{LTree::Kind::ExistsAtom, {}, "", a, {}});
          if (orn.kids.empty()) return LTree::mk_false();
          return orn;
        }
        LTree andn{LTree::Kind::And, {}, "", 0, {}};
        for (int a : atoms) andn.kids.push_back(LTree{LTree::Kind::NotExistsAtom, {}, "", a, {}});
        if (andn.kids.empty()) return LTree::mk_true();
        return andn;
      }
      case FKind::Forall:
        return build(f_not(f_exists(f->name, f_not(f->child))), positive);
      case FKind::Compare:
        return compare_to_ltree(f, positive);
      case FKind::TermEq:
        throw CanonicalError("canonical: equality between terms is not allowed in the KB");
    }
    throw CanonicalError("canonical: bad formula kind");
  }

  // DNF: list of conjunctions of leaves.
  void dnf(const LTree& t, std::vector<std::vector<const LTree*>>* out) const {
    switch (t.kind) {
      case LTree::Kind::TrueL:
        out->push_back({});
        return;
      case LTree::Kind::FalseL:
        return;
      case LTree::Kind::ConstAtom:
      case LTree::Kind::ExistsAtom:
      case LTree::Kind::NotExistsAtom:
      case LTree::Kind::Constraint:
        out->push_back({&t});
        return;
      case LTree::Kind::Or: {
        for (auto& k : t.kids) {
          std::vector<std::vector<const LTree*>> sub;
          dnf(k, &sub);
          for (auto& s : sub) {
            out->push_back(std::move(s));
            if (static_cast<int>(out->size()) > opt.max_disjuncts)
              throw CanonicalError("canonical: disjunct count exceeds the configured limit");
          }
        }
        return;
      }
      case LTree::Kind::And: {
        std::vector<std::vector<const LTree*>> acc;
        acc.push_back({});
        for (auto& k : t.kids) {
          std::vector<std::vector<const LTree*>> sub;
          dnf(k, &sub);
          std::vector<std::vector<const LTree*>> next;
          for (auto& a : acc)
            for (auto& s : sub) {
              std::vector<const LTree*> merged = a;
              merged.insert(merged.end(), s.begin(), s.end());
              next.push_back(std::move(merged));
              if (static_cast<int>(next.size()) > opt.max_disjuncts)
                throw CanonicalError("canonical: disjunct count exceeds the configured limit");
            }
          acc = std::move(next);
        }
        for (auto& a : acc) out->push_back(std::move(a));
        return;
      }
    }
  }

  CanonicalForm assemble(const std::vector<std::vector<const LTree*>>& disjuncts) const {
    CanonicalForm cf;
    cf.K = K;
    std::set<std::string> seen;
    for (auto& d : disjuncts) {
      CanonDisjunct out;
      bool inconsistent = false;
      std::set<std::string> constraint_keys;
      for (const LTree* leaf : d) {
        switch (leaf->kind) {
          case LTree::Kind::ConstAtom: {
            auto it = out.constant_atom.find(leaf->constant);
            if (it != out.constant_atom.end() && it->second != leaf->atom) {
              inconsistent = true;  // A_i(c) and A_j(c), i != j
            } else {
              out.constant_atom[leaf->constant] = leaf->atom;
            }
            break;
          }
          case LTree::Kind::ExistsAtom:
            out.must_exist.insert(leaf->atom);
            break;
          case LTree::Kind::NotExistsAtom:
            out.must_not_exist.insert(leaf->atom);
            break;
          case LTree::Kind::Constraint: {
            if (constraint_keys.insert(leaf->constraint.key()).second)
              out.constraints.push_back(leaf->constraint);
            break;
          }
          default:
            break;
        }
        if (inconsistent) break;
      }
      if (inconsistent) continue;
      for (int a : out.must_exist)
        if (out.must_not_exist.count(a)) inconsistent = true;  // contradictory size literals
      for (auto& [c, a] : out.constant_atom)
        if (out.must_not_exist.count(a)) inconsistent = true;  // A_i(c) with !exists A_i
      // Purely contradictory polynomial conjuncts: a positive linear t' = 0
      // forces its atoms empty, clashing with A_i(c), exists-literals, or a
      // t' > 0 conjunct over the same polynomial.
      for (auto& cst : out.constraints) {
        if (cst.kind != CanonConstraint::Kind::ZeroEq || cst.tprime.is_zero()) continue;
        bool lin = true;
        std::set<int> atoms;
        for (auto& [m, coef] : cst.tprime.mono) {
          if (m.size() != 1) lin = false;
          for (int a : m) atoms.insert(a);
        }
        if (lin) {
          for (int a : out.must_exist)
            if (atoms.count(a)) inconsistent = true;
          for (auto& [c, a] : out.constant_atom)
            if (atoms.count(a)) inconsistent = true;
        }
        for (auto& other : out.constraints) {
          bool positive_side = other.kind == CanonConstraint::Kind::Pos ||
                               other.kind == CanonConstraint::Kind::TolLeq ||
                               other.kind == CanonConstraint::Kind::NegTolLeq;
          if (positive_side && !other.tprime.is_constant() &&
              other.tprime.key() == cst.tprime.key())
            inconsistent = true;
        }
      }
      if (inconsistent) continue;
      if (out.constant_atom.empty() && out.must_exist.empty() && out.must_not_exist.empty() &&
          out.constraints.empty()) {
        // canonical form has no empty conjunction: use the vacuous 0 = 0.
        out.constraints.push_back(
            CanonConstraint{CanonConstraint::Kind::ZeroEq, {}, AtomPoly{}, 0});
      }
      if (seen.insert(out.key()).second) cf.disjuncts.push_back(std::move(out));
    }
    return cf;
  }
};

}  // namespace

CanonicalForm to_canonical(const FormulaPtr& kb, const Vocabulary& vocab,
                           const CanonicalOptions& opt) {
  FormulaPtr f = desugar(kb);
  f = rename_apart(f);
  f = flatten(f, vocab, opt);
  f = to_exact(f);
  f = simplify_constants(f);
  Canonicalizer cz{vocab, opt, vocab.atom_count()};
  LTree t = cz.build(f, true);
  std::vector<std::vector<const LTree*>> disjuncts;
  cz.dnf(t, &disjuncts);
  return cz.assemble(disjuncts);
}

namespace {

PropExprPtr atompoly_to_expr(const AtomPoly& p, const Vocabulary& vocab) {
  if (p.mono.empty()) return p_const(Rational(0));
  PropExprPtr acc;
  std::string var = "x";
  for (auto& [m, c] : p.mono) {
    PropExprPtr me;
    for (int id : m) {
      PropExprPtr t = p_prop(atom_formula(vocab, id, Term{false, var}), {var});
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

}  // namespace

FormulaPtr canonical_to_formula(const CanonicalForm& cf, const Vocabulary& vocab) {
  std::vector<FormulaPtr> disjuncts;
  for (auto& d : cf.disjuncts) {
    std::vector<FormulaPtr> conjuncts;
    for (auto& [c, a] : d.constant_atom)
      conjuncts.push_back(atom_formula(vocab, a, Term{true, c}));
    for (int a : d.must_exist)
      conjuncts.push_back(f_exists("x", atom_formula(vocab, a, Term{false, "x"})));
    for (int a : d.must_not_exist)
      conjuncts.push_back(f_not(f_exists("x", atom_formula(vocab, a, Term{false, "x"}))));
    for (auto& cst : d.constraints) {
      PropExprPtr t = atompoly_to_expr(cst.t, vocab);
      PropExprPtr tp = atompoly_to_expr(cst.tprime, vocab);
      switch (cst.kind) {
        case CanonConstraint::Kind::ZeroEq:
          conjuncts.push_back(f_compare(tp, CmpOp::ExactEq, 0, p_const(Rational(0))));
          break;
        case CanonConstraint::Kind::Pos:
          conjuncts.push_back(f_compare(tp, CmpOp::ExactGt, 0, p_const(Rational(0))));
          break;
        case CanonConstraint::Kind::TolLeq:
        case CanonConstraint::Kind::NegTolLeq: {
          bool scale_const = cst.tprime.is_constant();
          PropExprPtr rhs =
              scale_const && cst.tprime.constant_value() == Rational(1)
                  ? PropExprPtr(p_epsilon(cst.tol_index))
                  : p_product(tp, p_epsilon(cst.tol_index));
          FormulaPtr cmp = f_compare(t, CmpOp::ExactLeq, 0, rhs);
          if (cst.kind == CanonConstraint::Kind::NegTolLeq) cmp = f_not(cmp);
          if (!scale_const)
            conjuncts.push_back(f_and(f_compare(tp, CmpOp::ExactGt, 0, p_const(Rational(0))), cmp));
          else
            conjuncts.push_back(cmp);
          break;
        }
      }
    }
    disjuncts.push_back(f_and_all(conjuncts));
  }
  return f_or_all(disjuncts);
}

}  // namespace rw
