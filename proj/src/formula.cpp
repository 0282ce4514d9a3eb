#include "rw/formula.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace rw {

bool cmp_is_approx(CmpOp op) { return op == CmpOp::ApproxEq || op == CmpOp::ApproxLeq; }

void Vocabulary::validate() const {
  std::set<std::string> seen;
  auto check = [&seen](const std::string& n) {
    if (!seen.insert(n).second)
      throw std::invalid_argument("vocabulary: duplicate name '" + n + "'");
  };
  for (auto& p : unary_predicates) check(p);
  for (auto& c : constants) check(c);
  for (auto& r : relations) {
    check(r.first);
    if (r.second < 2) throw std::invalid_argument("vocabulary: relation arity must be >= 2");
  }
}

static FormulaPtr mk(FKind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

FormulaPtr f_true() {
  static FormulaPtr t = mk(FKind::True);
  return t;
}
FormulaPtr f_false() {
  static FormulaPtr f = mk(FKind::False);
  return f;
}
FormulaPtr f_pred(std::string name, std::vector<Term> args) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Pred;
  f->name = std::move(name);
  f->args = std::move(args);
  return f;
}
FormulaPtr f_term_eq(Term a, Term b) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::TermEq;
  f->tlhs = std::move(a);
  f->trhs = std::move(b);
  return f;
}
FormulaPtr f_not(FormulaPtr c) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Not;
  f->child = std::move(c);
  return f;
}
static FormulaPtr binop(FKind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->child = std::move(a);
  f->child2 = std::move(b);
  return f;
}
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return binop(FKind::And, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return binop(FKind::Or, std::move(a), std::move(b)); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return binop(FKind::Implies, std::move(a), std::move(b));
}
static FormulaPtr quant(FKind k, std::string var, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->name = std::move(var);
  f->child = std::move(body);
  return f;
}
FormulaPtr f_exists(std::string var, FormulaPtr body) {
  return quant(FKind::Exists, std::move(var), std::move(body));
}
FormulaPtr f_forall(std::string var, FormulaPtr body) {
  return quant(FKind::Forall, std::move(var), std::move(body));
}
FormulaPtr f_compare(PropExprPtr lhs, CmpOp op, int tol_index, PropExprPtr rhs) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Compare;
  f->plhs = std::move(lhs);
  f->prhs = std::move(rhs);
  f->cmp = op;
  f->tol_index = tol_index;
  return f;
}
FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_true();
  FormulaPtr r = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) r = f_and(r, fs[i]);
  return r;
}
FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_false();
  FormulaPtr r = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) r = f_or(r, fs[i]);
  return r;
}

PropExprPtr p_const(Rational v) {
  auto p = std::make_shared<PropExpr>();
  p->kind = PKind::Const;
  p->value = std::move(v);
  return p;
}
PropExprPtr p_prop(FormulaPtr body, std::vector<std::string> vars) {
  if (vars.empty()) throw std::invalid_argument("proportion term: empty variable set");
  std::sort(vars.begin(), vars.end());
  auto p = std::make_shared<PropExpr>();
  p->kind = PKind::Prop;
  p->body = std::move(body);
  p->vars = std::move(vars);
  return p;
}
PropExprPtr p_cond_prop(FormulaPtr body, FormulaPtr cond, std::vector<std::string> vars) {
  if (vars.empty()) throw std::invalid_argument("proportion term: empty variable set");
  std::sort(vars.begin(), vars.end());
  auto p = std::make_shared<PropExpr>();
  p->kind = PKind::CondProp;
  p->body = std::move(body);
  p->cond = std::move(cond);
  p->vars = std::move(vars);
  return p;
}
static PropExprPtr pbin(PKind k, PropExprPtr a, PropExprPtr b) {
  auto p = std::make_shared<PropExpr>();
  p->kind = k;
  p->lhs = std::move(a);
  p->rhs = std::move(b);
  return p;
}
PropExprPtr p_sum(PropExprPtr a, PropExprPtr b) { return pbin(PKind::Sum, std::move(a), std::move(b)); }
PropExprPtr p_diff(PropExprPtr a, PropExprPtr b) { return pbin(PKind::Diff, std::move(a), std::move(b)); }
PropExprPtr p_product(PropExprPtr a, PropExprPtr b) {
  return pbin(PKind::Product, std::move(a), std::move(b));
}
PropExprPtr p_epsilon(int index) {
  auto p = std::make_shared<PropExpr>();
  p->kind = PKind::Epsilon;
  p->tol_index = index;
  return p;
}

bool equal(const PropExprPtr& a, const PropExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case PKind::Const: return a->value == b->value;
    case PKind::Prop: return a->vars == b->vars && equal(a->body, b->body);
    case PKind::CondProp:
      return a->vars == b->vars && equal(a->body, b->body) && equal(a->cond, b->cond);
    case PKind::Sum:
    case PKind::Diff:
    case PKind::Product:
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case PKind::Epsilon: return a->tol_index == b->tol_index;
  }
  return false;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case FKind::True:
    case FKind::False:
      return true;
    case FKind::Pred:
      return a->name == b->name && a->args == b->args;
    case FKind::TermEq:
      return a->tlhs == b->tlhs && a->trhs == b->trhs;
    case FKind::Not:
      return equal(a->child, b->child);
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      return equal(a->child, b->child) && equal(a->child2, b->child2);
    case FKind::Exists:
    case FKind::Forall:
      return a->name == b->name && equal(a->child, b->child);
    case FKind::Compare:
      return a->cmp == b->cmp && a->tol_index == b->tol_index && equal(a->plhs, b->plhs) &&
             equal(a->prhs, b->prhs);
  }
  return false;
}

const Rational& ToleranceVector::at(int i) const {
  auto it = values.find(i);
  if (it == values.end())
    throw std::out_of_range("tolerance vector: missing index " + std::to_string(i));
  return it->second;
}

void ToleranceVector::validate_positive() const {
  for (auto& [i, v] : values)
    if (v.sign() <= 0)
      throw std::invalid_argument("tolerance vector: tau_" + std::to_string(i) +
                                  " must be positive");
}

ToleranceVector ToleranceVector::uniform(const Rational& v, int max_index) {
  ToleranceVector t;
  for (int i = 1; i <= max_index; ++i) t.values[i] = v;
  return t;
}

// --- syntactic walkers ---

static void walk_prop(const PropExprPtr& p, const std::function<void(const FormulaPtr&)>& onf,
                      const std::function<void(const PropExprPtr&)>& onp);

static void walk(const FormulaPtr& f, const std::function<void(const FormulaPtr&)>& onf,
                 const std::function<void(const PropExprPtr&)>& onp) {
  if (!f) return;
  onf(f);
  switch (f->kind) {
    case FKind::Not:
    case FKind::Exists:
    case FKind::Forall:
      walk(f->child, onf, onp);
      break;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      walk(f->child, onf, onp);
      walk(f->child2, onf, onp);
      break;
    case FKind::Compare:
      walk_prop(f->plhs, onf, onp);
      walk_prop(f->prhs, onf, onp);
      break;
    default:
      break;
  }
}

static void walk_prop(const PropExprPtr& p, const std::function<void(const FormulaPtr&)>& onf,
                      const std::function<void(const PropExprPtr&)>& onp) {
  if (!p) return;
  onp(p);
  switch (p->kind) {
    case PKind::Prop:
      walk(p->body, onf, onp);
      break;
    case PKind::CondProp:
      walk(p->body, onf, onp);
      walk(p->cond, onf, onp);
      break;
    case PKind::Sum:
    case PKind::Diff:
    case PKind::Product:
      walk_prop(p->lhs, onf, onp);
      walk_prop(p->rhs, onf, onp);
      break;
    default:
      break;
  }
}

void collect_tolerance_indices(const FormulaPtr& f, std::set<int>* out) {
  walk(f,
       [out](const FormulaPtr& g) {
         if (g->kind == FKind::Compare && cmp_is_approx(g->cmp)) out->insert(g->tol_index);
       },
       [out](const PropExprPtr& p) {
         if (p->kind == PKind::Epsilon) out->insert(p->tol_index);
       });
}

void collect_constants(const FormulaPtr& f, std::set<std::string>* out) {
  walk(f,
       [out](const FormulaPtr& g) {
         if (g->kind == FKind::Pred) {
           for (auto& t : g->args)
             if (t.is_constant) out->insert(t.name);
         } else if (g->kind == FKind::TermEq) {
           if (g->tlhs.is_constant) out->insert(g->tlhs.name);
           if (g->trhs.is_constant) out->insert(g->trhs.name);
         }
       },
       [](const PropExprPtr&) {});
}

bool mentions_relation(const FormulaPtr& f, const Vocabulary& vocab) {
  bool found = false;
  walk(f,
       [&](const FormulaPtr& g) {
         if (g->kind == FKind::Pred && vocab.is_relation(g->name)) found = true;
       },
       [](const PropExprPtr&) {});
  return found;
}

bool mentions_term_equality(const FormulaPtr& f) {
  bool found = false;
  walk(f, [&](const FormulaPtr& g) { if (g->kind == FKind::TermEq) found = true; },
       [](const PropExprPtr&) {});
  return found;
}

bool has_quantifier(const FormulaPtr& f) {
  bool found = false;
  walk(f,
       [&](const FormulaPtr& g) {
         if (g->kind == FKind::Exists || g->kind == FKind::Forall) found = true;
       },
       [](const PropExprPtr&) {});
  return found;
}

bool has_proportion(const FormulaPtr& f) {
  bool found = false;
  walk(f, [&](const FormulaPtr& g) { if (g->kind == FKind::Compare) found = true; },
       [](const PropExprPtr&) {});
  return found;
}

bool has_approx_compare(const FormulaPtr& f) {
  bool found = false;
  walk(f,
       [&](const FormulaPtr& g) {
         if (g->kind == FKind::Compare && cmp_is_approx(g->cmp)) found = true;
       },
       [&](const PropExprPtr& p) {
         if (p->kind == PKind::CondProp) found = true;
       });
  return found;
}

int quantifier_rank(const FormulaPtr& f) {
  if (!f) return 0;
  switch (f->kind) {
    case FKind::Not:
      return quantifier_rank(f->child);
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      return std::max(quantifier_rank(f->child), quantifier_rank(f->child2));
    case FKind::Exists:
    case FKind::Forall:
      return 1 + quantifier_rank(f->child);
    default:
      return 0;
  }
}

static void free_vars_prop(const PropExprPtr& p, std::set<std::string> bound,
                           std::set<std::string>* out);

static void free_vars_rec(const FormulaPtr& f, std::set<std::string> bound,
                          std::set<std::string>* out) {
  if (!f) return;
  switch (f->kind) {
    case FKind::Pred:
      for (auto& t : f->args)
        if (!t.is_constant && !bound.count(t.name)) out->insert(t.name);
      break;
    case FKind::TermEq:
      if (!f->tlhs.is_constant && !bound.count(f->tlhs.name)) out->insert(f->tlhs.name);
      if (!f->trhs.is_constant && !bound.count(f->trhs.name)) out->insert(f->trhs.name);
      break;
    case FKind::Not:
      free_vars_rec(f->child, bound, out);
      break;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      free_vars_rec(f->child, bound, out);
      free_vars_rec(f->child2, bound, out);
      break;
    case FKind::Exists:
    case FKind::Forall: {
      auto b = bound;
      b.insert(f->name);
      free_vars_rec(f->child, b, out);
      break;
    }
    case FKind::Compare:
      free_vars_prop(f->plhs, bound, out);
      free_vars_prop(f->prhs, bound, out);
      break;
    default:
      break;
  }
}

static void free_vars_prop(const PropExprPtr& p, std::set<std::string> bound,
                           std::set<std::string>* out) {
  if (!p) return;
  switch (p->kind) {
    case PKind::Prop:
    case PKind::CondProp: {
      auto b = bound;
      for (auto& v : p->vars) b.insert(v);
      free_vars_rec(p->body, b, out);
      if (p->cond) free_vars_rec(p->cond, b, out);
      break;
    }
    case PKind::Sum:
    case PKind::Diff:
    case PKind::Product:
      free_vars_prop(p->lhs, bound, out);
      free_vars_prop(p->rhs, bound, out);
      break;
    default:
      break;
  }
}

void free_variables(const FormulaPtr& f, std::set<std::string>* out) {
  free_vars_rec(f, {}, out);
}

bool essentially_propositional(const FormulaPtr& f, const Vocabulary& vocab,
                               const std::string& var) {
  if (has_quantifier(f) || has_proportion(f) || mentions_term_equality(f)) return false;
  if (mentions_relation(f, vocab)) return false;
  std::set<std::string> consts;
  collect_constants(f, &consts);
  if (!consts.empty()) return false;
  std::set<std::string> fv;
  free_variables(f, &fv);
  for (auto& v : fv)
    if (v != var) return false;
  return true;
}

static PropExprPtr subst_prop(const PropExprPtr& p, const std::string& c, const std::string& var);

FormulaPtr substitute_constant_by_var(const FormulaPtr& f, const std::string& c,
                                      const std::string& var) {
  if (!f) return f;
  switch (f->kind) {
    case FKind::True:
    case FKind::False:
      return f;
    case FKind::Pred: {
      auto args = f->args;
      for (auto& t : args)
        if (t.is_constant && t.name == c) t = Term{false, var};
      return f_pred(f->name, args);
    }
    case FKind::TermEq: {
      Term a = f->tlhs, b = f->trhs;
      if (a.is_constant && a.name == c) a = Term{false, var};
      if (b.is_constant && b.name == c) b = Term{false, var};
      return f_term_eq(a, b);
    }
    case FKind::Not:
      return f_not(substitute_constant_by_var(f->child, c, var));
    case FKind::And:
      return f_and(substitute_constant_by_var(f->child, c, var),
                   substitute_constant_by_var(f->child2, c, var));
    case FKind::Or:
      return f_or(substitute_constant_by_var(f->child, c, var),
                  substitute_constant_by_var(f->child2, c, var));
    case FKind::Implies:
      return f_implies(substitute_constant_by_var(f->child, c, var),
                       substitute_constant_by_var(f->child2, c, var));
    case FKind::Exists:
      return f_exists(f->name, substitute_constant_by_var(f->child, c, var));
    case FKind::Forall:
      return f_forall(f->name, substitute_constant_by_var(f->child, c, var));
    case FKind::Compare:
      return f_compare(subst_prop(f->plhs, c, var), f->cmp, f->tol_index,
                       subst_prop(f->prhs, c, var));
  }
  return f;
}

static PropExprPtr subst_prop(const PropExprPtr& p, const std::string& c, const std::string& var) {
  if (!p) return p;
  switch (p->kind) {
    case PKind::Const:
    case PKind::Epsilon:
      return p;
    case PKind::Prop:
      return p_prop(substitute_constant_by_var(p->body, c, var), p->vars);
    case PKind::CondProp:
      return p_cond_prop(substitute_constant_by_var(p->body, c, var),
                         substitute_constant_by_var(p->cond, c, var), p->vars);
    case PKind::Sum:
      return p_sum(subst_prop(p->lhs, c, var), subst_prop(p->rhs, c, var));
    case PKind::Diff:
      return p_diff(subst_prop(p->lhs, c, var), subst_prop(p->rhs, c, var));
    case PKind::Product:
      return p_product(subst_prop(p->lhs, c, var), subst_prop(p->rhs, c, var));
  }
  return p;
}

// --- rename apart ---

namespace {

struct Renamer {
  std::set<std::string> used;
  int counter = 0;

  std::string fresh(const std::string& base) {
    if (!used.count(base)) {
      used.insert(base);
      return base;
    }
    std::string cand;
    do {
      cand = base + "_" + std::to_string(counter++);
    } while (used.count(cand));
    used.insert(cand);
    return cand;
  }

  PropExprPtr rename_p(const PropExprPtr& p, const std::map<std::string, std::string>& env);

  FormulaPtr rename_f(const FormulaPtr& f, const std::map<std::string, std::string>& env) {
    if (!f) return f;
    switch (f->kind) {
      case FKind::True:
      case FKind::False:
        return f;
      case FKind::Pred: {
        auto args = f->args;
        for (auto& t : args) {
          if (!t.is_constant) {
            auto it = env.find(t.name);
            if (it != env.end()) t.name = it->second;
          }
        }
        return f_pred(f->name, args);
      }
      case FKind::TermEq: {
        Term a = f->tlhs, b = f->trhs;
        auto fix = [&env](Term& t) {
          if (!t.is_constant) {
            auto it = env.find(t.name);
            if (it != env.end()) t.name = it->second;
          }
        };
        fix(a);
        fix(b);
        return f_term_eq(a, b);
      }
      case FKind::Not:
        return f_not(rename_f(f->child, env));
      case FKind::And:
        return f_and(rename_f(f->child, env), rename_f(f->child2, env));
      case FKind::Or:
        return f_or(rename_f(f->child, env), rename_f(f->child2, env));
      case FKind::Implies:
        return f_implies(rename_f(f->child, env), rename_f(f->child2, env));
      case FKind::Exists:
      case FKind::Forall: {
        std::string nv = fresh(f->name);
        auto env2 = env;
        env2[f->name] = nv;
        auto body = rename_f(f->child, env2);
        return f->kind == FKind::Exists ? f_exists(nv, body) : f_forall(nv, body);
      }
      case FKind::Compare:
        return f_compare(rename_p(f->plhs, env), f->cmp, f->tol_index, rename_p(f->prhs, env));
    }
    return f;
  }
};

PropExprPtr Renamer::rename_p(const PropExprPtr& p, const std::map<std::string, std::string>& env) {
  if (!p) return p;
  switch (p->kind) {
    case PKind::Const:
    case PKind::Epsilon:
      return p;
    case PKind::Prop:
    case PKind::CondProp: {
      auto env2 = env;
      std::vector<std::string> nvars;
      for (auto& v : p->vars) {
        std::string nv = fresh(v);
        env2[v] = nv;
        nvars.push_back(nv);
      }
      auto body = rename_f(p->body, env2);
      if (p->kind == PKind::Prop) return p_prop(body, nvars);
      return p_cond_prop(body, rename_f(p->cond, env2), nvars);
    }
    case PKind::Sum:
      return p_sum(rename_p(p->lhs, env), rename_p(p->rhs, env));
    case PKind::Diff:
      return p_diff(rename_p(p->lhs, env), rename_p(p->rhs, env));
    case PKind::Product:
      return p_product(rename_p(p->lhs, env), rename_p(p->rhs, env));
  }
  return p;
}

}  // namespace

FormulaPtr rename_apart(const FormulaPtr& f) {
  Renamer r;
  std::set<std::string> fv;
  free_variables(f, &fv);
  r.used = fv;  // never capture a free variable
  return r.rename_f(f, {});
}

FormulaPtr desugar(const FormulaPtr& f) {
  if (!f) return f;
  switch (f->kind) {
    case FKind::Implies:
      return f_or(f_not(desugar(f->child)), desugar(f->child2));
    case FKind::Forall:
      return f_not(f_exists(f->name, f_not(desugar(f->child))));
    case FKind::Not:
      return f_not(desugar(f->child));
    case FKind::And:
      return f_and(desugar(f->child), desugar(f->child2));
    case FKind::Or:
      return f_or(desugar(f->child), desugar(f->child2));
    case FKind::Exists:
      return f_exists(f->name, desugar(f->child));
    case FKind::Compare: {
      std::function<PropExprPtr(const PropExprPtr&)> dp = [&](const PropExprPtr& p) -> PropExprPtr {
        if (!p) return p;
        switch (p->kind) {
          case PKind::Prop:
            return p_prop(desugar(p->body), p->vars);
          case PKind::CondProp:
            return p_cond_prop(desugar(p->body), desugar(p->cond), p->vars);
          case PKind::Sum:
            return p_sum(dp(p->lhs), dp(p->rhs));
          case PKind::Diff:
            return p_diff(dp(p->lhs), dp(p->rhs));
          case PKind::Product:
            return p_product(dp(p->lhs), dp(p->rhs));
          default:
            return p;
        }
      };
      return f_compare(dp(f->plhs), f->cmp, f->tol_index, dp(f->prhs));
    }
    default:
      return f;
  }
}

}  // namespace rw
