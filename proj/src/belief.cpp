#include "rw/belief.hpp"

#include <algorithm>
#include <cmath>

#include "rw/parser.hpp"
#include "rw/translate.hpp"

namespace rw {

std::string to_string(BeliefStatus s) {
  switch (s) {
    case BeliefStatus::Defined: return "defined";
    case BeliefStatus::Interval: return "interval";
    case BeliefStatus::NonRobust: return "nonrobust";
    case BeliefStatus::MaxEntInapplicable: return "maxent-inapplicable";
    case BeliefStatus::Unsupported: return "unsupported";
  }
  return "?";
}

namespace {

bool quantifier_and_proportion_free(const FormulaPtr& f) {
  return !has_quantifier(f) && !has_proportion(f);
}

std::vector<std::string> sorted_constants(const FormulaPtr& f) {
  std::set<std::string> s;
  collect_constants(f, &s);
  return std::vector<std::string>(s.begin(), s.end());
}

void split_conjuncts(const FormulaPtr& f, std::vector<FormulaPtr>* out) {
  if (f->kind == FKind::And) {
    split_conjuncts(f->child, out);
    split_conjuncts(f->child2, out);
  } else {
    out->push_back(f);
  }
}

}  // namespace

QueryClass classify(const FormulaPtr& phi, const std::vector<FormulaPtr>& kb_in,
                    const Vocabulary& vocab) {
  QueryClass qc;
  std::vector<FormulaPtr> kb;
  for (auto& f : kb_in) split_conjuncts(f, &kb);
  if (has_proportion(phi)) {
    qc.kind = QueryKind::Unsupported;
    qc.reason =
        "the query contains a proportion comparison; its limiting value depends on how the "
        "tolerances go to zero and is nonrobust under this semantics";
    return qc;
  }

  // Separability split: grow Z from the query constants through the
  // quantifier- and proportion-free conjuncts that touch it.
  std::set<std::string> Z;
  collect_constants(phi, &Z);
  std::vector<bool> in_psi(kb.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < kb.size(); ++i) {
      if (in_psi[i] || !quantifier_and_proportion_free(kb[i])) continue;
      std::set<std::string> cs;
      collect_constants(kb[i], &cs);
      bool touches = false;
      for (auto& c : cs)
        if (Z.count(c)) touches = true;
      if (touches) {
        in_psi[i] = true;
        for (auto& c : cs)
          if (Z.insert(c).second) changed = true;
        changed = true;
      }
    }
  }
  std::vector<FormulaPtr> psi_parts, rest;
  for (size_t i = 0; i < kb.size(); ++i)
    (in_psi[i] ? psi_parts : rest).push_back(kb[i]);
  bool separable = true;
  for (auto& f : rest) {
    std::set<std::string> cs;
    collect_constants(f, &cs);
    for (auto& c : cs)
      if (Z.count(c)) separable = false;
  }
  if (!separable) {
    qc.kind = QueryKind::Unsupported;
    qc.reason =
        "the knowledge base is not separable with respect to the query: a quantified or "
        "statistical conjunct mentions one of the query constants";
    return qc;
  }
  qc.psi = f_and_all(psi_parts);
  qc.kb_prime = rest;
  qc.Z.assign(Z.begin(), Z.end());

  // Simple query: phi(c) with essentially propositional phi(x), psi(x).
  std::vector<std::string> phi_consts = sorted_constants(phi);
  if (phi_consts.size() == 1 && !has_quantifier(phi) && !mentions_term_equality(phi) &&
      !mentions_relation(phi, vocab)) {
    const std::string& c = phi_consts[0];
    FormulaPtr phi_x = substitute_constant_by_var(phi, c, "x");
    bool psi_ok = true;
    for (auto& p : psi_parts) {
      std::vector<std::string> cs = sorted_constants(p);
      if (cs.size() != 1 || cs[0] != c) psi_ok = false;
    }
    FormulaPtr psi_x = substitute_constant_by_var(qc.psi, c, "x");
    if (psi_ok && essentially_propositional(phi_x, vocab, "x") &&
        essentially_propositional(psi_x, vocab, "x")) {
      qc.kind = QueryKind::Simple;
      qc.constant = c;
      qc.phi_x = phi_x;
      qc.psi_x = psi_x;
      return qc;
    }
  }

  if (!has_quantifier(phi)) {
    qc.kind = QueryKind::Separable;
    return qc;
  }
  if (mentions_relation(phi, vocab)) {
    qc.kind = QueryKind::Unsupported;
    qc.reason =
        "quantified query over a non-unary relation: deciding its 0-1 limit needs the full "
        "first-order procedure, which is out of scope; use the oracle to estimate it";
    return qc;
  }
  qc.kind = QueryKind::UnaryQuantified;
  return qc;
}

namespace {

std::set<int> tolerance_indices(const FormulaPtr& f) {
  std::set<int> s;
  collect_tolerance_indices(f, &s);
  return s;
}

ToleranceVector uniform_tau(const std::set<int>& idx, const Rational& v) {
  ToleranceVector t;
  for (int i : idx) t.values[i] = v;
  return t;
}

RegionDescriptor region_all_cells(const InstConstraintFormula& inst) {
  // like region_from_instantiated but without deduplication, so cell indices
  // line up with canonical disjuncts
  RegionDescriptor rd;
  rd.K = inst.K;
  for (auto& cell : inst.cells) {
    RegionCell rc;
    for (auto& c : cell.constraints) {
      rc.constraints.push_back(c);
      size_t deg = 0;
      for (auto& [m, coef] : c.poly.mono) deg = std::max(deg, m.size());
      if (deg > 1) rc.linear = false;
      if (rel_is_strict(c.rel)) rc.has_strict = true;
    }
    rd.cells.push_back(std::move(rc));
  }
  return rd;
}

bool cell_contains_approx(const InstCell& cell, const VectorXd& v, double tol) {
  for (auto& c : cell.constraints) {
    double x = 0;
    for (auto& [m, coef] : c.poly.mono) {
      double t = coef.to_double();
      for (int id : m) t *= v(id);
      x += t;
    }
    switch (c.rel) {
      case Rel::EQ:
        if (std::abs(x) > tol) return false;
        break;
      case Rel::LE:
      case Rel::LT:
        if (x > tol) return false;
        break;
      case Rel::GE:
      case Rel::GT:
        if (x < -tol) return false;
        break;
    }
  }
  return true;
}

void attach_oracle(BeliefResult* res, const FormulaPtr& phi, const std::vector<FormulaPtr>& kb,
                   const Vocabulary& vocab, const BeliefConfig& cfg) {
  if (cfg.oracle_Ns.empty()) return;
  FormulaPtr kbAll = f_and_all(kb);
  std::set<int> idx = tolerance_indices(kbAll);
  std::set<int> pidx = tolerance_indices(phi);
  idx.insert(pidx.begin(), pidx.end());
  ToleranceVector tau = uniform_tau(idx, cfg.oracle_tau);
  CountOptions copt;
  copt.state_budget = cfg.oracle_budget;
  for (int N : cfg.oracle_Ns) {
    OracleRow row;
    row.N = N;
    try {
      row.value = pr_n(vocab, N, tau, phi, kbAll, copt);
    } catch (const CapacityError&) {
      // leave value empty
    }
    res->oracle.push_back(row);
  }
}

}  // namespace

ProbeRow per_tau_value(const FormulaPtr& phi, const CanonicalForm& cf, const ConstraintFormula& g,
                       const Vocabulary& vocab, const ToleranceVector& tau,
                       const BeliefConfig& cfg) {
  ProbeRow row;
  for (auto& [i, v] : tau.values) row.tau[i] = v;
  InstConstraintFormula inst = instantiate(g, tau);
  RegionDescriptor region = region_all_cells(inst);
  MaxEntResult me = maximize(region, cfg.constraint.maxent);
  if (!me.feasible) {
    row.status = "infeasible";
    return row;
  }
  if (me.maxima.size() > 1) {
    row.status = "multiple-maxima";
    return row;
  }
  const VectorXd& v = me.maxima[0].u;
  SizeDescription sigma_v = size_description_of(v, cfg.constraint.zero_threshold);

  std::vector<int> active;
  for (size_t j = 0; j < inst.cells.size(); ++j)
    if (cell_contains_approx(inst.cells[j], v, 1e-7)) active.push_back(static_cast<int>(j));

  std::vector<std::string> Z = sorted_constants(phi);
  DescriptionOptions dopt;
  dopt.force_distinct = true;
  dopt.with_relations = mentions_relation(phi, vocab);
  std::vector<CompleteDescription> descs = enumerate_descriptions(Z, vocab, nullptr, dopt);

  double num = 0, den = 0;
  for (auto& d : descs) {
    bool allowed = false;
    for (int j : active) {
      bool ok = true;
      for (auto& [c, a] : cf.disjuncts[j].constant_atom) {
        bool inZ = std::find(Z.begin(), Z.end(), c) != Z.end();
        if (inZ) {
          if (d.atom_of(c) != a) ok = false;
        } else if (v(a) <= 1e-9) {
          ok = false;  // constants outside Z marginalize over inhabited atoms
        }
      }
      if (ok) {
        allowed = true;
        break;
      }
    }
    if (!allowed) continue;
    double w = f_description(d, v);
    if (w <= 0) continue;
    int val;
    try {
      val = zero_one_limit(phi, sigma_v, d, vocab);
    } catch (const ZeroOneUnsupported&) {
      row.status = "unsupported";
      return row;
    }
    num += val * w;
    den += w;
  }
  if (den <= 0) {
    row.status = "zero-denominator";
    return row;
  }
  row.status = "ok";
  row.value = num / den;
  return row;
}

ProbeReport probe_tau(const FormulaPtr& phi, const std::vector<FormulaPtr>& kb,
                      const Vocabulary& vocab, const BeliefConfig& cfg) {
  ProbeReport rep;
  FormulaPtr kbAll = f_and_all(kb);
  if (has_proportion(phi)) {
    ProbeRow row;
    row.status = "unsupported";
    rep.rows.push_back(row);
    return rep;
  }
  CanonicalForm cf = to_canonical(kbAll, vocab);
  ConstraintFormula g = gamma(cf);
  std::vector<int> idx;
  for (int i : tolerance_indices(kbAll)) idx.push_back(i);

  std::vector<ToleranceVector> assignments;
  for (auto& scale : cfg.probe_scales) {
    // all-equal assignment
    ToleranceVector eq;
    for (int i : idx) eq.values[i] = scale;
    assignments.push_back(eq);
    // permuted orderings (tau_a > tau_b and tau_a < tau_b and so on)
    if (idx.size() >= 2 && idx.size() <= 3) {
      std::vector<int> perm = idx;
      std::sort(perm.begin(), perm.end());
      do {
        ToleranceVector t;
        Rational v = scale;
        for (size_t j = 0; j < perm.size(); ++j) {
          t.values[perm[j]] = v;
          v = v * Rational(1, 2);
        }
        assignments.push_back(t);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  if (idx.empty()) {
    ToleranceVector t;
    assignments.assign(1, t);
  }

  double lo = 0, hi = 0;
  for (auto& tau : assignments) {
    ProbeRow row = per_tau_value(phi, cf, g, vocab, tau, cfg);
    if (row.value) {
      if (rep.defined == 0) {
        lo = hi = *row.value;
      } else {
        lo = std::min(lo, *row.value);
        hi = std::max(hi, *row.value);
      }
      ++rep.defined;
    }
    rep.rows.push_back(std::move(row));
  }
  rep.spread = rep.defined > 0 ? hi - lo : 0;
  return rep;
}

namespace {

// Direct-inference fallback: bound ||phi & psi|| / ||psi|| over
// S^tau[KB] along the probe tolerances and extrapolate the interval to tau=0.
void direct_inference_fallback(BeliefResult* res, const QueryClass& qc,
                               const ConstraintFormula& g, const Vocabulary& vocab,
                               const BeliefConfig& cfg) {
  AtomPoly num, den;
  for (int a : atom_set(f_and(qc.phi_x, qc.psi_x), vocab, "x")) num = num + AtomPoly::atom(a);
  for (int a : atom_set(qc.psi_x, vocab, "x")) den = den + AtomPoly::atom(a);
  std::set<int> idx;
  for (auto& cell : g.cells)
    for (auto& c : cell.constraints)
      if (c.tol_index > 0) idx.insert(c.tol_index);
  for (auto& tp : cfg.tau_probes) {
    RegionDescriptor region = solution_space(g, uniform_tau(idx, tp));
    auto b = bound_statistic(region, num, den, cfg.constraint.maxent);
    if (b) res->direct_inference_bounds.emplace_back(b->first, b->second);
  }
  size_t n = res->direct_inference_bounds.size();
  if (n >= 2) {
    auto [lo1, hi1] = res->direct_inference_bounds[n - 2];
    auto [lo2, hi2] = res->direct_inference_bounds[n - 1];
    double t1 = cfg.tau_probes[n - 2].to_double(), t2 = cfg.tau_probes[n - 1].to_double();
    if (std::abs(t1 - t2) > 1e-15) {
      double lo0 = lo2 + (lo2 - lo1) * (0 - t2) / (t2 - t1);
      double hi0 = hi2 + (hi2 - hi1) * (0 - t2) / (t2 - t1);
      if (std::abs(hi0 - lo0) <= 1e-6) res->direct_inference_value = (lo0 + hi0) / 2;
    }
  }
}

void fill_maxent_fields(BeliefResult* res, const MaxEntResult& me) {
  res->entropy = me.entropy;
  for (auto& m : me.maxima) res->maxent_points.push_back(m.u);
  switch (me.uniqueness) {
    case Uniqueness::ProvenUnique: res->uniqueness = "proven-unique"; break;
    case Uniqueness::HeuristicallyUnique: res->uniqueness = "heuristically-unique"; break;
    case Uniqueness::Multiple: res->uniqueness = "multiple"; break;
  }
  res->unique = me.maxima.size() == 1;
}

}  // namespace

BeliefResult believe_simple(const FormulaPtr& phi, const std::vector<FormulaPtr>& kb,
                            const Vocabulary& vocab, const BeliefConfig& cfg) {
  BeliefResult res;
  res.query_kind = "simple";
  QueryClass qc = classify(phi, kb, vocab);
  if (qc.kind != QueryKind::Simple) {
    res.status = BeliefStatus::Unsupported;
    res.reason = qc.reason.empty() ? "not a simple query" : qc.reason;
    return res;
  }
  FormulaPtr kbAll = f_and_all(kb);
  CanonicalForm cf = to_canonical(kbAll, vocab);
  ConstraintFormula g = gamma(cf);

  if (cfg.fixed_tau) {
    ProbeRow row = per_tau_value(phi, cf, g, vocab, *cfg.fixed_tau, cfg);
    InstConstraintFormula inst = instantiate(g, *cfg.fixed_tau);
    MaxEntResult me = maximize(region_from_instantiated(inst), cfg.constraint.maxent);
    if (me.feasible) fill_maxent_fields(&res, me);
    if (row.value) {
      res.status = BeliefStatus::Defined;
      res.value = row.value;
    } else if (row.status == "multiple-maxima" && me.feasible) {
      // range of the conditional statistic over the maximum-entropy points at this tau
      double lo = 1, hi = 0;
      bool all_defined = true;
      for (auto& m : me.maxima) {
        auto f = f_cond(qc.phi_x, qc.psi_x, m.u, vocab);
        if (!f) {
          all_defined = false;
          break;
        }
        lo = std::min(lo, *f);
        hi = std::max(hi, *f);
      }
      if (all_defined) {
        res.status = BeliefStatus::Interval;
        res.interval = {lo, hi};
      } else {
        res.status = BeliefStatus::MaxEntInapplicable;
        res.reason = "F_[psi] vanishes at a maximum-entropy point";
      }
    } else if (row.status == "infeasible") {
      res.status = BeliefStatus::Unsupported;
      res.reason = "knowledge base is unsatisfiable at the given tolerances";
    } else {
      res.status = BeliefStatus::MaxEntInapplicable;
      res.reason = "probe status: " + row.status;
    }
    attach_oracle(&res, phi, kb, vocab, cfg);
    return res;
  }

  EssentialPositivity ep = is_essentially_positive(g, cfg.constraint);
  if (!ep.strict.feasible) {
    if (!ep.weakened.feasible) {
      res.status = BeliefStatus::Unsupported;
      res.reason =
          "the constraint system is unsatisfiable at tau=0: the knowledge base fails the "
          "eventual-consistency check";
      return res;
    }
    // The exact tau=0 system is empty but its weakened closure is not; the
    // tau->0 limit space is the weakened one. A point answer is only refused
    // or redirected to direct inference here, never asserted.
    fill_maxent_fields(&res, ep.weakened);
    if (ep.weakened.maxima.size() == 1) {
      const VectorXd& v = ep.weakened.maxima[0].u;
      if (f_formula(qc.psi_x, v, vocab) <= cfg.constraint.zero_threshold) {
        res.status = BeliefStatus::MaxEntInapplicable;
        res.reason =
            "F_[psi] is zero at the maximum-entropy point of the weakened tau=0 space; the "
            "point does not determine the answer (direct inference bounds attached)";
        direct_inference_fallback(&res, qc, g, vocab, cfg);
        attach_oracle(&res, phi, kb, vocab, cfg);
        return res;
      }
    }
    res.status = BeliefStatus::NonRobust;
    res.reason = "the strict tau=0 system is empty while its weakened closure is not";
    res.probes = probe_tau(phi, kb, vocab, cfg);
    attach_oracle(&res, phi, kb, vocab, cfg);
    return res;
  }
  res.essentially_positive = ep.essentially_positive;
  fill_maxent_fields(&res, ep.strict);

  if (!ep.essentially_positive) {
    res.status = BeliefStatus::NonRobust;
    res.reason =
        "essential positivity fails: the weakened and strict tau=0 systems have different "
        "maximum-entropy points, so the limit depends on how the tolerances go to zero";
    res.probes = probe_tau(phi, kb, vocab, cfg);
    attach_oracle(&res, phi, kb, vocab, cfg);
    return res;
  }

  if (ep.strict.maxima.size() > 1) {
    double lo = 1, hi = 0;
    bool all_defined = true;
    for (auto& m : ep.strict.maxima) {
      auto f = f_cond(qc.phi_x, qc.psi_x, m.u, vocab);
      if (!f) {
        all_defined = false;
        break;
      }
      lo = std::min(lo, *f);
      hi = std::max(hi, *f);
    }
    if (all_defined && hi - lo <= cfg.complement_tol) {
      res.status = BeliefStatus::Defined;
      res.value = (lo + hi) / 2;
      attach_oracle(&res, phi, kb, vocab, cfg);
      return res;
    }
    res.status = BeliefStatus::NonRobust;
    res.reason =
        "multiple maximum-entropy points at tau=0: the answer depends on how the tolerances go "
        "to zero";
    if (all_defined) res.interval = {lo, hi};
    res.probes = probe_tau(phi, kb, vocab, cfg);
    attach_oracle(&res, phi, kb, vocab, cfg);
    return res;
  }

  const VectorXd& v = ep.strict.maxima[0].u;
  double fpsi = f_formula(qc.psi_x, v, vocab);
  if (fpsi <= cfg.constraint.zero_threshold) {
    res.status = BeliefStatus::MaxEntInapplicable;
    res.reason =
        "F_[psi] is zero at the maximum-entropy point; the point does not determine the answer "
        "(direct inference bounds attached)";
    direct_inference_fallback(&res, qc, g, vocab, cfg);
    attach_oracle(&res, phi, kb, vocab, cfg);
    return res;
  }
  res.status = BeliefStatus::Defined;
  res.value = f_formula(f_and(qc.phi_x, qc.psi_x), v, vocab) / fpsi;
  attach_oracle(&res, phi, kb, vocab, cfg);
  return res;
}

BeliefResult believe_general(const FormulaPtr& phi, const std::vector<FormulaPtr>& kb,
                             const Vocabulary& vocab, const BeliefConfig& cfg) {
  BeliefResult res;
  QueryClass qc = classify(phi, kb, vocab);
  res.query_kind = qc.kind == QueryKind::UnaryQuantified ? "unary-quantified" : "separable";
  if (qc.kind != QueryKind::Separable && qc.kind != QueryKind::UnaryQuantified &&
      qc.kind != QueryKind::Simple) {
    res.status = BeliefStatus::Unsupported;
    res.reason = qc.reason;
    return res;
  }
  if (qc.kind == QueryKind::Simple) res.query_kind = "simple";
  FormulaPtr kbAll = f_and_all(kb);
  CanonicalForm cf = to_canonical(kbAll, vocab);
  ConstraintFormula g = gamma(cf);

  if (cfg.fixed_tau) {
    ProbeRow row = per_tau_value(phi, cf, g, vocab, *cfg.fixed_tau, cfg);
    InstConstraintFormula inst = instantiate(g, *cfg.fixed_tau);
    MaxEntResult me = maximize(region_from_instantiated(inst), cfg.constraint.maxent);
    if (me.feasible) fill_maxent_fields(&res, me);
    if (row.value) {
      res.status = BeliefStatus::Defined;
      res.value = row.value;
    } else {
      res.status = row.status == "infeasible" ? BeliefStatus::Unsupported
                                              : BeliefStatus::NonRobust;
      res.reason = "probe status: " + row.status;
    }
    attach_oracle(&res, phi, kb, vocab, cfg);
    return res;
  }

  EssentialPositivity ep = is_essentially_positive(g, cfg.constraint);
  if (!ep.strict.feasible) {
    res.status = BeliefStatus::Unsupported;
    res.reason = "the constraint system is unsatisfiable at tau=0";
    return res;
  }
  res.essentially_positive = ep.essentially_positive;
  fill_maxent_fields(&res, ep.strict);
  if (!ep.essentially_positive) {
    res.status = BeliefStatus::NonRobust;
    res.reason = "essential positivity fails";
    res.probes = probe_tau(phi, kb, vocab, cfg);
    attach_oracle(&res, phi, kb, vocab, cfg);
    return res;
  }
  if (ep.strict.maxima.size() > 1) {
    res.status = BeliefStatus::NonRobust;
    res.reason = "multiple maximum-entropy points at tau=0";
    res.probes = probe_tau(phi, kb, vocab, cfg);
    attach_oracle(&res, phi, kb, vocab, cfg);
    return res;
  }
  const VectorXd& v = ep.strict.maxima[0].u;

  // stability for a common sigma* across the probe tolerances
  std::set<int> idx = tolerance_indices(kbAll);
  std::optional<SizeDescription> sigma_star;
  for (auto& tp : cfg.tau_probes) {
    StabilityCheck sc = check_stability(kbAll, vocab, uniform_tau(idx, tp), cfg.constraint);
    if (!sc.stable) {
      res.status = BeliefStatus::NonRobust;
      res.reason = "stability fails at tau=" + tp.to_string() + ": " + sc.reason;
      res.probes = probe_tau(phi, kb, vocab, cfg);
      attach_oracle(&res, phi, kb, vocab, cfg);
      return res;
    }
    if (!sigma_star) {
      sigma_star = sc.sigma_star;
    } else if (!(*sigma_star == *sc.sigma_star)) {
      res.status = BeliefStatus::NonRobust;
      res.reason = "no single size description is stable across the probe tolerances";
      res.probes = probe_tau(phi, kb, vocab, cfg);
      attach_oracle(&res, phi, kb, vocab, cfg);
      return res;
    }
  }
  res.stable = true;

  DescriptionOptions dopt;
  dopt.force_distinct = true;  // chi^{!=}: the unique-names weighting
  dopt.with_relations = mentions_relation(phi, vocab);
  std::vector<CompleteDescription> descs = enumerate_descriptions(qc.Z, vocab, qc.psi, dopt);

  double num = 0, den = 0;
  for (auto& d : descs) {
    double w = f_description(d, v);
    if (w <= 0) continue;
    int val;
    try {
      val = zero_one_limit(phi, *sigma_star, d, vocab);
    } catch (const ZeroOneUnsupported& e) {
      res.status = BeliefStatus::Unsupported;
      res.reason = e.what();
      return res;
    }
    num += val * w;
    den += w;
  }
  if (den <= 0) {
    res.status = BeliefStatus::MaxEntInapplicable;
    res.reason = "every description consistent with psi has zero weight at the maximum-entropy "
                 "point";
    attach_oracle(&res, phi, kb, vocab, cfg);
    return res;
  }
  res.status = BeliefStatus::Defined;
  res.value = num / den;
  attach_oracle(&res, phi, kb, vocab, cfg);
  return res;
}

BeliefResult believe(const FormulaPtr& phi, const std::vector<FormulaPtr>& kb,
                     const Vocabulary& vocab, const BeliefConfig& cfg) {
  QueryClass qc = classify(phi, kb, vocab);
  switch (qc.kind) {
    case QueryKind::Simple:
      return believe_simple(phi, kb, vocab, cfg);
    case QueryKind::Separable:
    case QueryKind::UnaryQuantified:
      return believe_general(phi, kb, vocab, cfg);
    case QueryKind::Unsupported: {
      BeliefResult res;
      res.query_kind = "unsupported";
      if (has_proportion(phi)) {
        res.status = BeliefStatus::Unsupported;
        res.reason = qc.reason;
        return res;
      }
      // Not separable: refuse a point answer; run the probe grid as evidence.
      res.status = BeliefStatus::NonRobust;
      res.reason = qc.reason;
      res.probes = probe_tau(phi, kb, vocab, cfg);
      attach_oracle(&res, phi, kb, vocab, cfg);
      return res;
    }
  }
  BeliefResult res;
  res.status = BeliefStatus::Unsupported;
  return res;
}

}  // namespace rw
