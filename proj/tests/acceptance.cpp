// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "gen.hpp"
#include "rw/belief.hpp"
#include "rw/canonical.hpp"
#include "rw/cli.hpp"
#include "rw/counting.hpp"
#include "rw/defaults.hpp"
#include "rw/gamma.hpp"
#include "rw/nilsson.hpp"
#include "rw/parser.hpp"
#include "rw/translate.hpp"

using namespace rw;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail = "") {
  std::printf("criterion %2d: %s  %s%s%s\n", id, pass ? "PASS" : "FAIL", name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const char* kHepatitisText = R"(vocab { pred Hepatitis, Jaundice, BlueEyed; const Eric; }
kb {
  forall x (Hepatitis(x) -> Jaundice(x));
  ||Hepatitis(x) | Jaundice(x)||_{x} ~=[1] 0.8;
  ||BlueEyed(x)||_{x} ~=[2] 0.25;
  Jaundice(Eric);
})";

ToleranceVector tau_uniform_for(const FormulaPtr& f, const Rational& r) {
  std::set<int> idx;
  collect_tolerance_indices(f, &idx);
  ToleranceVector t;
  for (int i : idx) t.values[i] = r;
  return t;
}

// Satisfying world sets of two formulas agree for every world of size <= maxN.
bool same_world_sets(const FormulaPtr& a, const FormulaPtr& b, const Vocabulary& vocab, int maxN,
                     const ToleranceVector& tau, long long* worlds_seen,
                     const std::function<void(const World&, bool)>& on_world = nullptr) {
  FormulaPtr ea = substitute_tau(to_exact(a), tau);
  FormulaPtr eb = substitute_tau(to_exact(b), tau);
  int K = vocab.atom_count();
  int C = static_cast<int>(vocab.constants.size());
  for (int N = 1; N <= maxN; ++N) {
    World w;
    w.N = N;
    w.atom_of.assign(N, 0);
    for (;;) {
      std::vector<int> cpos(C, 0);
      for (;;) {
        for (int i = 0; i < C; ++i) w.constant_denotation[vocab.constants[i]] = cpos[i];
        Valuation v;
        bool sa = eval_exact(w, v, ea, vocab);
        if (sa != eval_exact(w, v, eb, vocab)) return false;
        if (on_world) on_world(w, sa);
        if (worlds_seen) ++*worlds_seen;
        int i = 0;
        while (i < C) {
          if (++cpos[i] < N) break;
          cpos[i] = 0;
          ++i;
        }
        if (i == C) break;
      }
      int i = 0;
      while (i < N) {
        if (++w.atom_of[i] < K) break;
        w.atom_of[i] = 0;
        ++i;
      }
      if (i == N) break;
    }
  }
  return true;
}

BeliefResult run_query(const std::string& text, const std::string& query) {
  SourceFile file = parse(text);
  return believe(parse_formula(query, file.vocab), file.kb, file.vocab, {});
}

// --- criteria ---

void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  SourceFile file = parse(kHepatitisText);
  CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
  ToleranceVector zero;
  zero.values[1] = Rational(0);
  zero.values[2] = Rational(0);
  MaxEntResult me = maximize(solution_space(gamma(cf), zero));
  double g = std::pow(2.0, 1.6), d = 5.0 + g;
  std::vector<double> expect = {1 / d, 3 / d, 0, 0, 1 / (4 * d), 3 / (4 * d), g / (4 * d),
                                3 * g / (4 * d)};
  bool ok = me.feasible && me.maxima.size() == 1;
  if (ok)
    for (int i = 0; i < 8; ++i) ok = ok && std::abs(me.maxima[0].u(i) - expect[i]) <= 1e-6;
  BeliefResult hep = run_query(kHepatitisText, "Hepatitis(Eric)");
  BeliefResult blue = run_query(kHepatitisText, "BlueEyed(Eric)");
  BeliefResult both = run_query(kHepatitisText, "BlueEyed(Eric) & Hepatitis(Eric)");
  ok = ok && hep.value && std::abs(*hep.value - 0.8) <= 1e-6;
  ok = ok && blue.value && std::abs(*blue.value - 0.25) <= 1e-6;
  ok = ok && both.value && std::abs(*both.value - 0.2) <= 1e-6;
  double dt = seconds_since(t0);
  ok = ok && dt < 1.0;
  std::ostringstream detail;
  detail << "closed-form point and 0.8/0.25/0.2 within 1e-6, " << dt << " s";
  report(1, "hepatitis golden values", ok, detail.str());
}

void criterion2() {
  BeliefResult r = run_query("vocab { pred P; const c; } kb { ||P(x)||_{x} <~[1] 0.3; }", "P(c)");
  bool ok = r.status == BeliefStatus::Defined && r.value && std::abs(*r.value - 0.3) <= 1e-6 &&
            r.essentially_positive;
  report(2, "capped-predicate golden value", ok,
         r.value ? "value " + std::to_string(*r.value) : "undefined");
}

void criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  SourceFile file = parse("vocab { pred P; const c; } kb { ||P(x)||_{x} <~[1] 0.3; }");
  ToleranceVector tau;
  tau.values[1] = Rational(1, 20);
  FormulaPtr q = parse_formula("P(c)", file.vocab);
  CountOptions opt;
  opt.backend = CountOptions::Backend::Aggregate;
  bool ok = true;
  double prev_gap = 1.0;
  double final_value = 0;
  for (int N : {50, 100, 200}) {
    auto pr = pr_n(file.vocab, N, tau, q, file.kb_conjunction(), opt);
    if (!pr) {
      ok = false;
      break;
    }
    double gap = std::abs(pr->to_double() - 0.35);
    ok = ok && gap < prev_gap;  // monotone shrink toward 0.35
    prev_gap = gap;
    final_value = pr->to_double();
  }
  ok = ok && prev_gap <= 0.02;
  double dt = seconds_since(t0);
  ok = ok && dt < 10.0;
  std::ostringstream detail;
  detail << "Pr_200 = " << final_value << ", gap " << prev_gap << ", " << dt << " s";
  report(3, "oracle convergence toward 0.35 at desk scale", ok, detail.str());
}

// Shared corpus for criteria 4 and 6.
struct CorpusResult {
  int verified = 0;
  long long worlds = 0;
  bool equivalence_ok = true;
  bool soundness_ok = true;
  double dt4 = 0;
};

CorpusResult run_corpus() {
  CorpusResult out;
  auto t0 = std::chrono::steady_clock::now();
  Vocabulary v;
  v.unary_predicates = {"P1", "P2"};
  v.constants = {"c"};
  rwtest::Rng rng(424242);
  while (out.verified < 100) {
    FormulaPtr kb = rwtest::gen_kb_formula(rng, v, 3);
    CanonicalForm cf;
    try {
      cf = to_canonical(kb, v);
    } catch (const CanonicalError&) {
      continue;  // over the configured size caps: replace with the next draw
    }
    FormulaPtr canon = canonical_to_formula(cf, v);
    ConstraintFormula g = gamma(cf);
    for (auto& tv : {Rational(1, 10), Rational(3, 10)}) {
      ToleranceVector tau = tau_uniform_for(kb, tv);
      InstConstraintFormula inst = instantiate(g, tau);
      bool same = same_world_sets(kb, canon, v, 4, tau, &out.worlds,
                                  [&](const World& w, bool sat) {
                                    if (sat && !formula_satisfied(inst, w.pi(v)))
                                      out.soundness_ok = false;
                                  });
      if (!same) out.equivalence_ok = false;
    }
    ++out.verified;
  }
  out.dt4 = seconds_since(t0);
  return out;
}

void criterion7() {
  rwtest::Rng rng(777);
  int agreements = 0;
  bool ok = true;
  int produced = 0;
  while (produced < 20) {
    int k = 1 + rng.pick(3);
    std::vector<std::string> preds;
    for (int i = 0; i < k; ++i) preds.push_back("Q" + std::to_string(i));
    PropConstraintSet s;
    s.vocab.unary_predicates = preds;
    int ncons = 1 + rng.pick(2);
    for (int i = 0; i < ncons; ++i) {
      FormulaPtr beta = rwtest::gen_ep(rng, s.vocab, "x", 1);
      FormulaPtr beta_prime = rng.chance(40) ? rwtest::gen_ep(rng, s.vocab, "x", 1) : nullptr;
      Rational bound(1 + rng.pick(8), 10);
      PropConstraint::Kind kind = rng.chance(50)   ? PropConstraint::Kind::Le
                                  : rng.chance(50) ? PropConstraint::Kind::Ge
                                                   : PropConstraint::Kind::Eq;
      s.constraints.push_back({beta, beta_prime, kind, bound, bound});
    }
    FormulaPtr qbeta = rwtest::gen_ep(rng, s.vocab, "x", 1);
    FormulaPtr qprime = rng.chance(50) ? rwtest::gen_ep(rng, s.vocab, "x", 1) : nullptr;
    ++produced;
    BeliefResult rw_route = nilsson_believe(s, qbeta, qprime, {});
    DirectMaxEnt direct = nilsson_direct(s, qbeta, qprime, {});
    if (rw_route.status != BeliefStatus::Defined || !direct.query_value) continue;
    if (std::abs(*rw_route.value - *direct.query_value) > 1e-6) ok = false;
    ++agreements;
  }
  std::ostringstream detail;
  detail << agreements << "/20 defined cases agreed within 1e-6";
  report(7, "two-route equivalence for propositional constraints", ok && agreements >= 10,
         detail.str());
}

void criterion8() {
  auto check = [](const std::string& rules_text, const std::string& query) {
    DefaultRule q;
    DefaultRuleSet rules = parse_rules_with_query(rules_text, query, &q);
    MEPlausibleResult r = me_plausible(rules, q, {});
    if (r.verdict != MEVerdict::True) return false;
    double prev = 0;
    for (auto& row : r.trace) {
      if (!row.value || *row.value < prev - 1e-9) return false;
      prev = *row.value;
    }
    return prev > 0.99;  // monotone toward 1
  };
  bool ok = check("Penguin -> Bird; Penguin -> !Fly; Bird -> Fly;", "Penguin -> !Fly");
  ok = ok && check("Penguin -> Bird; Penguin -> !Fly; Bird -> Fly;", "Bird -> Fly");
  ok = ok && check("Bird -> Fly;", "Bird & Yellow -> Fly");
  report(8, "default entailment behavior class", ok,
         "specificity and irrelevance endorsed with monotone traces");
}

void criterion9() {
  BeliefResult e43 = run_query(R"(vocab { pred P; const c; }
kb { (||P(x)||_{x} ~=[1] 0.3 | ||P(x)||_{x} ~=[2] 0.4) & !(||P(x)||_{x} ~=[3] 0.4); })",
                               "P(c)");
  bool ok43 = e43.status == BeliefStatus::NonRobust && !e43.essentially_positive;

  BeliefResult e416 = run_query(
      "vocab { pred P; const c; } kb { ||P(x)||_{x} <~[1] 0.3 | ||P(x)||_{x} >~[2] 0.7; }",
      "P(c)");
  bool ok416 = e416.status == BeliefStatus::NonRobust && !e416.unique;

  BeliefResult e419 = run_query(R"(vocab { pred P; const c; }
kb { (||P(x)||_{x} ~=[1] 0.3 & P(c)) | (||P(x)||_{x} ~=[2] 0.3 & !P(c)); })",
                                "P(c)");
  bool ok419 = e419.status == BeliefStatus::NonRobust && e419.probes.spread > 0.5;

  BeliefResult e420 = run_query("vocab { pred P; } kb { ||P(x)||_{x} ~=[1] 0.3; }",
                                "||P(x)||_{x} ~=[2] 0.3");
  bool ok420 = e420.status == BeliefStatus::Unsupported;

  BeliefResult kb1 = run_query("vocab { pred P; const c; } kb { forall x !P(x); }",
                               "exists x P(x)");
  BeliefResult kb2 = run_query("vocab { pred P; const c; } kb { ||P(x)||_{x} ~=[1] 0; }",
                               "exists x P(x)");
  bool ok421 = kb1.value && std::abs(*kb1.value - 0.0) < 1e-12 && kb2.value &&
               std::abs(*kb2.value - 1.0) < 1e-12;

  bool ok = ok43 && ok416 && ok419 && ok420 && ok421;
  std::ostringstream detail;
  detail << "clashing:" << (ok43 ? "nonrobust" : "WRONG")
         << " split:" << (ok416 ? "nonrobust" : "WRONG")
         << " entangled:" << (ok419 ? "nonrobust" : "WRONG")
         << " statistical:" << (ok420 ? "unsupported" : "WRONG")
         << " empty-extension:" << (ok421 ? "0/1" : "WRONG");
  report(9, "nonrobustness detection battery", ok, detail.str());
}

void criterion10() {
  bool ok = true;
  std::string why;

  // round-trip parsing property
  {
    Vocabulary v;
    v.unary_predicates = {"P1", "P2"};
    v.constants = {"c"};
    rwtest::Rng rng(99);
    for (int i = 0; i < 100 && ok; ++i) {
      FormulaPtr f = rwtest::gen_kb_formula(rng, v, 3);
      if (!equal(f, parse_formula(print(f), v))) {
        ok = false;
        why = "round-trip";
      }
    }
  }

  // complementarity on the hepatitis queries
  for (const char* q : {"Hepatitis(Eric)", "BlueEyed(Eric)"}) {
    BeliefResult a = run_query(kHepatitisText, q);
    BeliefResult b = run_query(kHepatitisText, std::string("!(") + q + ")");
    if (!a.value || !b.value || std::abs(*a.value + *b.value - 1.0) > 1e-9) {
      ok = false;
      why = "complementarity";
    }
  }

  // unique-names oracle value 1 - 1/N
  {
    Vocabulary v;
    v.unary_predicates = {"P"};
    v.constants = {"c", "d"};
    FormulaPtr neq = f_not(f_term_eq(Term{true, "c"}, Term{true, "d"}));
    for (int N : {2, 4, 8}) {
      auto r = pr_n(v, N, {}, neq, f_true(), {});
      if (!r || *r != Rational(N - 1, N)) {
        ok = false;
        why = "unique-names";
      }
    }
  }

  // KKT + feasible-perturbation check at the hepatitis maximum
  {
    SourceFile file = parse(kHepatitisText);
    CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
    ToleranceVector zero;
    zero.values[1] = Rational(0);
    zero.values[2] = Rational(0);
    RegionDescriptor region = solution_space(gamma(cf), zero);
    MaxEntResult me = maximize(region);
    if (!me.feasible || me.kkt_residual > 1e-8) {
      ok = false;
      why = "kkt";
    } else {
      const VectorXd& v = me.maxima[0].u;
      std::uint64_t s = 31337;
      for (int trial = 0; trial < 80; ++trial) {
        VectorXd dvec(8);
        for (int i = 0; i < 8; ++i) {
          s ^= s << 13;
          s ^= s >> 7;
          s ^= s << 17;
          dvec(i) = static_cast<double>(s % 2001) / 1000.0 - 1.0;
        }
        dvec.array() -= dvec.mean();
        if (dvec.norm() < 1e-12) continue;
        dvec *= 1e-4 / dvec.norm();
        VectorXd u = v + dvec;
        bool feasible = u.minCoeff() >= 0;
        if (feasible) {
          InstConstraintFormula inst = instantiate(gamma(cf), zero);
          bool member = false;
          for (auto& cell : inst.cells) {
            bool cok = true;
            for (auto& c : cell.constraints) {
              double val = 0;
              for (auto& [m, coef] : c.poly.mono) {
                double t = coef.to_double();
                for (int id : m) t *= u(id);
                val += t;
              }
              switch (c.rel) {
                case Rel::EQ: cok = cok && std::abs(val) < 1e-12; break;
                case Rel::LE: cok = cok && val <= 0; break;
                case Rel::LT: cok = cok && val < 0; break;
                case Rel::GE: cok = cok && val >= 0; break;
                case Rel::GT: cok = cok && val > 0; break;
              }
            }
            if (cok) member = true;
          }
          feasible = member;
        }
        if (feasible && entropy(u) > me.entropy + 1e-10) {
          ok = false;
          why = "perturbation";
        }
      }
    }
  }

  // tolerance-limit convergence on an essentially positive sample
  {
    SourceFile file = parse(kHepatitisText);
    ConstraintFormula g = gamma(to_canonical(file.kb_conjunction(), file.vocab));
    ToleranceVector zero;
    zero.values[1] = Rational(0);
    zero.values[2] = Rational(0);
    MaxEntResult base = maximize(region_from_instantiated(instantiate(g, zero)));
    double prev = 1e9;
    for (auto& t : {Rational(1, 10), Rational(1, 100), Rational(1, 1000)}) {
      ToleranceVector tau;
      tau.values[1] = t;
      tau.values[2] = t;
      MaxEntResult me = maximize(region_from_instantiated(instantiate(g, tau)));
      if (!me.feasible) {
        ok = false;
        why = "tau-convergence";
        break;
      }
      double dist = (me.maxima[0].u - base.maxima[0].u).norm();
      if (dist > prev + 1e-9) {
        ok = false;
        why = "tau-convergence-monotone";
      }
      prev = dist;
    }
  }

  report(10, "property suite (round-trip, complementarity, unique names, KKT, tau limits)", ok,
         why);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();

  auto t0 = std::chrono::steady_clock::now();
  CorpusResult corpus = run_corpus();
  {
    std::ostringstream detail;
    detail << corpus.verified << " knowledge bases, " << corpus.worlds << " world evaluations, "
           << corpus.dt4 << " s";
    report(4, "canonicalization preserves satisfying world sets",
           corpus.equivalence_ok && corpus.verified == 100 && corpus.dt4 < 120.0, detail.str());
  }

  {  // criterion 5
    Vocabulary v;
    v.unary_predicates = {"P"};
    CountOptions opt;
    opt.want_histogram = true;
    CountReport rep = count_worlds(v, 4, {}, f_true(), opt);
    bool ok = rep.total == BigInt(16);
    const int expect[5] = {1, 4, 6, 4, 1};
    for (int r = 0; r <= 4; ++r) {
      std::vector<Rational> key = {Rational(r, 4), Rational(4 - r, 4)};
      ok = ok && rep.histogram.count(key) && rep.histogram.at(key) == BigInt(expect[r]);
    }
    for (int k = 1; k <= 2 && ok; ++k) {
      for (int nconst = 0; nconst <= 1 && ok; ++nconst) {
        Vocabulary vk;
        for (int i = 0; i < k; ++i) vk.unary_predicates.push_back("Q" + std::to_string(i));
        if (nconst) vk.constants = {"c"};
        for (int N = 1; N <= (k == 2 ? 6 : 8) && ok; ++N) {
          CountOptions o;
          o.want_histogram = true;
          o.backend = CountOptions::Backend::Enumerate;
          CountReport r = count_worlds(vk, N, {}, f_true(), o);
          for (auto& [u, count] : r.histogram)
            if (closed_form_count(u, N, vk) != count) ok = false;
        }
      }
    }
    report(5, "world-counting law and binomial histogram", ok, "exact equality");
  }

  report(6, "constraint-system soundness over the random corpus", corpus.soundness_ok,
         "zero violations across " + std::to_string(corpus.worlds) + " worlds");

  criterion7();
  criterion8();
  criterion9();
  criterion10();

  double total = seconds_since(t0);
  std::printf("acceptance total: %s (%.1f s for criteria 4-10)\n",
              failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT", total);
  return failures == 0 ? 0 : 1;
}
