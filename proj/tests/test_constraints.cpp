#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "rw/canonical.hpp"
#include "rw/constraint_ops.hpp"
#include "rw/counting.hpp"
#include "rw/gamma.hpp"
#include "rw/maxent.hpp"
#include "rw/parser.hpp"
#include "rw/translate.hpp"

using namespace rw;

namespace {

ConstraintFormula gamma_of(const std::string& text, SourceFile* file_out = nullptr) {
  SourceFile file = parse(text);
  if (file_out) *file_out = file;
  return gamma(to_canonical(file.kb_conjunction(), file.vocab));
}

ToleranceVector tau_uniform(const ConstraintFormula& g, const Rational& r) {
  ToleranceVector t;
  for (auto& cell : g.cells)
    for (auto& c : cell.constraints)
      if (c.tol_index > 0) t.values[c.tol_index] = r;
  return t;
}

const char* kHepatitisText = R"(vocab { pred Hepatitis, Jaundice, BlueEyed; const Eric; }
kb {
  forall x (Hepatitis(x) -> Jaundice(x));
  ||Hepatitis(x) | Jaundice(x)||_{x} ~=[1] 0.8;
  ||BlueEyed(x)||_{x} ~=[2] 0.25;
  Jaundice(Eric);
})";

}  // namespace

TEST_CASE("gamma of the hepatitis canonical form matches the displayed system") {
  ConstraintFormula g = gamma_of(kHepatitisText);
  // four disjuncts (one atom literal per jaundice atom for Eric)
  REQUIRE(g.cells.size() == 4);
  std::string sym = print_symbolic(g);
  // u3 = u4 = 0 and the two-sided 0.8 bounds in the factored style
  CHECK(sym.find("u3 = 0") != std::string::npos);
  CHECK(sym.find("u4 = 0") != std::string::npos);
  CHECK(sym.find("u1 + u2 <= (4/5 + e1)*(u1 + u2 + u5 + u6)") != std::string::npos);
  CHECK(sym.find("u1 + u3 + u5 + u7 <= 1/4 + e2") != std::string::npos);
  // the constant literal contributes u_i > 0 per cell
  CHECK(sym.find("u1 > 0") != std::string::npos);
  CHECK(sym.find("u6 > 0") != std::string::npos);
}

TEST_CASE("gamma of the one-third-cap knowledge base") {
  ConstraintFormula g = gamma_of(
      "vocab { pred P1, P2; } kb { forall x P1(x) & 3 * ||P1(x) & P2(x)||_{x} <~[1] 1; }");
  REQUIRE(g.cells.size() == 1);
  std::string sym = print_symbolic(g);
  CHECK(sym.find("u3 = 0") != std::string::npos);
  CHECK(sym.find("u4 = 0") != std::string::npos);
  CHECK(sym.find("3*u1 <= 1 + e1") != std::string::npos);
  // instantiated at tau=1/10: u1 <= 1/3 + tau/3 on the simplex
  ToleranceVector tau;
  tau.values[1] = Rational(1, 10);
  RegionDescriptor region = solution_space(g, tau);
  MaxEntResult me = maximize(region);
  REQUIRE(me.feasible);
  CHECK(me.maxima[0].u(0) == doctest::Approx((1 + 0.1) / 3).epsilon(1e-7));
}

TEST_CASE("A2(c) alone becomes u2 > 0") {
  ConstraintFormula g = gamma_of("vocab { pred P; const c; } kb { !P(c); }");
  REQUIRE(g.cells.size() == 1);
  REQUIRE(g.cells[0].constraints.size() == 1);
  CHECK(g.cells[0].constraints[0].kind == SymbolicConstraint::Kind::GtZero);
  CHECK(print_symbolic(g).find("u2 > 0") != std::string::npos);
}

TEST_CASE("gamma_weakened keeps the point a negated comparison excluded") {
  SourceFile file;
  ConstraintFormula g = gamma_of(
      R"(vocab { pred P; const c; }
kb { (||P(x)||_{x} ~=[1] 0.3 | ||P(x)||_{x} ~=[2] 0.4) & !(||P(x)||_{x} ~=[3] 0.4); })",
      &file);
  // strict system at tau=0: only u1 = 0.3 survives
  ToleranceVector zero;
  for (int i : {1, 2, 3}) zero.values[i] = Rational(0);
  RegionDescriptor strict = region_from_instantiated(instantiate(g, zero));
  MaxEntResult sm = maximize(strict);
  REQUIRE(sm.feasible);
  REQUIRE(sm.maxima.size() == 1);
  CHECK(sm.maxima[0].u(0) == doctest::Approx(0.3).epsilon(1e-8));
  // weakened system also admits u1 = 0.4, which has higher entropy
  RegionDescriptor weak = region_from_instantiated(gamma_weakened(g));
  MaxEntResult wm = maximize(weak);
  REQUIRE(wm.feasible);
  CHECK(wm.maxima[0].u(0) == doctest::Approx(0.4).epsilon(1e-8));
  // hence not essentially positive
  EssentialPositivity ep = is_essentially_positive(g);
  CHECK_FALSE(ep.essentially_positive);
}

TEST_CASE("weakening turns strict constraints into closed ones") {
  ConstraintFormula g = gamma_of("vocab { pred P; const c; } kb { P(c); }");
  InstConstraintFormula weak = gamma_weakened(g);
  REQUIRE(weak.cells.size() == 1);
  CHECK(weak.cells[0].constraints[0].rel == Rel::GE);
  // a system with no strict constraints is unchanged by weakening
  ConstraintFormula g2 = gamma_of("vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.3; }");
  InstConstraintFormula w2 = gamma_weakened(g2);
  CHECK(w2.cells[0].constraints[0].rel == Rel::LE);
}

TEST_CASE("conjunctive knowledge bases without negated comparisons are essentially positive") {
  for (const char* text : {
           "vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.3; }",
           "vocab { pred P1, P2; } kb { ||P1(x) | P2(x)||_{x} ~=[1] 0.8; exists x P2(x); }",
       }) {
    ConstraintFormula g = gamma_of(text);
    EssentialPositivity ep = is_essentially_positive(g);
    CHECK(ep.essentially_positive);
  }
  ConstraintFormula g = gamma_of("vocab { pred P; } kb { }");
  CHECK(is_essentially_positive(g).essentially_positive);
}

TEST_CASE("solution_space cells and metadata") {
  ConstraintFormula g = gamma_of(
      "vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.3 | ||P(x)||_{x} >~[2] 0.7; }");
  ToleranceVector zero;
  zero.values[1] = Rational(0);
  zero.values[2] = Rational(0);
  RegionDescriptor region = solution_space(g, zero);
  REQUIRE(region.cells.size() == 2);
  CHECK(region.all_linear());
  // KB = true covers the whole simplex
  ConstraintFormula g2 = gamma_of("vocab { pred P1, P2; } kb { }");
  RegionDescriptor r2 = solution_space(g2, {});
  REQUIRE(r2.cells.size() == 1);
  MaxEntResult me = maximize(r2);
  CHECK(me.entropy == doctest::Approx(std::log(4)).epsilon(1e-9));
}

TEST_CASE("size_description_of applies the zero threshold") {
  VectorXd u(2);
  u << 0.0, 1.0;
  SizeDescription sd = size_description_of(u);
  CHECK_FALSE(sd.exists[0]);
  CHECK(sd.exists[1]);
  VectorXd w(2);
  w << 1e-3, 1.0 - 1e-3;
  SizeDescription sw = size_description_of(w);
  CHECK(sw.exists[0]);
  CHECK(sw.exists[1]);
  VectorXd uni(4);
  uni << 0.25, 0.25, 0.25, 0.25;
  for (bool b : size_description_of(uni).exists) CHECK(b);
}

TEST_CASE("safety: the almost-no-P knowledge base is safe at tau > 0") {
  SourceFile file = parse("vocab { pred P; const c; } kb { ||P(x)||_{x} ~=[1] 0; }");
  ToleranceVector tau;
  tau.values[1] = Rational(1, 100);
  // maxent point at tau is (tau, 1 - tau)
  VectorXd v(2);
  v << 0.01, 0.99;
  SafetyCheck sc = is_safe(v, file.kb_conjunction(), file.vocab, tau);
  CHECK(sc.safe);
  CHECK(sc.distance > 1e-3);
}

TEST_CASE("safety: forall x !P is safe because the complement space is empty") {
  SourceFile file = parse("vocab { pred P; const c; } kb { forall x !P(x); }");
  VectorXd v(2);
  v << 0.0, 1.0;
  SafetyCheck sc = is_safe(v, file.kb_conjunction(), file.vocab, {});
  CHECK(sc.safe);
  CHECK(std::isinf(sc.distance));
}

TEST_CASE("safety fails when the complement space touches the point") {
  // KB admits both u1 = 0 and u1 > 0 worlds near (0,1): !sigma(v) keeps u1>0
  // points arbitrarily close to v, so v is unsafe.
  SourceFile file = parse("vocab { pred P; const c; } kb { ||P(x)||_{x} <~[1] 0.5; }");
  VectorXd v(2);
  v << 0.0, 1.0;
  ToleranceVector tau;
  tau.values[1] = Rational(1, 10);
  SafetyCheck sc = is_safe(v, file.kb_conjunction(), file.vocab, tau);
  CHECK_FALSE(sc.safe);
  CHECK(sc.distance <= 1e-6);
}

TEST_CASE("stability: almost-no-P at tau > 0 is stable with both atoms inhabited") {
  SourceFile file = parse("vocab { pred P; const c; } kb { ||P(x)||_{x} ~=[1] 0; }");
  ToleranceVector tau;
  tau.values[1] = Rational(1, 100);
  StabilityCheck sc = check_stability(file.kb_conjunction(), file.vocab, tau);
  REQUIRE(sc.stable);
  REQUIRE(sc.sigma_star);
  CHECK(sc.sigma_star->exists == std::vector<bool>{true, true});
}

TEST_CASE("stability: forall x !P is stable for the not-exists pattern") {
  SourceFile file = parse("vocab { pred P; const c; } kb { forall x !P(x); }");
  StabilityCheck sc = check_stability(file.kb_conjunction(), file.vocab, {});
  REQUIRE(sc.stable);
  CHECK(sc.sigma_star->exists == std::vector<bool>{false, true});
}

TEST_CASE("stability: KB = true is stable with every atom inhabited") {
  SourceFile file = parse("vocab { pred P1, P2; } kb { }");
  StabilityCheck sc = check_stability(file.kb_conjunction(), file.vocab, {});
  REQUIRE(sc.stable);
  CHECK(sc.sigma_star->exists == std::vector<bool>{true, true, true, true});
}

TEST_CASE("split interval at equal tau: two maxima sharing a size description") {
  SourceFile file = parse(
      "vocab { pred P; const c; } kb { ||P(x)||_{x} <~[1] 0.3 | ||P(x)||_{x} >~[2] 0.7; }");
  ToleranceVector tau;
  tau.values[1] = Rational(1, 50);
  tau.values[2] = Rational(1, 50);
  StabilityCheck sc = check_stability(file.kb_conjunction(), file.vocab, tau);
  // stable-but-multiple: the flag pair is surfaced separately
  CHECK(sc.stable);
  CHECK(sc.multiple_maxima);
}

TEST_CASE("eventual consistency diagnostics") {
  SourceFile ok = parse("vocab { pred P; } kb { ||P(x)||_{x} ~=[1] 0.3; }");
  EventualConsistency ec = check_eventual_consistency(
      ok.kb_conjunction(), ok.vocab, {Rational(1, 10), Rational(1, 100)});
  CHECK(ec.feasible_at_all_probes);
  REQUIRE(ec.lattice_N);
  CHECK(*ec.lattice_N == 10);  // u1 = 3/10 at N = 10
  REQUIRE(ec.lattice_point);
  CHECK((*ec.lattice_point)[0] == Rational(3, 10));

  SourceFile bad = parse(
      "vocab { pred P; } kb { ||P(x)||_{x} ~=[1] 0.3 & ||P(x)||_{x} ~=[2] 0.7; }");
  EventualConsistency ec2 = check_eventual_consistency(
      bad.kb_conjunction(), bad.vocab, {Rational(1, 100), Rational(1, 1000)});
  CHECK_FALSE(ec2.feasible_at_all_probes);

  SourceFile contradiction = parse("vocab { pred P; } kb { false; }");
  EventualConsistency ec3 = check_eventual_consistency(
      contradiction.kb_conjunction(), contradiction.vocab, {Rational(1, 10)});
  CHECK_FALSE(ec3.feasible_at_all_probes);
}

TEST_CASE("realizability: lattice points of Sol admit constructed worlds") {
  SourceFile file = parse("vocab { pred P; const c; } kb { ||P(x)||_{x} <~[1] 0.3 & P(c); }");
  CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
  ConstraintFormula g = gamma(cf);
  ToleranceVector tau;
  tau.values[1] = Rational(1, 20);
  InstConstraintFormula inst = instantiate(g, tau);
  FormulaPtr kb_exact = substitute_tau(to_exact(file.kb_conjunction()), tau);
  int built = 0;
  for (int N = 1; N <= 12; ++N) {
    for (int r = 0; r <= N; ++r) {
      std::vector<Rational> u = {Rational(r, N), Rational(N - r, N)};
      for (size_t j = 0; j < inst.cells.size(); ++j) {
        if (!cell_satisfied(inst.cells[j], u)) continue;
        World w = world_from_lattice_point(u, N, cf.disjuncts[j], file.vocab);
        Valuation val;
        CHECK(eval_exact(w, val, kb_exact, file.vocab));
        CHECK(w.pi(file.vocab) == u);
        ++built;
      }
    }
  }
  CHECK(built > 0);
}

TEST_CASE("soundness: satisfying worlds project into Gamma(KB[tau])") {
  // exhaustive over random KBs, k <= 2, one constant, N <= 4
  Vocabulary v;
  v.unary_predicates = {"P1", "P2"};
  v.constants = {"c"};
  rwtest::Rng rng(555);
  int worlds_checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    FormulaPtr kb = rwtest::gen_kb_formula(rng, v, 2);
    CanonicalForm cf;
    try {
      cf = to_canonical(kb, v);
    } catch (const CanonicalError&) {
      continue;
    }
    ConstraintFormula g = gamma(cf);
    std::set<int> idx;
    collect_tolerance_indices(kb, &idx);
    ToleranceVector tau;
    for (int i : idx) tau.values[i] = Rational(1, 10);
    InstConstraintFormula inst = instantiate(g, tau);
    FormulaPtr kb_exact = substitute_tau(to_exact(kb), tau);
    for (int N = 1; N <= 4; ++N) {
      World w;
      w.N = N;
      w.atom_of.assign(N, 0);
      for (;;) {
        for (int cpos = 0; cpos < N; ++cpos) {
          w.constant_denotation["c"] = cpos;
          Valuation val;
          if (eval_exact(w, val, kb_exact, v)) {
            CHECK(formula_satisfied(inst, w.pi(v)));
            ++worlds_checked;
          }
        }
        int i = 0;
        while (i < N) {
          if (++w.atom_of[i] < v.atom_count()) break;
          w.atom_of[i] = 0;
          ++i;
        }
        if (i == N) break;
      }
    }
  }
  CHECK(worlds_checked > 50);
}

TEST_CASE("maxent of S^tau converges to maxent of S^0 monotonically") {
  for (const char* text : {
           "vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.3; }",
           kHepatitisText,
       }) {
    SourceFile file = parse(text);
    ConstraintFormula g = gamma(to_canonical(file.kb_conjunction(), file.vocab));
    ToleranceVector zero = tau_uniform(g, Rational(0));
    MaxEntResult base = maximize(region_from_instantiated(instantiate(g, zero)));
    REQUIRE(base.feasible);
    const VectorXd v0 = base.maxima[0].u;
    double prev = 1e9;
    for (auto& t : {Rational(1, 10), Rational(1, 100), Rational(1, 1000)}) {
      MaxEntResult me =
          maximize(region_from_instantiated(instantiate(g, tau_uniform(g, t))));
      REQUIRE(me.feasible);
      double dist = (me.maxima[0].u - v0).norm();
      CHECK(dist <= prev + 1e-9);
      prev = dist;
    }
    CHECK(prev < 2e-2);
  }
}
