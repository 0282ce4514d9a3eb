#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rw/counting.hpp"
#include "rw/parser.hpp"
#include "rw/world.hpp"

using namespace rw;

namespace {

Vocabulary vocabP() {
  Vocabulary v;
  v.unary_predicates = {"P"};
  return v;
}

Vocabulary vocabPc() {
  Vocabulary v = vocabP();
  v.constants = {"c"};
  return v;
}

ToleranceVector tau1(const Rational& r) {
  ToleranceVector t;
  t.values[1] = r;
  return t;
}

World world_with(int N, std::vector<int> atoms) {
  World w;
  w.N = N;
  w.atom_of = std::move(atoms);
  return w;
}

}  // namespace

TEST_CASE("proportion term evaluates to the exact fraction") {
  Vocabulary v = vocabP();
  // N=4, P = {1,2}: ||P(x)||_x = 1/2
  World w = world_with(4, {0, 0, 1, 1});
  FormulaPtr f = parse_formula("||P(x)||_{x} ~=[1] 0.5", v);
  Valuation val;
  CHECK(eval(w, val, tau1(Rational(1, 1000)), f, v));
  FormulaPtr g = parse_formula("||P(x)||_{x} ~=[1] 0.4", v);
  CHECK_FALSE(eval(w, val, tau1(Rational(1, 100)), g, v));
}

TEST_CASE("||x = y||_{x,y} denotes exactly 1/N") {
  Vocabulary v = vocabP();
  World w = world_with(4, {0, 1, 0, 1});
  FormulaPtr eq = f_term_eq(Term{false, "x"}, Term{false, "y"});
  PropExprPtr p = p_prop(eq, {"x", "y"});
  Valuation val;
  CHECK(eval_prop_exact(w, val, p, v) == Rational(1, 4));
}

TEST_CASE("conditional proportion over an empty condition is true for any bound") {
  Vocabulary v;
  v.unary_predicates = {"P", "Q"};
  // no Q-elements: ||P | Q||_x ~=[1] 0.9 holds
  World w = world_with(3, {1, 1, 1});  // atom 1 = P & !Q
  FormulaPtr f = parse_formula("||P(x) | Q(x)||_{x} ~=[1] 0.9", v);
  Valuation val;
  CHECK(eval(w, val, tau1(Rational(1, 1000)), f, v));
}

TEST_CASE("counting law: the binomial histogram for one predicate at N=4") {
  Vocabulary v = vocabP();
  CountOptions opt;
  opt.want_histogram = true;
  ToleranceVector tau;
  CountReport rep = count_worlds(v, 4, tau, f_true(), opt);
  CHECK(rep.total == BigInt(16));
  REQUIRE(rep.histogram.size() == 5);
  auto at = [&](int num) {
    std::vector<Rational> key = {Rational(num, 4), Rational(4 - num, 4)};
    return rep.histogram.at(key).to_string();
  };
  CHECK(at(0) == "1");
  CHECK(at(1) == "4");
  CHECK(at(2) == "6");
  CHECK(at(3) == "4");
  CHECK(at(4) == "1");
}

TEST_CASE("adding a constant multiplies the count by N") {
  Vocabulary v = vocabPc();
  ToleranceVector tau;
  CountReport rep = count_worlds(v, 4, tau, f_true(), {});
  CHECK(rep.total == BigInt(64));
}

TEST_CASE("count of exists-P worlds at N=2") {
  Vocabulary v = vocabP();
  ToleranceVector tau;
  FormulaPtr f = f_exists("x", f_pred("P", {Term{false, "x"}}));
  CountOptions opt;
  opt.backend = CountOptions::Backend::Enumerate;
  CHECK(count_worlds(v, 2, tau, f, opt).total == BigInt(3));
}

TEST_CASE("pr_n basics: symmetry and constant placement") {
  Vocabulary v = vocabPc();
  ToleranceVector tau;
  FormulaPtr pc = f_pred("P", {Term{true, "c"}});
  auto r = pr_n(v, 4, tau, pc, f_true(), {});
  REQUIRE(r);
  CHECK(*r == Rational(1, 2));

  // Pr_N(c != c' | true) = 1 - 1/N
  Vocabulary v2 = vocabP();
  v2.constants = {"c", "d"};
  FormulaPtr neq = f_not(f_term_eq(Term{true, "c"}, Term{true, "d"}));
  for (int N : {2, 3, 4}) {
    auto s = pr_n(v2, N, tau, neq, f_true(), {});
    REQUIRE(s);
    CHECK(*s == Rational(N - 1, N));
  }
}

TEST_CASE("pr_n with a proportion bound: the 0.3-cap example at N=4") {
  SourceFile file = parse(R"(vocab { pred P; const c; } kb { ||P(x)||_{x} <~[1] 0.3; })");
  ToleranceVector tau = tau1(Rational(1, 20));
  FormulaPtr pc = f_pred("P", {Term{true, "c"}});
  CountOptions opt;
  opt.backend = CountOptions::Backend::Enumerate;
  auto r = pr_n(file.vocab, 4, tau, pc, file.kb_conjunction(), opt);
  REQUIRE(r);
  CHECK(*r == Rational(1, 5));
  // aggregated backend must agree exactly
  opt.backend = CountOptions::Backend::Aggregate;
  auto r2 = pr_n(file.vocab, 4, tau, pc, file.kb_conjunction(), opt);
  REQUIRE(r2);
  CHECK(*r2 == Rational(1, 5));
}

TEST_CASE("aggregated and enumerated backends agree on random mixed queries") {
  SourceFile file = parse(R"(vocab { pred P, Q; const c, d; }
kb { ||P(x)||_{x} <~[1] 0.6 & exists y (P(y) & Q(y)); })");
  ToleranceVector tau = tau1(Rational(1, 10));
  std::vector<FormulaPtr> queries = {
      parse_formula("P(c)", file.vocab),
      parse_formula("P(c) & !Q(d)", file.vocab),
      parse_formula("c = d", file.vocab),
      parse_formula("exists x (Q(x) & !P(x))", file.vocab),
  };
  for (auto& q : queries) {
    CountOptions en, ag;
    en.backend = CountOptions::Backend::Enumerate;
    ag.backend = CountOptions::Backend::Aggregate;
    for (int N : {2, 3, 4}) {
      auto a = pr_n(file.vocab, N, tau, q, file.kb_conjunction(), en);
      auto b = pr_n(file.vocab, N, tau, q, file.kb_conjunction(), ag);
      REQUIRE(a.has_value() == b.has_value());
      if (a) CHECK(*a == *b);
    }
  }
}

TEST_CASE("pr_sequence on the trivial knowledge base is constant 1/2") {
  Vocabulary v = vocabPc();
  ToleranceVector tau;
  FormulaPtr pc = f_pred("P", {Term{true, "c"}});
  auto seq = pr_sequence(v, {2, 4, 8}, tau, pc, f_true(), {});
  for (auto& p : seq) {
    REQUIRE(p.value);
    CHECK(*p.value == Rational(1, 2));
  }
  CHECK(*seq.back().running_inf == Rational(1, 2));
  CHECK(*seq.back().running_sup == Rational(1, 2));
}

TEST_CASE("pr_sequence approaches 0.35 from below for the capped predicate") {
  SourceFile file = parse(R"(vocab { pred P; const c; } kb { ||P(x)||_{x} <~[1] 0.3; })");
  ToleranceVector tau = tau1(Rational(1, 20));
  FormulaPtr pc = f_pred("P", {Term{true, "c"}});
  CountOptions opt;
  opt.backend = CountOptions::Backend::Aggregate;
  auto seq = pr_sequence(file.vocab, {20, 40, 80}, tau, pc, file.kb_conjunction(), opt);
  double prev = 0;
  for (auto& p : seq) {
    REQUIRE(p.value);
    double x = p.value->to_double();
    CHECK(x < 0.35);
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("unsatisfiable knowledge base leaves pr_n undefined") {
  Vocabulary v = vocabP();
  ToleranceVector tau;
  auto r = pr_n(v, 3, tau, f_true(), f_false(), {});
  CHECK_FALSE(r);
}

TEST_CASE("closed_form_count matches the direct formulas") {
  Vocabulary v = vocabP();
  CHECK(closed_form_count({Rational(1, 2), Rational(1, 2)}, 4, v) == BigInt(6));
  Vocabulary vc = vocabPc();
  CHECK(closed_form_count({Rational(1, 2), Rational(1, 2)}, 4, vc) == BigInt(24));
  Vocabulary vr = vocabP();
  vr.relations = {{"R", 2}};
  // h(4) = 2^16 for one binary relation
  CHECK(closed_form_count({Rational(1, 2), Rational(1, 2)}, 4, vr) ==
        BigInt(6) * BigInt::pow(BigInt(2), 16));
  CHECK_THROWS(closed_form_count({Rational(1, 3), Rational(2, 3)}, 4, v));
}

TEST_CASE("closed_form_count equals the enumerated histogram (k<=2, N<=8)") {
  for (int k = 1; k <= 2; ++k) {
    for (int nconst = 0; nconst <= 1; ++nconst) {
      Vocabulary v;
      for (int i = 0; i < k; ++i) v.unary_predicates.push_back("Q" + std::to_string(i));
      if (nconst) v.constants = {"c"};
      for (int N = 1; N <= (k == 2 ? 6 : 8); ++N) {
        CountOptions opt;
        opt.want_histogram = true;
        opt.backend = CountOptions::Backend::Enumerate;
        ToleranceVector tau;
        CountReport rep = count_worlds(v, N, tau, f_true(), opt);
        BigInt sum;
        for (auto& [u, count] : rep.histogram) {
          CHECK(closed_form_count(u, N, v) == count);
          sum += count;
        }
        CHECK(sum == rep.total);
      }
    }
  }
}

TEST_CASE("vocabulary invariance: an unused predicate cancels out") {
  // counts scale by a common factor; pr_n is unchanged (k<=2, N<=4)
  SourceFile file = parse(R"(vocab { pred P; const c; } kb { ||P(x)||_{x} <~[1] 0.3; })");
  SourceFile wide = parse(R"(vocab { pred P, Unused; const c; } kb { ||P(x)||_{x} <~[1] 0.3; })");
  ToleranceVector tau = tau1(Rational(1, 20));
  FormulaPtr pc = f_pred("P", {Term{true, "c"}});
  for (int N : {2, 3, 4}) {
    auto a = pr_n(file.vocab, N, tau, pc, file.kb_conjunction(), {});
    auto b = pr_n(wide.vocab, N, tau, pc, wide.kb_conjunction(), {});
    REQUIRE(a);
    REQUIRE(b);
    CHECK(*a == *b);
    // the count itself scales by 2^N
    CountReport narrow = count_worlds(file.vocab, N, tau, file.kb_conjunction(), {});
    CountReport broad = count_worlds(wide.vocab, N, tau, wide.kb_conjunction(), {});
    CHECK(broad.total == narrow.total * BigInt::pow(BigInt(2), N));
  }
}

TEST_CASE("relations are materialized only when the query needs them") {
  Vocabulary v;
  v.unary_predicates = {"P"};
  v.constants = {"c", "d"};
  v.relations = {{"R", 2}};
  ToleranceVector tau;
  FormulaPtr rel_query = f_pred("R", {Term{true, "c"}, Term{true, "d"}});
  CountOptions opt;
  opt.backend = CountOptions::Backend::Enumerate;
  // Pr(R(c,d) | true) = 1/2 by symmetry over relation denotations
  auto r = pr_n(v, 2, tau, rel_query, f_true(), opt);
  REQUIRE(r);
  CHECK(*r == Rational(1, 2));
}

TEST_CASE("empirical concentration: mass outside |u1 - 1/2| > 0.1 shrinks") {
  // for KB = true, k = 1: fraction of worlds away from the entropy maximum
  // strictly decreases along N = 50, 100, 200, 400
  double prev = 1.0;
  for (int N : {50, 100, 200, 400}) {
    BigInt far, total;
    for (int r = 0; r <= N; ++r) {
      BigInt ways = BigInt::binomial(N, r);
      total += ways;
      double frac = static_cast<double>(r) / N;
      if (std::abs(frac - 0.5) > 0.1) far += ways;
    }
    double outside = Rational(far, total).to_double();
    CHECK(outside < prev);
    prev = outside;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("histogram CSV format uses exact rationals") {
  Vocabulary v = vocabP();
  CountOptions opt;
  opt.want_histogram = true;
  ToleranceVector tau;
  CountReport rep = count_worlds(v, 4, tau, f_true(), opt);
  std::string csv = histogram_csv(rep, 2);
  CHECK(csv.find("u1,u2,count\n") == 0);
  CHECK(csv.find("1/4,3/4,4") != std::string::npos);
  CHECK(csv.find("1/2,1/2,6") != std::string::npos);
}

TEST_CASE("constant-free histograms take closed-form values on feasible points") {
  SourceFile file = parse("vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.3; }");
  ToleranceVector tau;
  tau.values[1] = Rational(1, 20);
  CountOptions opt;
  opt.want_histogram = true;
  CountReport rep = count_worlds(file.vocab, 8, tau, file.kb_conjunction(), opt);
  // feasible lattice points: r/8 <= 0.35, each carrying exactly C(8,r) worlds
  BigInt total;
  for (auto& [u, count] : rep.histogram) {
    CHECK(count == closed_form_count(u, 8, file.vocab));
    CHECK(u[0] <= Rational(7, 20));
    total += count;
  }
  CHECK(total == rep.total);
  CHECK(rep.histogram.size() == 3);  // r = 0, 1, 2
}
