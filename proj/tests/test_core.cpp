#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "rw/atoms.hpp"
#include "rw/counting.hpp"
#include "rw/parser.hpp"
#include "rw/translate.hpp"
#include "rw/world.hpp"

using namespace rw;

namespace {

Vocabulary vocab2() {
  Vocabulary v;
  v.unary_predicates = {"P1", "P2"};
  return v;
}

}  // namespace

TEST_CASE("atoms_of reproduces the k=2 listing") {
  Vocabulary v = vocab2();
  auto atoms = atoms_of(v);
  REQUIRE(atoms.size() == 4);
  // A1 = P1 & P2, A2 = P1 & !P2, A3 = !P1 & P2, A4 = !P1 & !P2
  CHECK(atom_name(v, 0) == "P1 & P2");
  CHECK(atom_name(v, 1) == "P1 & !P2");
  CHECK(atom_name(v, 2) == "!P1 & P2");
  CHECK(atom_name(v, 3) == "!P1 & !P2");
  CHECK(atoms[0].index == 1);
  CHECK(atoms[3].index == 4);
}

TEST_CASE("k=0 vocabulary has the single empty-conjunction atom") {
  Vocabulary v;
  auto atoms = atoms_of(v);
  REQUIRE(atoms.size() == 1);
  CHECK(atom_name(v, 0) == "true");
}

TEST_CASE("k=3 ordering matches the hepatitis example") {
  Vocabulary v;
  v.unary_predicates = {"Hepatitis", "Jaundice", "BlueEyed"};
  auto atoms = atoms_of(v);
  REQUIRE(atoms.size() == 8);
  CHECK(atom_name(v, 2) == "Hepatitis & !Jaundice & BlueEyed");    // A3
  CHECK(atom_name(v, 3) == "Hepatitis & !Jaundice & !BlueEyed");   // A4
}

TEST_CASE("atom_set on P1 | P2 over k=2") {
  Vocabulary v = vocab2();
  FormulaPtr g = f_or(f_pred("P1", {Term{false, "x"}}), f_pred("P2", {Term{false, "x"}}));
  auto s = atom_set(g, v, "x");
  CHECK(s == std::set<int>{0, 1, 2});
}

TEST_CASE("atom_set of true and of a contradiction") {
  Vocabulary v = vocab2();
  CHECK(atom_set(f_true(), v, "x") == std::set<int>{0, 1, 2, 3});
  FormulaPtr p1 = f_pred("P1", {Term{false, "x"}});
  CHECK(atom_set(f_and(p1, f_not(p1)), v, "x").empty());
}

TEST_CASE("atom_set algebra: intersection and complement, k <= 3") {
  for (int k = 1; k <= 3; ++k) {
    Vocabulary v;
    for (int i = 0; i < k; ++i) v.unary_predicates.push_back("Q" + std::to_string(i));
    rwtest::Rng rng(1000 + k);
    for (int trial = 0; trial < 40; ++trial) {
      FormulaPtr a = rwtest::gen_ep(rng, v, "x", 2);
      FormulaPtr b = rwtest::gen_ep(rng, v, "x", 2);
      auto sa = atom_set(a, v, "x");
      auto sb = atom_set(b, v, "x");
      auto sab = atom_set(f_and(a, b), v, "x");
      std::set<int> expected;
      for (int x : sa)
        if (sb.count(x)) expected.insert(x);
      CHECK(sab == expected);
      auto sna = atom_set(f_not(a), v, "x");
      std::set<int> comp;
      for (int x = 0; x < v.atom_count(); ++x)
        if (!sa.count(x)) comp.insert(x);
      CHECK(sna == comp);
    }
  }
}

TEST_CASE("atoms are mutually exclusive and exhaustive") {
  Vocabulary v = vocab2();
  for (unsigned elem_pattern = 0; elem_pattern < 4; ++elem_pattern) {
    int holds = 0;
    for (int a = 0; a < v.atom_count(); ++a)
      if (atom_satisfies(atom_formula(v, a, Term{false, "x"}), v, elem_pattern)) ++holds;
    CHECK(holds == 1);
  }
}

TEST_CASE("rename_apart separates duplicate binders") {
  Vocabulary v = vocab2();
  FormulaPtr f = f_and(f_exists("x", f_pred("P1", {Term{false, "x"}})),
                       f_exists("x", f_pred("P2", {Term{false, "x"}})));
  FormulaPtr r = rename_apart(f);
  CHECK(r->child->name != r->child2->name);
  // no-reuse formula is unchanged structurally
  FormulaPtr g = f_and(f_exists("x", f_pred("P1", {Term{false, "x"}})),
                       f_exists("y", f_pred("P2", {Term{false, "y"}})));
  CHECK(equal(rename_apart(g), g));
}

TEST_CASE("rename_apart preserves semantics on all small worlds") {
  Vocabulary v = vocab2();
  // ||P1(x)||_x ~=[1] ||P2(x)||_x with a clashing rebind
  FormulaPtr f = f_compare(p_prop(f_pred("P1", {Term{false, "x"}}), {"x"}), CmpOp::ApproxEq, 1,
                           p_prop(f_pred("P2", {Term{false, "x"}}), {"x"}));
  FormulaPtr r = rename_apart(f);
  ToleranceVector tau;
  tau.values[1] = Rational(1, 10);
  for (int N = 1; N <= 3; ++N) {
    World w;
    w.N = N;
    w.atom_of.assign(N, 0);
    for (;;) {
      Valuation val;
      CHECK(eval(w, val, tau, f, v) == eval(w, val, tau, r, v));
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

TEST_CASE("tolerance vector validation") {
  ToleranceVector tau;
  tau.values[1] = Rational(1, 20);
  CHECK_NOTHROW(tau.validate_positive());
  tau.values[2] = Rational(0);
  CHECK_THROWS(tau.validate_positive());
  CHECK_THROWS(tau.at(7));
}
