#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rw/canonical.hpp"
#include "rw/constraint_ops.hpp"
#include "rw/gamma.hpp"
#include "rw/maxent.hpp"
#include "rw/parser.hpp"

using namespace rw;

namespace {

RegionDescriptor region_of(const std::string& text, const ToleranceVector& tau) {
  SourceFile file = parse(text);
  CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
  return solution_space(gamma(cf), tau);
}

ToleranceVector zeros(int upto) {
  ToleranceVector t;
  for (int i = 1; i <= upto; ++i) t.values[i] = Rational(0);
  return t;
}

// The hepatitis closed form: v = (1,3,0,0,1/4,3/4,g/4,3g/4)/(5+g), g = 2^1.6.
std::vector<double> hepatitis_point() {
  double g = std::pow(2.0, 1.6);
  double d = 5.0 + g;
  return {1 / d, 3 / d, 0, 0, 1 / (4 * d), 3 / (4 * d), g / (4 * d), 3 * g / (4 * d)};
}

const char* kHepatitisText = R"(vocab { pred Hepatitis, Jaundice, BlueEyed; const Eric; }
kb {
  forall x (Hepatitis(x) -> Jaundice(x));
  ||Hepatitis(x) | Jaundice(x)||_{x} ~=[1] 0.8;
  ||BlueEyed(x)||_{x} ~=[2] 0.25;
  Jaundice(Eric);
})";

}  // namespace

TEST_CASE("entropy basics") {
  VectorXd u(2);
  u << 0.5, 0.5;
  CHECK(entropy(u) == doctest::Approx(std::log(2)).epsilon(1e-12));
  VectorXd e(4);
  e << 1, 0, 0, 0;
  CHECK(entropy(e) == 0.0);
  VectorXd hep(8);
  auto v = hepatitis_point();
  for (int i = 0; i < 8; ++i) hep(i) = v[i];
  double expect = 0;  // frozen by evaluating the closed form
  for (double x : v)
    if (x > 0) expect -= x * std::log(x);
  CHECK(entropy(hep) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("unconstrained simplex maximizes at uniform") {
  RegionDescriptor region = region_of("vocab { pred P1, P2; } kb { }", {});
  MaxEntResult me = maximize(region);
  REQUIRE(me.feasible);
  REQUIRE(me.maxima.size() == 1);
  CHECK(me.entropy == doctest::Approx(std::log(4)).epsilon(1e-9));
  for (int i = 0; i < 4; ++i) CHECK(me.maxima[0].u(i) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(me.uniqueness == Uniqueness::ProvenUnique);
  CHECK(me.kkt_residual < 1e-8);
}

TEST_CASE("u1 <= 0.3 pins the maximum at (0.3, 0.7)") {
  RegionDescriptor region =
      region_of("vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.3; }", zeros(1));
  MaxEntResult me = maximize(region);
  REQUIRE(me.feasible);
  REQUIRE(me.maxima.size() == 1);
  CHECK(me.maxima[0].u(0) == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(me.maxima[0].u(1) == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(me.uniqueness == Uniqueness::ProvenUnique);
}

TEST_CASE("tau > 0 shifts the maximum to 0.3 + tau") {
  ToleranceVector tau;
  tau.values[1] = Rational(1, 20);
  RegionDescriptor region = region_of("vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.3; }", tau);
  MaxEntResult me = maximize(region);
  REQUIRE(me.feasible);
  CHECK(me.maxima[0].u(0) == doctest::Approx(0.35).epsilon(1e-8));
}

TEST_CASE("split-interval knowledge base: two maxima at tau=0") {
  RegionDescriptor region = region_of(
      "vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.3 | ||P(x)||_{x} >~[2] 0.7; }", zeros(2));
  MaxEntResult me = maximize(region);
  REQUIRE(me.feasible);
  CHECK(me.uniqueness == Uniqueness::Multiple);
  REQUIRE(me.maxima.size() == 2);
  std::vector<double> firsts = {me.maxima[0].u(0), me.maxima[1].u(0)};
  std::sort(firsts.begin(), firsts.end());
  CHECK(firsts[0] == doctest::Approx(0.3).epsilon(1e-7));
  CHECK(firsts[1] == doctest::Approx(0.7).epsilon(1e-7));
}

TEST_CASE("hepatitis knowledge base reproduces the closed-form point") {
  SourceFile file = parse(kHepatitisText);
  CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
  RegionDescriptor region = solution_space(gamma(cf), zeros(2));
  MaxEntResult me = maximize(region);
  REQUIRE(me.feasible);
  REQUIRE(me.maxima.size() == 1);
  CHECK(me.uniqueness == Uniqueness::ProvenUnique);
  auto expect = hepatitis_point();
  for (int i = 0; i < 8; ++i) CHECK(std::abs(me.maxima[0].u(i) - expect[i]) < 1e-6);
  // frozen decimals derived by evaluating the closed form
  CHECK(me.maxima[0].u(0) == doctest::Approx(0.124511).epsilon(1e-4));
  CHECK(me.maxima[0].u(1) == doctest::Approx(0.373533).epsilon(1e-4));
  CHECK(me.maxima[0].u(4) == doctest::Approx(0.031128).epsilon(1e-4));
  CHECK(me.maxima[0].u(7) == doctest::Approx(0.283083).epsilon(1e-4));
}

TEST_CASE("solver never loses to a dense grid search (K <= 3 oracle)") {
  struct Case {
    std::string text;
    ToleranceVector tau;
  };
  std::vector<Case> cases = {
      {"vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.3; }", zeros(1)},
      {"vocab { pred P; } kb { 2 * ||P(x)||_{x} <~[1] 1/2; }", zeros(1)},
      {"vocab { pred P; } kb { ||P(x)||_{x} >~[1] 0.6; }", zeros(1)},
  };
  for (auto& c : cases) {
    RegionDescriptor region = region_of(c.text, c.tau);
    MaxEntResult me = maximize(region);
    REQUIRE(me.feasible);
    double best_grid = -1;
    for (int i = 0; i <= 1000; ++i) {
      VectorXd u(2);
      u << i / 1000.0, 1.0 - i / 1000.0;
      bool any_cell = false;
      for (auto& cell : region.cells) {
        bool cell_ok = true;
        for (auto& cst : cell.constraints) {
          double val = 0;
          for (auto& [m, coef] : cst.poly.mono) {
            double t = coef.to_double();
            for (int id : m) t *= u(id);
            val += t;
          }
          switch (cst.rel) {
            case Rel::EQ: cell_ok = cell_ok && std::abs(val) < 1e-12; break;
            case Rel::LE: cell_ok = cell_ok && val <= 1e-12; break;
            case Rel::LT: cell_ok = cell_ok && val < 1e-12; break;
            case Rel::GE: cell_ok = cell_ok && val >= -1e-12; break;
            case Rel::GT: cell_ok = cell_ok && val > -1e-12; break;
          }
        }
        if (cell_ok) any_cell = true;
      }
      if (any_cell) best_grid = std::max(best_grid, entropy(u));
    }
    CHECK(me.entropy >= best_grid - 1e-4);
  }
}

TEST_CASE("returned maxima are feasible and locally unimprovable") {
  RegionDescriptor region =
      region_of("vocab { pred P1, P2; } kb { ||P1(x)||_{x} <~[1] 0.3; }", zeros(1));
  MaxEntResult me = maximize(region);
  REQUIRE(me.feasible);
  const VectorXd& v = me.maxima[0].u;
  CHECK(v(0) + v(1) <= 0.3 + 1e-8);
  CHECK(std::abs(v.sum() - 1.0) < 1e-9);
  std::uint64_t s = 12345;
  for (int trial = 0; trial < 60; ++trial) {
    VectorXd d(4);
    for (int i = 0; i < 4; ++i) {
      s ^= s << 13;
      s ^= s >> 7;
      s ^= s << 17;
      d(i) = static_cast<double>(s % 2001) / 1000.0 - 1.0;
    }
    d.array() -= d.mean();
    if (d.norm() < 1e-12) continue;
    d *= 1e-4 / d.norm();
    VectorXd u = v + d;
    bool feasible = u.minCoeff() >= 0 && u(0) + u(1) <= 0.3;
    if (!feasible) continue;
    CHECK(entropy(u) <= me.entropy + 1e-10);
  }
}

TEST_CASE("linear-cell determinism across seeds") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
    MaxEntOptions opt;
    opt.solve.seed = seed;
    RegionDescriptor region =
        region_of("vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.3; }", zeros(1));
    MaxEntResult me = maximize(region, opt);
    REQUIRE(me.feasible);
    CHECK(me.maxima[0].u(0) == doctest::Approx(0.3).epsilon(1e-8));
  }
}

TEST_CASE("entropy bounds 0 <= H <= ln K") {
  RegionDescriptor region = region_of("vocab { pred P1, P2; } kb { forall x P1(x); }", {});
  MaxEntResult me = maximize(region);
  REQUIRE(me.feasible);
  CHECK(me.entropy >= 0);
  CHECK(me.entropy <= std::log(4) + 1e-12);
  CHECK(me.entropy == doctest::Approx(std::log(2)).epsilon(1e-8));
}

TEST_CASE("bound_statistic: ratio bounds over the one-third-cap space") {
  ToleranceVector tau;
  tau.values[1] = Rational(1, 10);
  SourceFile file = parse(
      "vocab { pred P1, P2; } kb { forall x P1(x) & 3 * ||P1(x) & P2(x)||_{x} <~[1] 1; }");
  CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
  RegionDescriptor region = solution_space(gamma(cf), tau);
  AtomPoly num = AtomPoly::atom(0);
  AtomPoly den = AtomPoly::constant(Rational(1));
  auto b = bound_statistic(region, num, den);
  REQUIRE(b);
  CHECK(b->first == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(b->second == doctest::Approx((1.0 + 0.1) / 3.0).epsilon(1e-7));
}

TEST_CASE("bound_statistic: t/t over a region where t > 0 is [1,1]") {
  ToleranceVector tau;
  tau.values[1] = Rational(1, 10);
  RegionDescriptor region = region_of("vocab { pred P; } kb { ||P(x)||_{x} >~[1] 0.5; }", tau);
  AtomPoly t = AtomPoly::atom(0);
  auto b = bound_statistic(region, t, t);
  REQUIRE(b);
  CHECK(b->first == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(b->second == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("hepatitis region forces the conditional ratio to 0.8 at tau=0") {
  SourceFile file = parse(kHepatitisText);
  CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
  RegionDescriptor region = solution_space(gamma(cf), zeros(2));
  AtomPoly num, den;
  for (int a : {0, 1}) num = num + AtomPoly::atom(a);
  for (int a : {0, 1, 4, 5}) den = den + AtomPoly::atom(a);
  auto b = bound_statistic(region, num, den);
  REQUIRE(b);
  CHECK(b->first == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(b->second == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("infeasible region is reported infeasible") {
  RegionDescriptor region = region_of(
      "vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.2 & ||P(x)||_{x} >~[2] 0.8; }", zeros(2));
  MaxEntResult me = maximize(region);
  CHECK_FALSE(me.feasible);
}

TEST_CASE("min_distance to a region") {
  RegionDescriptor region =
      region_of("vocab { pred P; } kb { ||P(x)||_{x} <~[1] 0.3; }", zeros(1));
  VectorXd v(2);
  v << 0.5, 0.5;
  CHECK(min_distance(region, v) == doctest::Approx(0.2 * std::sqrt(2.0)).epsilon(1e-6));
  VectorXd inside(2);
  inside << 0.1, 0.9;
  CHECK(min_distance(region, inside) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("nonlinear cell: independence plus marginals pins the product point") {
  // ||P1 & P2|| ~= ||P1||*||P2||, ||P1|| ~= 0.3, ||P2|| ~= 0.6 at tau=0
  SourceFile file = parse(R"(vocab { pred P1, P2; }
kb {
  ||P1(x) & P2(x)||_{x} ~=[1] ||P1(x)||_{x} * ||P2(x)||_{x};
  ||P1(x)||_{x} ~=[2] 0.3;
  ||P2(x)||_{x} ~=[3] 0.6;
})");
  CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
  ToleranceVector zero;
  for (int i : {1, 2, 3}) zero.values[i] = Rational(0);
  RegionDescriptor region = solution_space(gamma(cf), zero);
  CHECK_FALSE(region.all_linear());
  MaxEntResult me = maximize(region);
  REQUIRE(me.feasible);
  CHECK(me.heuristic_cells);
  CHECK(me.uniqueness == Uniqueness::HeuristicallyUnique);
  REQUIRE(me.maxima.size() == 1);
  const VectorXd& u = me.maxima[0].u;
  CHECK(u(0) == doctest::Approx(0.18).epsilon(1e-4));  // P1 & P2
  CHECK(u(1) == doctest::Approx(0.12).epsilon(1e-4));  // P1 & !P2
  CHECK(u(2) == doctest::Approx(0.42).epsilon(1e-4));  // !P1 & P2
  CHECK(u(3) == doctest::Approx(0.28).epsilon(1e-4));  // !P1 & !P2
}

TEST_CASE("nonconvex quadratic: two maxima found by the multistart") {
  // 0 <~ ||P||^2 - ||P|| + 0.21 carves out u1 <= 0.3 or u1 >= 0.7
  SourceFile file = parse(R"(vocab { pred P; }
kb { 0 <~[1] ||P(x)||_{x} * ||P(x)||_{x} - ||P(x)||_{x} + 21/100; })");
  CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
  ToleranceVector zero;
  zero.values[1] = Rational(0);
  RegionDescriptor region = solution_space(gamma(cf), zero);
  MaxEntResult me = maximize(region);
  REQUIRE(me.feasible);
  CHECK(me.uniqueness == Uniqueness::Multiple);
  REQUIRE(me.maxima.size() == 2);
  std::vector<double> firsts = {me.maxima[0].u(0), me.maxima[1].u(0)};
  std::sort(firsts.begin(), firsts.end());
  CHECK(firsts[0] == doctest::Approx(0.3).epsilon(2e-3));
  CHECK(firsts[1] == doctest::Approx(0.7).epsilon(2e-3));
}
