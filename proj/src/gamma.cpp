#include "rw/gamma.hpp"

#include <algorithm>
#include <set>

namespace rw {

ConstraintFormula gamma(const CanonicalForm& cf) {
  ConstraintFormula g;
  g.K = cf.K;
  for (auto& d : cf.disjuncts) {
    SymbolicCell cell;
    std::set<int> positive_atoms;  // dedup u_i > 0
    auto add_pos_atom = [&](int a) {
      if (positive_atoms.insert(a).second)
        cell.constraints.push_back(
            SymbolicConstraint{SymbolicConstraint::Kind::GtZero, {}, AtomPoly::atom(a), 0});
    };
    for (auto& [c, a] : d.constant_atom) add_pos_atom(a);  // A_i(c) -> u_i > 0
    for (int a : d.must_exist) add_pos_atom(a);            // exists x A_i -> u_i > 0
    for (int a : d.must_not_exist)                         // !exists x A_i -> u_i = 0
      cell.constraints.push_back(
          SymbolicConstraint{SymbolicConstraint::Kind::EqZero, {}, AtomPoly::atom(a), 0});
    for (auto& cst : d.constraints) {
      switch (cst.kind) {
        case CanonConstraint::Kind::ZeroEq:
          cell.constraints.push_back(
              SymbolicConstraint{SymbolicConstraint::Kind::EqZero, {}, cst.tprime, 0});
          break;
        case CanonConstraint::Kind::Pos:
          cell.constraints.push_back(
              SymbolicConstraint{SymbolicConstraint::Kind::GtZero, {}, cst.tprime, 0});
          break;
        case CanonConstraint::Kind::TolLeq:
        case CanonConstraint::Kind::NegTolLeq: {
          if (!cst.tprime.is_constant())
            cell.constraints.push_back(
                SymbolicConstraint{SymbolicConstraint::Kind::GtZero, {}, cst.tprime, 0});
          auto kind = cst.kind == CanonConstraint::Kind::TolLeq ? SymbolicConstraint::Kind::TolLe
                                                                : SymbolicConstraint::Kind::TolGt;
          cell.constraints.push_back(SymbolicConstraint{kind, cst.t, cst.tprime, cst.tol_index});
          break;
        }
      }
    }
    g.cells.push_back(std::move(cell));
  }
  return g;
}

InstConstraintFormula instantiate(const ConstraintFormula& g, const ToleranceVector& tau) {
  InstConstraintFormula out;
  out.K = g.K;
  for (auto& cell : g.cells) {
    InstCell ic;
    for (auto& c : cell.constraints) {
      switch (c.kind) {
        case SymbolicConstraint::Kind::EqZero:
          ic.constraints.push_back(InstConstraint{c.tprime, Rel::EQ});
          break;
        case SymbolicConstraint::Kind::GtZero:
          ic.constraints.push_back(InstConstraint{c.tprime, Rel::GT});
          break;
        case SymbolicConstraint::Kind::TolLe: {
          AtomPoly p = c.t - AtomPoly::constant(tau.at(c.tol_index)) * c.tprime;
          ic.constraints.push_back(InstConstraint{p, Rel::LE});
          break;
        }
        case SymbolicConstraint::Kind::TolGt: {
          AtomPoly p = c.t - AtomPoly::constant(tau.at(c.tol_index)) * c.tprime;
          ic.constraints.push_back(InstConstraint{p, Rel::GT});
          break;
        }
      }
    }
    out.cells.push_back(std::move(ic));
  }
  return out;
}

InstConstraintFormula gamma_weakened(const ConstraintFormula& g) {
  ToleranceVector zero;
  std::set<int> idx;
  for (auto& cell : g.cells)
    for (auto& c : cell.constraints)
      if (c.tol_index > 0) idx.insert(c.tol_index);
  for (int i : idx) zero.values[i] = Rational(0);
  InstConstraintFormula out = instantiate(g, zero);
  for (auto& cell : out.cells)
    for (auto& c : cell.constraints) {
      if (c.rel == Rel::GT) c.rel = Rel::GE;
      if (c.rel == Rel::LT) c.rel = Rel::LE;
    }
  return out;
}

bool cell_satisfied(const InstCell& cell, const std::vector<Rational>& u) {
  for (auto& c : cell.constraints) {
    Rational v = c.poly.eval(u);
    switch (c.rel) {
      case Rel::EQ:
        if (!v.is_zero()) return false;
        break;
      case Rel::LE:
        if (v.sign() > 0) return false;
        break;
      case Rel::LT:
        if (v.sign() >= 0) return false;
        break;
      case Rel::GE:
        if (v.sign() < 0) return false;
        break;
      case Rel::GT:
        if (v.sign() <= 0) return false;
        break;
    }
  }
  return true;
}

bool formula_satisfied(const InstConstraintFormula& g, const std::vector<Rational>& u) {
  for (auto& cell : g.cells)
    if (cell_satisfied(cell, u)) return true;
  return false;
}

RegionDescriptor region_from_instantiated(const InstConstraintFormula& g) {
  RegionDescriptor rd;
  rd.K = g.K;
  std::set<std::string> seen;
  for (auto& cell : g.cells) {
    RegionCell rc;
    std::string key;
    for (auto& c : cell.constraints) {
      rc.constraints.push_back(c);
      size_t deg = 0;
      for (auto& [m, coef] : c.poly.mono) deg = std::max(deg, m.size());
      if (deg > 1) rc.linear = false;
      if (rel_is_strict(c.rel)) rc.has_strict = true;
      key += std::to_string(static_cast<int>(c.rel)) + "@" + c.poly.key() + "#";
    }
    if (seen.insert(key).second) rd.cells.push_back(std::move(rc));
  }
  return rd;
}

RegionDescriptor solution_space(const ConstraintFormula& g, const ToleranceVector& tau) {
  return region_from_instantiated(instantiate(g, tau));
}

// --- printing ---

std::string print_upoly(const AtomPoly& p) {
  if (p.mono.empty()) return "0";
  std::vector<std::pair<std::vector<int>, Rational>> terms(p.mono.begin(), p.mono.end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
  std::string s;
  bool first = true;
  for (auto& [m, c] : terms) {
    Rational mag = c.sign() < 0 ? -c : c;
    std::string term;
    if (m.empty()) {
      term = mag.to_string();
    } else {
      if (mag != Rational(1)) term = mag.to_string() + "*";
      for (size_t i = 0; i < m.size(); ++i) {
        if (i) term += "*";
        term += "u" + std::to_string(m[i] + 1);
      }
    }
    if (first) {
      s = (c.sign() < 0 ? "-" : "") + term;
      first = false;
    } else {
      s += (c.sign() < 0 ? " - " : " + ") + term;
    }
  }
  return s;
}

namespace {

// Tries to render "t <= eps_i * t'" in the factored style
// "A <= (alpha + e_i)*(t')" when t == A - alpha*t' with A's coefficients
// nonnegative; falls back to moving negative monomials across.
std::string print_tol(const AtomPoly& t, const AtomPoly& tprime, int tol, bool negated) {
  std::string eps = "e" + std::to_string(tol);
  std::string out;
  Rational alpha(0);
  bool have_alpha = false;
  for (auto& [m, c] : t.mono) {
    auto it = tprime.mono.find(m);
    if (it != tprime.mono.end() && c.sign() < 0) {
      Rational a = -c / it->second;
      if (!have_alpha || a > alpha) {
        alpha = a;
        have_alpha = true;
      }
    }
  }
  bool unit_scale = tprime.is_constant() && tprime.constant_value() == Rational(1);
  if (have_alpha && alpha.sign() > 0) {
    AtomPoly rest = t + AtomPoly::constant(alpha) * tprime;
    bool nonneg = true;
    for (auto& [m, c] : rest.mono)
      if (c.sign() < 0) nonneg = false;
    if (nonneg) {
      if (unit_scale)
        out = print_upoly(rest) + " <= " + alpha.to_string() + " + " + eps;
      else
        out = print_upoly(rest) + " <= (" + alpha.to_string() + " + " + eps + ")*(" +
              print_upoly(tprime) + ")";
      if (negated) out = "!(" + out + ")";
      return out;
    }
  }
  AtomPoly pos, neg;
  for (auto& [m, c] : t.mono) {
    if (c.sign() > 0)
      pos.add_term(m, c);
    else
      neg.add_term(m, -c);
  }
  std::string rhs = print_upoly(neg);
  std::string scale = tprime.is_constant() && tprime.constant_value() == Rational(1)
                          ? eps
                          : eps + "*(" + print_upoly(tprime) + ")";
  out = print_upoly(pos) + " <= " + (neg.is_zero() ? scale : rhs + " + " + scale);
  if (negated) out = "!(" + out + ")";
  return out;
}

}  // namespace

std::string print_symbolic(const ConstraintFormula& g) {
  std::string out;
  for (size_t i = 0; i < g.cells.size(); ++i) {
    if (g.cells.size() > 1) out += "cell " + std::to_string(i + 1) + ":\n";
    for (auto& c : g.cells[i].constraints) {
      out += "  ";
      switch (c.kind) {
        case SymbolicConstraint::Kind::EqZero:
          out += print_upoly(c.tprime) + " = 0";
          break;
        case SymbolicConstraint::Kind::GtZero:
          out += print_upoly(c.tprime) + " > 0";
          break;
        case SymbolicConstraint::Kind::TolLe:
          out += print_tol(c.t, c.tprime, c.tol_index, false);
          break;
        case SymbolicConstraint::Kind::TolGt:
          out += print_tol(c.t, c.tprime, c.tol_index, true);
          break;
      }
      out += "\n";
    }
  }
  return out;
}

std::string print_instantiated(const InstConstraintFormula& g) {
  std::string out;
  for (size_t i = 0; i < g.cells.size(); ++i) {
    if (g.cells.size() > 1) out += "cell " + std::to_string(i + 1) + ":\n";
    for (auto& c : g.cells[i].constraints) {
      out += "  " + print_upoly(c.poly);
      switch (c.rel) {
        case Rel::EQ: out += " = 0"; break;
        case Rel::LE: out += " <= 0"; break;
        case Rel::LT: out += " < 0"; break;
        case Rel::GE: out += " >= 0"; break;
        case Rel::GT: out += " > 0"; break;
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace rw
