#include "rw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace rw {

// --- simplex ---

namespace {

constexpr double kLPTol = 1e-9;

struct Tableau {
  // maximize c.x ; rows A x = b with b >= 0; basis tracks basic columns.
  MatrixXd A;
  VectorXd b, c;
  std::vector<int> basis;

  // Returns false on unboundedness.
  bool run(double* objective) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    VectorXd y(m);
    for (;;) {
      // reduced costs: z_j = c_j - c_B . B^-1 A_j; tableau is kept reduced, so
      // reduced cost is c_j directly.
      int enter = -1;
      for (int j = 0; j < n; ++j) {
        if (c(j) > kLPTol) {  // Bland: first improving column
          enter = j;
          break;
        }
      }
      if (enter < 0) break;
      int leave = -1;
      double best = 0;
      for (int i = 0; i < m; ++i) {
        if (A(i, enter) > kLPTol) {
          double ratio = b(i) / A(i, enter);
          if (leave < 0 || ratio < best - kLPTol ||
              (ratio < best + kLPTol && basis[i] < basis[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
    if (objective) *objective = shift;
    return true;
  }

  void pivot(int row, int col) {
    const int m = static_cast<int>(A.rows());
    double piv = A(row, col);
    A.row(row) /= piv;
    b(row) /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      double f = A(i, col);
      if (f != 0.0) {
        A.row(i) -= f * A.row(row);
        b(i) -= f * b(row);
      }
    }
    double fc = c(col);
    if (fc != 0.0) {
      c -= fc * A.row(row).transpose();
      shift += fc * b(row);
    }
    basis[row] = col;
  }

  double shift = 0;
};

}  // namespace

LPResult solve_lp(const VectorXd& c, const std::vector<LPRow>& rows) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(rows.size());
  // Normalize to A x (+ slack) = b, b >= 0.
  int n_slack = 0;
  for (auto& r : rows)
    if (r.rel != Rel::EQ) ++n_slack;
  int total = n + n_slack;
  MatrixXd A = MatrixXd::Zero(m, total + m);  // + artificials
  VectorXd b(m);
  int slack_at = n;
  std::vector<int> basis(m, -1);
  for (int i = 0; i < m; ++i) {
    VectorXd a = rows[i].a;
    double bi = rows[i].b;
    Rel rel = rows[i].rel;
    double sgn = 1.0;
    if (bi < 0) {
      a = -a;
      bi = -bi;
      if (rel == Rel::LE) rel = Rel::GE;
      else if (rel == Rel::GE) rel = Rel::LE;
    }
    A.block(i, 0, 1, n) = sgn * a.transpose();
    b(i) = bi;
    if (rel == Rel::LE) {
      A(i, slack_at) = 1.0;
      basis[i] = slack_at;
      ++slack_at;
    } else if (rel == Rel::GE) {
      A(i, slack_at) = -1.0;
      ++slack_at;
    }
  }
  // artificials where no slack basis
  int n_art = 0;
  for (int i = 0; i < m; ++i) {
    if (basis[i] < 0) {
      A(i, total + n_art) = 1.0;
      basis[i] = total + n_art;
      ++n_art;
    }
  }
  int width = total + n_art;
  Tableau t;
  t.A = A.leftCols(width);
  t.b = b;
  t.basis = basis;

  if (n_art > 0) {
    // phase 1: maximize -sum(artificials)
    VectorXd c1 = VectorXd::Zero(width);
    for (int j = total; j < width; ++j) c1(j) = -1.0;
    // reduce c1 over the basis
    t.c = c1;
    t.shift = 0;
    for (int i = 0; i < m; ++i) {
      int bcol = t.basis[i];
      double f = t.c(bcol);
      if (f != 0.0) {
        t.c -= f * t.A.row(i).transpose();
        t.shift += f * t.b(i);
      }
    }
    if (!t.run(nullptr)) return {LPResult::Status::Infeasible, 0, VectorXd()};
    if (t.shift < -1e-7) return {LPResult::Status::Infeasible, 0, VectorXd()};
    // drive artificials out of the basis when possible
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] >= total) {
        int enter = -1;
        for (int j = 0; j < total; ++j)
          if (std::abs(t.A(i, j)) > kLPTol) {
            enter = j;
            break;
          }
        if (enter >= 0) t.pivot(i, enter);
      }
    }
  }

  // phase 2
  VectorXd c2 = VectorXd::Zero(width);
  c2.head(n) = c;
  for (int j = total; j < width; ++j) c2(j) = -1e9;  // artificials stay out
  t.c = c2;
  t.shift = 0;
  const int mm = static_cast<int>(t.A.rows());
  for (int i = 0; i < mm; ++i) {
    int bcol = t.basis[i];
    double f = t.c(bcol);
    if (f != 0.0) {
      t.c -= f * t.A.row(i).transpose();
      t.shift += f * t.b(i);
    }
  }
  if (!t.run(nullptr)) return {LPResult::Status::Unbounded, 0, VectorXd()};
  VectorXd x = VectorXd::Zero(n);
  for (int i = 0; i < mm; ++i)
    if (t.basis[i] < n) x(t.basis[i]) = t.b(i);
  return {LPResult::Status::Optimal, t.shift, x};
}

// --- objectives ---

Objective entropy_objective() {
  Objective o;
  o.value = [](const VectorXd& u) {
    double h = 0;
    for (int i = 0; i < u.size(); ++i)
      if (u(i) > 0) h -= u(i) * std::log(u(i));
    return h;
  };
  o.grad = [](const VectorXd& u) {
    VectorXd g(u.size());
    for (int i = 0; i < u.size(); ++i) g(i) = -(1.0 + std::log(std::max(u(i), 1e-300)));
    return g;
  };
  o.hess = [](const VectorXd& u) {
    MatrixXd h = MatrixXd::Zero(u.size(), u.size());
    for (int i = 0; i < u.size(); ++i) h(i, i) = -1.0 / std::max(u(i), 1e-300);
    return h;
  };
  return o;
}

Objective neg_sqdist_objective(const VectorXd& v) {
  Objective o;
  o.value = [v](const VectorXd& u) { return -(u - v).squaredNorm(); };
  o.grad = [v](const VectorXd& u) { return VectorXd(-2.0 * (u - v)); };
  o.hess = [v](const VectorXd& u) {
    return MatrixXd(-2.0 * MatrixXd::Identity(u.size(), u.size()));
  };
  return o;
}

// --- cell solving ---

namespace {

struct LinearizedCell {
  // linear rows a.u REL b over the K simplex coordinates (EQ/LE/GE),
  // excluding u >= 0 and including sum u = 1
  std::vector<LPRow> rows;
  std::vector<int> strict_rows;        // indices into rows of strict originals
  std::vector<const InstConstraint*> nonlinear;  // degree >= 2 constraints
};

double poly_eval_d(const AtomPoly& p, const VectorXd& u) {
  double acc = 0;
  for (auto& [m, c] : p.mono) {
    double t = c.to_double();
    for (int id : m) t *= u(id);
    acc += t;
  }
  return acc;
}

VectorXd poly_grad_d(const AtomPoly& p, const VectorXd& u) {
  VectorXd g = VectorXd::Zero(u.size());
  for (auto& [m, c] : p.mono) {
    for (size_t i = 0; i < m.size(); ++i) {
      double t = c.to_double();
      for (size_t j = 0; j < m.size(); ++j) {
        if (j == i) continue;
        t *= u(m[j]);
      }
      g(m[i]) += t;
    }
  }
  return g;
}

// degree <= 1 check and linear extraction
bool linear_coeffs(const AtomPoly& p, int K, VectorXd* a, double* c0) {
  *a = VectorXd::Zero(K);
  *c0 = 0;
  for (auto& [m, c] : p.mono) {
    if (m.empty()) {
      *c0 += c.to_double();
    } else if (m.size() == 1) {
      (*a)(m[0]) += c.to_double();
    } else {
      return false;
    }
  }
  return true;
}

LinearizedCell linearize(const RegionCell& cell, int K) {
  LinearizedCell lc;
  // simplex: sum u = 1
  LPRow simplex_row{VectorXd::Ones(K), Rel::EQ, 1.0};
  lc.rows.push_back(simplex_row);
  for (auto& c : cell.constraints) {
    VectorXd a;
    double c0;
    if (!linear_coeffs(c.poly, K, &a, &c0)) {
      lc.nonlinear.push_back(&c);
      continue;
    }
    // a.u + c0 REL 0  ->  a.u REL -c0
    Rel rel = c.rel;
    bool strict = rel_is_strict(rel);
    if (rel == Rel::LT) rel = Rel::LE;
    if (rel == Rel::GT) rel = Rel::GE;
    lc.rows.push_back(LPRow{a, rel, -c0});
    if (strict) lc.strict_rows.push_back(static_cast<int>(lc.rows.size()) - 1);
  }
  return lc;
}

// Deterministic xorshift-based generator for seeds.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed + 0x9e3779b97f4a7c15ULL) {}
  double uniform() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s >> 11) * (1.0 / 9007199254740992.0);
  }
};

// Gauss-Newton restoration onto the active constraint manifold followed by a
// few tangent-space ascent steps; sharpens penalty iterates to ~1e-12
// residuals so near-ties between symmetric maxima survive clustering.
void manifold_polish(const RegionCell& cell, int K, const Objective& obj, VectorXd* u_io) {
  VectorXd u = *u_io;
  auto active_rows = [&](const VectorXd& w, MatrixXd* J, VectorXd* r) {
    std::vector<VectorXd> rows;
    std::vector<double> res;
    rows.push_back(VectorXd::Ones(K));
    res.push_back(w.sum() - 1.0);
    for (auto& c : cell.constraints) {
      double v = poly_eval_d(c.poly, w);
      bool act = false;
      switch (c.rel) {
        case Rel::EQ: act = true; break;
        case Rel::LE:
        case Rel::LT: act = v > -1e-7; break;
        case Rel::GE:
        case Rel::GT: act = v < 1e-7; break;
      }
      if (!act) continue;
      rows.push_back(poly_grad_d(c.poly, w));
      res.push_back(v);
    }
    for (int i = 0; i < K; ++i) {
      if (w(i) < 1e-10) {
        VectorXd e = VectorXd::Zero(K);
        e(i) = 1.0;
        rows.push_back(e);
        res.push_back(w(i));
      }
    }
    J->resize(rows.size(), K);
    r->resize(res.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      J->row(i) = rows[i].transpose();
      (*r)(i) = res[i];
    }
  };
  auto restore = [&](VectorXd w) {
    for (int it = 0; it < 25; ++it) {
      MatrixXd J;
      VectorXd r;
      active_rows(w, &J, &r);
      if (r.lpNorm<Eigen::Infinity>() < 1e-13) break;
      Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(J);
      w -= cod.solve(r);
      for (int i = 0; i < K; ++i) w(i) = std::max(w(i), 0.0);
    }
    return w;
  };
  u = restore(u);
  for (int outer = 0; outer < 30; ++outer) {
    MatrixXd J;
    VectorXd r;
    active_rows(u, &J, &r);
    Eigen::FullPivLU<MatrixXd> lu(J);
    lu.setThreshold(1e-9);
    if (lu.dimensionOfKernel() == 0) break;  // the manifold is a point
    MatrixXd Z = lu.kernel();
    Eigen::HouseholderQR<MatrixXd> qr(Z);
    MatrixXd ZQ = qr.householderQ() * MatrixXd::Identity(K, Z.cols());
    VectorXd g = ZQ.transpose() * obj.grad(u);
    if (g.lpNorm<Eigen::Infinity>() < 1e-11) break;
    double step = 0.5;
    double f0 = obj.value(u);
    bool moved = false;
    for (int ls = 0; ls < 30 && !moved; ++ls) {
      VectorXd un = restore(u + step * (ZQ * g));
      bool in_bounds = un.minCoeff() >= -1e-12;
      for (auto& c : cell.constraints) {
        double v = poly_eval_d(c.poly, un);
        switch (c.rel) {
          case Rel::EQ: in_bounds = in_bounds && std::abs(v) < 1e-9; break;
          case Rel::LE:
          case Rel::LT: in_bounds = in_bounds && v <= 1e-9; break;
          case Rel::GE:
          case Rel::GT: in_bounds = in_bounds && v >= -1e-9; break;
        }
      }
      if (in_bounds && obj.value(un) > f0) {
        u = un;
        moved = true;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  double viol = 0;
  for (auto& c : cell.constraints) {
    double v = poly_eval_d(c.poly, u);
    switch (c.rel) {
      case Rel::EQ: viol = std::max(viol, std::abs(v)); break;
      case Rel::LE:
      case Rel::LT: viol = std::max(viol, v); break;
      case Rel::GE:
      case Rel::GT: viol = std::max(viol, -v); break;
    }
  }
  viol = std::max(viol, std::abs(u.sum() - 1.0));
  viol = std::max(viol, -u.minCoeff());
  if (viol < 1e-8 && obj.value(u) >= obj.value(*u_io) - 1e-6) *u_io = u;
}

// Penalty multistart over the simplex for cells with nonlinear constraints.
CellSolveResult penalty_multistart(const RegionCell& cell, int K, const Objective& obj,
                                   const SolveOptions& opt) {
  CellSolveResult best;
  best.feasible = false;
  best.heuristic = true;
  auto project_simplex = [K](VectorXd u) {
    std::vector<double> v(u.data(), u.data() + K);
    std::sort(v.begin(), v.end(), std::greater<double>());
    double cum = 0, theta = 0;
    int rho = 0;
    for (int i = 0; i < K; ++i) {
      cum += v[i];
      if (v[i] - (cum - 1.0) / (i + 1) > 0) {
        rho = i + 1;
        theta = (cum - 1.0) / (i + 1);
      } else {
        cum -= v[i];
      }
    }
    for (int i = 0; i < K; ++i) u(i) = std::max(0.0, u(i) - theta);
    double s = u.sum();
    if (s > 0) u /= s;
    (void)rho;
    return u;
  };
  auto violation = [&](const VectorXd& u, double* sq, VectorXd* grad) {
    *sq = 0;
    if (grad) grad->setZero();
    for (auto& c : cell.constraints) {
      double v = poly_eval_d(c.poly, u);
      double viol = 0;
      double dsign = 0;
      switch (c.rel) {
        case Rel::EQ: viol = std::abs(v); dsign = v >= 0 ? 1 : -1; break;
        case Rel::LE:
        case Rel::LT: viol = std::max(0.0, v); dsign = 1; break;
        case Rel::GE:
        case Rel::GT: viol = std::max(0.0, -v); dsign = -1; break;
      }
      if (viol > 0) {
        *sq += viol * viol;
        if (grad) *grad += 2 * viol * dsign * poly_grad_d(c.poly, u);
      }
    }
  };

  std::vector<VectorXd> seeds;
  seeds.push_back(VectorXd::Constant(K, 1.0 / K));
  Rng rng(opt.seed);
  for (int s = 0; s < opt.multistart_seeds; ++s) {
    VectorXd u(K);
    for (int i = 0; i < K; ++i) u(i) = -std::log(std::max(rng.uniform(), 1e-12));
    u /= u.sum();
    seeds.push_back(u);
  }

  for (auto& seed : seeds) {
    VectorXd u = seed;
    for (double rho : {1e2, 1e4, 1e6, 1e8}) {
      double step = 0.05;
      for (int it = 0; it < opt.penalty_iters / 4; ++it) {
        double sq;
        VectorXd vg(K);
        violation(u, &sq, &vg);
        VectorXd g = obj.grad(u) - rho * vg;
        double f_old = obj.value(u) - rho * sq;
        // backtracking with a displacement cap so one step never leaps
        // across a constraint band into a distant basin
        bool moved = false;
        double trial = step;
        for (int bt = 0; bt < 30; ++bt) {
          VectorXd d = trial * g;
          double dn = d.norm();
          if (dn > 0.1) d *= 0.1 / dn;
          VectorXd un = project_simplex(u + d);
          double sq_n;
          violation(un, &sq_n, nullptr);
          double f_new = obj.value(un) - rho * sq_n;
          if (f_new > f_old + 1e-15 && (un - u).norm() > 1e-13) {
            u = un;
            step = std::min(trial * 1.5, 0.05);
            moved = true;
            break;
          }
          trial *= 0.5;
        }
        if (!moved) break;
      }
    }
    manifold_polish(cell, K, obj, &u);
    double sq;
    violation(u, &sq, nullptr);
    double resid = std::sqrt(sq);
    resid = std::max(resid, std::abs(u.sum() - 1.0));
    resid = std::max(resid, -std::min(0.0, u.minCoeff()));
    if (resid >= 1e-8) continue;
    double val = obj.value(u);
    if (!best.feasible || val > best.objective) {
      best.feasible = true;
      best.u = u;
      best.objective = val;
      best.kkt_residual = resid;
    }
    best.tied_points.emplace_back(u, val);
  }
  if (best.feasible) {
    std::vector<std::pair<VectorXd, double>> kept;
    for (auto& [pt, val] : best.tied_points)
      if (val >= best.objective - 1e-7) kept.emplace_back(pt, val);
    best.tied_points = std::move(kept);
  }
  if (best.feasible) {
    best.strictly_feasible = true;  // not decided exactly for nonlinear cells
    best.strict_ok_at_solution = true;
    for (auto& c : cell.constraints) {
      if (!rel_is_strict(c.rel)) continue;
      double v = poly_eval_d(c.poly, best.u);
      if ((c.rel == Rel::GT && v <= 0) || (c.rel == Rel::LT && v >= 0))
        best.strict_ok_at_solution = false;
    }
  }
  return best;
}

}  // namespace

CellSolveResult maximize_over_cell(const RegionCell& cell, int K, const Objective& obj,
                                   const SolveOptions& opt) {
  LinearizedCell lc = linearize(cell, K);
  if (!lc.nonlinear.empty()) return penalty_multistart(cell, K, obj, opt);

  CellSolveResult res;

  // 1. strict feasibility: maximize the minimum strict slack.
  if (!lc.strict_rows.empty()) {
    int n = K + 1;  // u, s
    std::vector<LPRow> rows;
    for (size_t i = 0; i < lc.rows.size(); ++i) {
      const LPRow& r = lc.rows[i];
      bool strict = std::find(lc.strict_rows.begin(), lc.strict_rows.end(), static_cast<int>(i)) !=
                    lc.strict_rows.end();
      VectorXd a = VectorXd::Zero(n);
      a.head(K) = r.a;
      if (strict) {
        // LE: a.u + s <= b ; GE: a.u - s >= b
        a(K) = r.rel == Rel::LE ? 1.0 : -1.0;
      }
      rows.push_back(LPRow{a, r.rel, r.b});
    }
    VectorXd c = VectorXd::Zero(n);
    c(K) = 1.0;
    LPResult lp = solve_lp(c, rows);
    if (lp.status != LPResult::Status::Optimal || lp.value <= opt.zero_tol) {
      res.feasible = false;  // Sol-set empty: closure contributes nothing
      return res;
    }
    res.strictly_feasible = true;
  } else {
    VectorXd c = VectorXd::Zero(K);
    LPResult lp = solve_lp(c, lc.rows);
    if (lp.status != LPResult::Status::Optimal) {
      res.feasible = false;
      return res;
    }
    res.strictly_feasible = true;
  }

  // 2. structure detection over the closed relaxation: forced zeros, tight
  //    inequalities, and a relative-interior starting point.
  std::vector<VectorXd> witnesses;
  std::vector<bool> forced_zero(K, false);
  for (int i = 0; i < K; ++i) {
    VectorXd c = VectorXd::Zero(K);
    c(i) = 1.0;
    LPResult lp = solve_lp(c, lc.rows);
    if (lp.status != LPResult::Status::Optimal) {
      res.feasible = false;
      return res;
    }
    if (lp.value <= opt.zero_tol)
      forced_zero[i] = true;
    else
      witnesses.push_back(lp.x);
  }
  std::vector<bool> tight(lc.rows.size(), false);
  for (size_t j = 1; j < lc.rows.size(); ++j) {  // row 0 is the simplex equality
    const LPRow& r = lc.rows[j];
    if (r.rel == Rel::EQ) continue;
    VectorXd c = r.rel == Rel::LE ? VectorXd(-r.a) : VectorXd(r.a);
    LPResult lp = solve_lp(c, lc.rows);
    if (lp.status != LPResult::Status::Optimal) {
      res.feasible = false;
      return res;
    }
    double slack = r.rel == Rel::LE ? r.b + lp.value : lp.value - r.b;
    if (slack <= opt.zero_tol)
      tight[j] = true;
    else
      witnesses.push_back(lp.x);
  }
  if (witnesses.empty()) {
    VectorXd c = VectorXd::Zero(K);
    LPResult lp = solve_lp(c, lc.rows);
    witnesses.push_back(lp.x);
  }
  VectorXd u0 = VectorXd::Zero(K);
  for (auto& w : witnesses) u0 += w;
  u0 /= static_cast<double>(witnesses.size());

  // 3. equality system: tight rows + EQ rows + forced zeros + simplex.
  std::vector<VectorXd> eq_a;
  std::vector<double> eq_b;
  std::vector<std::pair<VectorXd, double>> ineq;  // a.u <= b, non-tight only
  eq_a.push_back(VectorXd::Ones(K));
  eq_b.push_back(1.0);
  for (size_t j = 1; j < lc.rows.size(); ++j) {
    const LPRow& r = lc.rows[j];
    if (r.rel == Rel::EQ || tight[j]) {
      eq_a.push_back(r.a);
      eq_b.push_back(r.b);
    } else if (r.rel == Rel::LE) {
      ineq.emplace_back(r.a, r.b);
    } else {
      ineq.emplace_back(-r.a, -r.b);
    }
  }
  for (int i = 0; i < K; ++i) {
    if (forced_zero[i]) {
      VectorXd a = VectorXd::Zero(K);
      a(i) = 1.0;
      eq_a.push_back(a);
      eq_b.push_back(0.0);
    }
  }
  MatrixXd E(eq_a.size(), K);
  VectorXd e(eq_a.size());
  for (size_t i = 0; i < eq_a.size(); ++i) {
    E.row(i) = eq_a[i].transpose();
    e(i) = eq_b[i];
  }
  // project u0 exactly onto the equality manifold (it satisfies tight rows
  // only approximately after averaging)
  {
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(E);
    VectorXd correction = cod.solve(e - E * u0);
    u0 += correction;
  }
  Eigen::FullPivLU<MatrixXd> lu(E);
  lu.setThreshold(1e-10);
  MatrixXd Zker = lu.kernel();  // K x d (or K x 1 zero column if trivial)
  bool trivial_kernel = lu.dimensionOfKernel() == 0;

  auto barrier_terms = [&](const VectorXd& u, double mu, double* val, VectorXd* grad,
                           MatrixXd* hess) -> bool {
    for (int i = 0; i < K; ++i) {
      if (forced_zero[i]) continue;
      if (u(i) <= 0) return false;
      if (val) *val += mu * std::log(u(i));
      if (grad) (*grad)(i) += mu / u(i);
      if (hess) (*hess)(i, i) -= mu / (u(i) * u(i));
    }
    for (auto& [a, b] : ineq) {
      double slack = b - a.dot(u);
      if (slack <= 0) return false;
      if (val) *val += mu * std::log(slack);
      if (grad) *grad += (mu / slack) * (-a);
      if (hess) *hess -= (mu / (slack * slack)) * (a * a.transpose());
    }
    return true;
  };

  VectorXd u = u0;
  if (!trivial_kernel) {
    // orthonormalize kernel columns
    Eigen::HouseholderQR<MatrixXd> qr(Zker);
    MatrixXd Q = qr.householderQ() * MatrixXd::Identity(K, Zker.cols());
    MatrixXd Z = Q;
    double mu = 1e-2;
    while (mu >= opt.mu_final) {
      for (int it = 0; it < opt.max_newton_iters; ++it) {
        double fval = obj.value(u);
        VectorXd g_full = obj.grad(u);
        MatrixXd h_full = obj.hess(u);
        double bval = 0;
        VectorXd bg = VectorXd::Zero(K);
        MatrixXd bh = MatrixXd::Zero(K, K);
        if (!barrier_terms(u, mu, &bval, &bg, &bh))
          throw std::runtime_error("solver: barrier iterate left the interior");
        fval += bval;
        VectorXd g = Z.transpose() * (g_full + bg);
        MatrixXd H = Z.transpose() * (h_full + bh) * Z;
        if (g.lpNorm<Eigen::Infinity>() < std::max(1e-12, 1e-4 * mu)) break;
        VectorXd dy = (-H).ldlt().solve(g);
        // line search
        double alpha = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
          VectorXd un = u + alpha * (Z * dy);
          double bv2 = 0;
          if (barrier_terms(un, mu, &bv2, nullptr, nullptr)) {
            double f2 = obj.value(un) + bv2;
            if (f2 >= fval + 1e-4 * alpha * g.dot(dy) || f2 >= fval) {
              u = un;
              moved = true;
              break;
            }
          }
          alpha *= 0.5;
        }
        if (!moved) break;
      }
      if (mu <= opt.mu_final * 4.999) break;
      mu = std::max(mu * 0.2, opt.mu_final);
    }
    // Active-set polish: the barrier identifies the active constraints; the
    // equality-constrained Newton then reaches machine-precision KKT points
    // that the ill-conditioned small-mu barrier cannot.
    auto barrier_residual = [&]() {
      VectorXd bg = VectorXd::Zero(K);
      double bv = 0;
      barrier_terms(u, mu, &bv, &bg, nullptr);
      return (Z.transpose() * (obj.grad(u) + bg)).lpNorm<Eigen::Infinity>() +
             mu * static_cast<double>(K + ineq.size());
    };
    res.kkt_residual = barrier_residual();
    const double act_tol = 1e-5;
    std::vector<bool> active(ineq.size(), false);
    std::vector<bool> coord_zero(K, false);
    for (size_t j = 0; j < ineq.size(); ++j)
      if (ineq[j].second - ineq[j].first.dot(u) <= act_tol) active[j] = true;
    for (int i = 0; i < K; ++i)
      if (!forced_zero[i] && u(i) <= act_tol) coord_zero[i] = true;
    for (int round = 0; round < 6; ++round) {
      std::vector<VectorXd> rows(eq_a);
      std::vector<double> rhs(eq_b);
      std::vector<int> active_idx, zero_idx;
      for (size_t j = 0; j < ineq.size(); ++j) {
        if (!active[j]) continue;
        rows.push_back(ineq[j].first);
        rhs.push_back(ineq[j].second);
        active_idx.push_back(static_cast<int>(j));
      }
      for (int i = 0; i < K; ++i) {
        if (!coord_zero[i]) continue;
        VectorXd a = VectorXd::Zero(K);
        a(i) = 1.0;
        rows.push_back(a);
        rhs.push_back(0.0);
        zero_idx.push_back(i);
      }
      MatrixXd E2(rows.size(), K);
      VectorXd e2(rows.size());
      for (size_t i = 0; i < rows.size(); ++i) {
        E2.row(i) = rows[i].transpose();
        e2(i) = rhs[i];
      }
      Eigen::FullPivLU<MatrixXd> lu2(E2);
      lu2.setThreshold(1e-10);
      int kd = static_cast<int>(lu2.dimensionOfKernel());
      MatrixXd ZQ;
      if (kd > 0) {
        MatrixXd Z2 = lu2.kernel();
        Eigen::HouseholderQR<MatrixXd> qr2(Z2);
        ZQ = qr2.householderQ() * MatrixXd::Identity(K, Z2.cols());
      }
      Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod2(E2);
      VectorXd up = u + cod2.solve(e2 - E2 * u);
      for (int i : zero_idx) up(i) = 0.0;
      auto interior_ok = [&](const VectorXd& w) {
        for (int i = 0; i < K; ++i)
          if (!forced_zero[i] && !coord_zero[i] && w(i) <= 0) return false;
        for (size_t j = 0; j < ineq.size(); ++j)
          if (!active[j] && ineq[j].second - ineq[j].first.dot(w) <= 0) return false;
        return true;
      };
      if (!interior_ok(up)) break;  // keep the barrier answer
      if (kd > 0) {
        for (int it = 0; it < 60; ++it) {
          VectorXd g = ZQ.transpose() * obj.grad(up);
          if (g.lpNorm<Eigen::Infinity>() < 1e-12) break;
          MatrixXd H = ZQ.transpose() * obj.hess(up) * ZQ;
          VectorXd dy = (-H).ldlt().solve(g);
          double alpha = 1.0;
          double f0 = obj.value(up);
          bool moved = false;
          for (int ls = 0; ls < 60; ++ls) {
            VectorXd un = up + alpha * (ZQ * dy);
            if (interior_ok(un) && obj.value(un) >= f0) {
              up = un;
              moved = true;
              break;
            }
            alpha *= 0.5;
          }
          if (!moved) break;
        }
      }
      // Dual feasibility: with stationarity grad H = E2^T nu, an active
      // inequality row a.u <= b needs nu >= 0 and a fixed coordinate bound
      // (row +e_i for u_i >= 0) needs nu <= 0; offenders leave the set.
      Eigen::CompleteOrthogonalDecomposition<MatrixXd> codT(MatrixXd(E2.transpose()));
      VectorXd nu = codT.solve(obj.grad(up));
      bool dropped = false;
      size_t base = eq_a.size();
      for (size_t t = 0; t < active_idx.size(); ++t) {
        if (nu(base + t) < -1e-8) {
          active[active_idx[t]] = false;
          dropped = true;
        }
      }
      for (size_t t = 0; t < zero_idx.size(); ++t) {
        if (nu(base + active_idx.size() + t) > 1e-8) {
          coord_zero[zero_idx[t]] = false;
          dropped = true;
        }
      }
      if (dropped) continue;
      u = up;
      res.kkt_residual = kd > 0 ? (ZQ.transpose() * obj.grad(up)).lpNorm<Eigen::Infinity>() : 0.0;
      break;
    }
  } else {
    res.kkt_residual = 0;  // unique feasible point
  }

  for (int i = 0; i < K; ++i)
    if (forced_zero[i]) u(i) = 0.0;
  // clip tiny barrier residue
  for (int i = 0; i < K; ++i)
    if (u(i) < 1e-12 && u(i) > -1e-12) u(i) = std::max(u(i), 0.0);

  res.feasible = true;
  res.u = u;
  res.objective = obj.value(u);
  res.strict_ok_at_solution = true;
  for (auto& c : cell.constraints) {
    if (!rel_is_strict(c.rel)) continue;
    double v = poly_eval_d(c.poly, u);
    if ((c.rel == Rel::GT && v <= opt.zero_tol) || (c.rel == Rel::LT && v >= -opt.zero_tol))
      res.strict_ok_at_solution = false;
  }
  return res;
}

std::optional<RatioBounds> ratio_bounds_linear(const RegionCell& cell, int K,
                                               const VectorXd& num_coeffs, double num_const,
                                               const VectorXd& den_coeffs, double den_const,
                                               const SolveOptions& opt) {
  LinearizedCell lc = linearize(cell, K);
  if (!lc.nonlinear.empty()) return std::nullopt;
  // Charnes-Cooper: y = t*u, t > 0, den.y + den_const*t = 1; rows a.u REL b
  // become a.y REL b*t; u in simplex: sum y = t.
  // Variables: y (K), t (1).
  int n = K + 1;
  std::vector<LPRow> rows;
  for (auto& r : lc.rows) {
    VectorXd a = VectorXd::Zero(n);
    a.head(K) = r.a;
    a(K) = -r.b;
    rows.push_back(LPRow{a, r.rel, 0.0});
  }
  {
    VectorXd a = VectorXd::Zero(n);
    a.head(K) = den_coeffs;
    a(K) = den_const;
    rows.push_back(LPRow{a, Rel::EQ, 1.0});
  }
  VectorXd c = VectorXd::Zero(n);
  c.head(K) = num_coeffs;
  c(K) = num_const;
  LPResult hi = solve_lp(c, rows);
  LPResult lo = solve_lp(VectorXd(-c), rows);
  if (hi.status != LPResult::Status::Optimal || lo.status != LPResult::Status::Optimal)
    return std::nullopt;  // den vanishes identically (or unbounded: impossible, compact)
  (void)opt;
  return RatioBounds{-lo.value, hi.value};
}

}  // namespace rw
