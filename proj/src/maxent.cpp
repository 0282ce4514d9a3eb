#include "rw/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rw {

double entropy(const VectorXd& u) {
  double h = 0;
  for (int i = 0; i < u.size(); ++i)
    if (u(i) > 0) h -= u(i) * std::log(u(i));
  return h;
}

MaxEntResult maximize(const RegionDescriptor& region, const MaxEntOptions& opt) {
  MaxEntResult out;
  Objective obj = entropy_objective();
  std::vector<MaxEntPoint> candidates;
  double best = -std::numeric_limits<double>::infinity();
  double worst_kkt = 0;
  for (size_t ci = 0; ci < region.cells.size(); ++ci) {
    CellSolveResult r = maximize_over_cell(region.cells[ci], region.K, obj, opt.solve);
    if (!r.feasible) continue;
    if (r.heuristic) out.heuristic_cells = true;
    MaxEntPoint p;
    p.u = r.u;
    p.entropy = r.objective;
    p.cell = static_cast<int>(ci);
    p.strict_ok = r.strict_ok_at_solution;
    candidates.push_back(std::move(p));
    for (auto& [pt, val] : r.tied_points) {
      MaxEntPoint q;
      q.u = pt;
      q.entropy = val;
      q.cell = static_cast<int>(ci);
      q.strict_ok = r.strict_ok_at_solution;
      candidates.push_back(std::move(q));
    }
    best = std::max(best, r.objective);
    worst_kkt = std::max(worst_kkt, r.kkt_residual);
  }
  if (candidates.empty()) {
    out.feasible = false;
    return out;
  }
  out.feasible = true;
  out.entropy = best;
  out.kkt_residual = worst_kkt;
  // keep candidates within tie_tol of the global max, clustered spatially
  std::sort(candidates.begin(), candidates.end(),
            [](const MaxEntPoint& a, const MaxEntPoint& b) { return a.entropy > b.entropy; });
  for (auto& c : candidates) {
    if (c.entropy < best - opt.tie_tol) break;
    bool dup = false;
    for (auto& m : out.maxima)
      if ((m.u - c.u).norm() <= opt.cluster_radius) dup = true;
    if (!dup) out.maxima.push_back(c);
  }
  if (out.maxima.size() > 1) {
    out.uniqueness = Uniqueness::Multiple;
  } else if (!out.heuristic_cells && region.all_linear()) {
    // every per-cell optimum is exact (strict concavity over a convex cell),
    // and they collapsed to a single cluster
    out.uniqueness = Uniqueness::ProvenUnique;
  } else {
    out.uniqueness = Uniqueness::HeuristicallyUnique;
  }
  return out;
}

namespace {

bool linear_parts(const AtomPoly& p, int K, VectorXd* a, double* c0) {
  *a = VectorXd::Zero(K);
  *c0 = 0;
  for (auto& [m, c] : p.mono) {
    if (m.empty())
      *c0 += c.to_double();
    else if (m.size() == 1)
      (*a)(m[0]) += c.to_double();
    else
      return false;
  }
  return true;
}

double poly_eval_dd(const AtomPoly& p, const VectorXd& u) {
  double acc = 0;
  for (auto& [m, c] : p.mono) {
    double t = c.to_double();
    for (int id : m) t *= u(id);
    acc += t;
  }
  return acc;
}

}  // namespace

std::optional<std::pair<double, double>> bound_statistic(const RegionDescriptor& region,
                                                         const AtomPoly& num, const AtomPoly& den,
                                                         const MaxEntOptions& opt) {
  VectorXd na, da;
  double nc, dc;
  bool lin = linear_parts(num, region.K, &na, &nc) && linear_parts(den, region.K, &da, &dc);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (auto& cell : region.cells) {
    if (lin && cell.linear) {
      auto b = ratio_bounds_linear(cell, region.K, na, nc, da, dc, opt.solve);
      if (b) {
        lo = std::min(lo, b->lo);
        hi = std::max(hi, b->hi);
        any = true;
      }
      continue;
    }
    // nonlinear fallback: penalty multistart on +/- ratio with den floor
    Objective ratio_hi;
    const double floor = 1e-12;
    ratio_hi.value = [&](const VectorXd& u) {
      double d = poly_eval_dd(den, u);
      if (d < floor) return -1e9;
      return poly_eval_dd(num, u) / d;
    };
    ratio_hi.grad = [&](const VectorXd& u) {
      // numeric gradient (nonlinear cells are heuristic territory anyway)
      VectorXd g(region.K);
      double f0 = ratio_hi.value(u);
      for (int i = 0; i < region.K; ++i) {
        VectorXd un = u;
        un(i) += 1e-7;
        g(i) = (ratio_hi.value(un) - f0) / 1e-7;
      }
      return g;
    };
    ratio_hi.hess = [&](const VectorXd&) {
      return MatrixXd(-MatrixXd::Identity(region.K, region.K));
    };
    CellSolveResult rh = maximize_over_cell(cell, region.K, ratio_hi, opt.solve);
    Objective ratio_lo = ratio_hi;
    auto base = ratio_hi.value;
    ratio_lo.value = [base](const VectorXd& u) { return -base(u); };
    ratio_lo.grad = [&, base](const VectorXd& u) {
      VectorXd g(region.K);
      double f0 = -base(u);
      for (int i = 0; i < region.K; ++i) {
        VectorXd un = u;
        un(i) += 1e-7;
        g(i) = (-base(un) - f0) / 1e-7;
      }
      return g;
    };
    CellSolveResult rl = maximize_over_cell(cell, region.K, ratio_lo, opt.solve);
    if (rh.feasible && rh.objective > -1e8) {
      hi = std::max(hi, rh.objective);
      any = true;
    }
    if (rl.feasible && -rl.objective < 1e8) {
      lo = std::min(lo, -rl.objective);
      any = true;
    }
  }
  if (!any) return std::nullopt;
  return std::make_pair(lo, hi);
}

double min_distance(const RegionDescriptor& region, const VectorXd& v, const MaxEntOptions& opt) {
  double best = std::numeric_limits<double>::infinity();
  Objective obj = neg_sqdist_objective(v);
  for (auto& cell : region.cells) {
    CellSolveResult r = maximize_over_cell(cell, region.K, obj, opt.solve);
    if (!r.feasible) continue;
    best = std::min(best, std::sqrt(std::max(0.0, -r.objective)));
  }
  return best;
}

}  // namespace rw
