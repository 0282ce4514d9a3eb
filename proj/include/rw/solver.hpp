#ifndef RW_SOLVER_HPP
#define RW_SOLVER_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "rw/gamma.hpp"

namespace rw {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// --- linear programming (dense two-phase simplex, Bland's rule) ---

struct LPRow {
  VectorXd a;
  Rel rel;  // EQ / LE / GE only
  double b;
};

struct LPResult {
  enum class Status { Optimal, Infeasible, Unbounded } status;
  double value = 0;
  VectorXd x;
};

// maximize c.x subject to rows, x >= 0.
LPResult solve_lp(const VectorXd& c, const std::vector<LPRow>& rows);

// --- concave maximization over one closed cell ---

struct Objective {
  std::function<double(const VectorXd&)> value;
  std::function<VectorXd(const VectorXd&)> grad;
  std::function<MatrixXd(const VectorXd&)> hess;
};

Objective entropy_objective();                   // H(u) = -sum u ln u
Objective neg_sqdist_objective(const VectorXd& v);  // -(u - v)^2

struct SolveOptions {
  double mu_final = 1e-9;
  double feas_tol = 1e-9;
  double zero_tol = 1e-11;
  int max_newton_iters = 120;
  int multistart_seeds = 32;
  std::uint64_t seed = 0;
  long long penalty_iters = 4000;
};

struct CellSolveResult {
  bool feasible = false;
  bool strictly_feasible = false;  // strict constraints satisfiable strictly
  VectorXd u;
  double objective = 0;
  double kkt_residual = 0;
  bool strict_ok_at_solution = false;
  bool heuristic = false;  // penalty multistart was used (nonlinear cell)
  // multistart endpoints tied with the cell optimum (nonlinear cells only)
  std::vector<std::pair<VectorXd, double>> tied_points;
};

// Maximizes a smooth concave objective over the closure of one cell
// intersected with the simplex. Cells whose strict constraints are
// unsatisfiable are reported infeasible (their Sol-set is empty, so the
// closure of an empty set contributes nothing). Nonlinear cells fall back to a
// seeded penalty multistart and set `heuristic`.
CellSolveResult maximize_over_cell(const RegionCell& cell, int K, const Objective& obj,
                                   const SolveOptions& opt = {});

// Linear-fractional bounds of num/den over a linear cell via the
// Charnes-Cooper transform; nullopt if den vanishes on the whole cell.
struct RatioBounds {
  double lo, hi;
};
std::optional<RatioBounds> ratio_bounds_linear(const RegionCell& cell, int K,
                                               const VectorXd& num_coeffs, double num_const,
                                               const VectorXd& den_coeffs, double den_const,
                                               const SolveOptions& opt = {});

}  // namespace rw

#endif
