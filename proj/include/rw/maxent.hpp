#ifndef RW_MAXENT_HPP
#define RW_MAXENT_HPP

#include <optional>
#include <vector>

#include "rw/gamma.hpp"
#include "rw/solver.hpp"

namespace rw {

double entropy(const VectorXd& u);  // -sum u ln u, 0 ln 0 = 0

enum class Uniqueness { ProvenUnique, HeuristicallyUnique, Multiple };

struct MaxEntPoint {
  VectorXd u;
  double entropy = 0;
  int cell = -1;
  bool strict_ok = true;
};

struct MaxEntResult {
  bool feasible = false;
  double entropy = 0;                 // global maximum over the region
  std::vector<MaxEntPoint> maxima;    // clustered within cluster_radius
  Uniqueness uniqueness = Uniqueness::ProvenUnique;
  double kkt_residual = 0;
  bool heuristic_cells = false;       // some cell needed the penalty fallback
};

struct MaxEntOptions {
  double cluster_radius = 1e-6;
  double tie_tol = 1e-8;
  SolveOptions solve;
};

MaxEntResult maximize(const RegionDescriptor& region, const MaxEntOptions& opt = {});

// Min/max of num/den over the region; error value nullopt when the
// denominator vanishes on every cell.
std::optional<std::pair<double, double>> bound_statistic(const RegionDescriptor& region,
                                                         const AtomPoly& num, const AtomPoly& den,
                                                         const MaxEntOptions& opt = {});

// Euclidean distance from v to the region (closed relaxations per cell);
// +inf when the region is empty.
double min_distance(const RegionDescriptor& region, const VectorXd& v,
                    const MaxEntOptions& opt = {});

}  // namespace rw

#endif
