#ifndef RW_CONSTRAINT_OPS_HPP
#define RW_CONSTRAINT_OPS_HPP

#include <optional>
#include <string>
#include <vector>

#include "rw/canonical.hpp"
#include "rw/gamma.hpp"
#include "rw/maxent.hpp"
#include "rw/world.hpp"

namespace rw {

// Per-atom exists / not-exists pattern.
struct SizeDescription {
  std::vector<bool> exists;  // size K

  bool operator==(const SizeDescription& o) const { return exists == o.exists; }
  std::string to_string(const Vocabulary& vocab) const;
};

struct ConstraintOptions {
  double zero_threshold = 1e-9;     // sigma(u) cutoff for "u_i = 0"
  double safety_distance = 1e-6;    // distance threshold for safety
  MaxEntOptions maxent;
};

SizeDescription size_description_of(const VectorXd& u, double zero_threshold = 1e-9);

// sigma as a formula: /\_i exists x A_i(x) or its negation.
FormulaPtr size_description_formula(const SizeDescription& sd, const Vocabulary& vocab);

struct EssentialPositivity {
  bool essentially_positive = false;
  MaxEntResult strict;    // maxent of S^0[KB]
  MaxEntResult weakened;  // maxent of S^{<=0}[KB]
};

EssentialPositivity is_essentially_positive(const ConstraintFormula& g,
                                            const ConstraintOptions& opt = {});

struct SafetyCheck {
  bool safe = false;
  double distance = 0;  // distance from v to S^tau[KB & !sigma(v)]
};

SafetyCheck is_safe(const VectorXd& v, const FormulaPtr& kb, const Vocabulary& vocab,
                    const ToleranceVector& tau, const ConstraintOptions& opt = {});

struct StabilityCheck {
  bool stable = false;
  bool multiple_maxima = false;
  std::optional<SizeDescription> sigma_star;
  std::string reason;
};

StabilityCheck check_stability(const FormulaPtr& kb, const Vocabulary& vocab,
                               const ToleranceVector& tau, const ConstraintOptions& opt = {});

struct EventualConsistency {
  struct Probe {
    Rational tau;
    bool feasible = false;
  };
  std::vector<Probe> probes;
  bool feasible_at_all_probes = false;
  std::optional<int> lattice_N;                  // witness domain size
  std::optional<std::vector<Rational>> lattice_point;
  std::string note;
};

EventualConsistency check_eventual_consistency(const FormulaPtr& kb, const Vocabulary& vocab,
                                               const std::vector<Rational>& tau_probes,
                                               int max_lattice_N = 64,
                                               const ConstraintOptions& opt = {});

// Realizability constructor: a world with pi(W) = u realizing one canonical
// disjunct (atom blocks in order; constants per the disjunct's literals, else
// the first inhabited atom).
World world_from_lattice_point(const std::vector<Rational>& u, int N, const CanonDisjunct& d,
                               const Vocabulary& vocab);

}  // namespace rw

#endif
