#ifndef RW_BELIEF_HPP
#define RW_BELIEF_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rw/constraint_ops.hpp"
#include "rw/counting.hpp"
#include "rw/descriptions.hpp"
#include "rw/gamma.hpp"

namespace rw {

enum class QueryKind { Simple, Separable, UnaryQuantified, Unsupported };

struct QueryClass {
  QueryKind kind = QueryKind::Unsupported;
  std::string reason;            // Unsupported only
  std::string constant;          // Simple: the single constant c
  FormulaPtr phi_x, psi_x;       // Simple: phi(x), psi(x)
  FormulaPtr psi;                // Separable/UnaryQuantified: the split-off part
  std::vector<FormulaPtr> kb_prime;
  std::vector<std::string> Z;    // constants of phi and psi
};

QueryClass classify(const FormulaPtr& phi, const std::vector<FormulaPtr>& kb,
                    const Vocabulary& vocab);

enum class BeliefStatus { Defined, Interval, NonRobust, MaxEntInapplicable, Unsupported };

std::string to_string(BeliefStatus s);

struct ProbeRow {
  std::map<int, Rational> tau;
  std::optional<double> value;
  std::string status;  // "ok", "infeasible", "multiple-maxima", "zero-denominator"
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  double spread = 0;  // max - min over defined values
  int defined = 0;
};

struct OracleRow {
  int N;
  std::optional<Rational> value;
};

struct BeliefConfig {
  ConstraintOptions constraint;
  std::vector<Rational> tau_probes = {Rational(1, 10), Rational(1, 100), Rational(1, 1000)};
  std::vector<Rational> probe_scales = {Rational(1, 10), Rational(1, 40)};
  double probe_spread_tol = 1e-3;
  double complement_tol = 1e-9;
  std::optional<ToleranceVector> fixed_tau;  // tau>0 evaluation instead of the tau=0 route
  std::vector<int> oracle_Ns;                // cross-check Pr_N at these sizes
  Rational oracle_tau = Rational(1, 20);
  long long oracle_budget = 10'000'000;
};

struct BeliefResult {
  BeliefStatus status = BeliefStatus::Unsupported;
  std::optional<double> value;
  std::optional<std::pair<double, double>> interval;
  std::vector<VectorXd> maxent_points;
  double entropy = 0;
  bool essentially_positive = false;
  bool unique = false;
  std::optional<bool> stable;  // only the general route checks stability
  std::string uniqueness;  // "proven-unique" | "heuristically-unique" | "multiple" | ""
  std::string query_kind;  // "simple" | "separable" | "unary-quantified" | "unsupported"
  std::string reason;
  ProbeReport probes;
  std::vector<OracleRow> oracle;
  // Direct-inference fallback when maxent is inapplicable: per-probe statistic
  // bounds and the extrapolated value when the interval collapses.
  std::vector<std::pair<double, double>> direct_inference_bounds;
  std::optional<double> direct_inference_value;
};

BeliefResult believe_simple(const FormulaPtr& phi, const std::vector<FormulaPtr>& kb,
                            const Vocabulary& vocab, const BeliefConfig& cfg = {});

BeliefResult believe_general(const FormulaPtr& phi, const std::vector<FormulaPtr>& kb,
                             const Vocabulary& vocab, const BeliefConfig& cfg = {});

// Dispatch on classify(); unsupported-but-probeable queries return NonRobust
// with probe evidence.
BeliefResult believe(const FormulaPtr& phi, const std::vector<FormulaPtr>& kb,
                     const Vocabulary& vocab, const BeliefConfig& cfg = {});

// Runs the tau>0 pipeline on a grid of tolerance assignments, including
// permuted orderings of the distinct indices; large spread is nonrobustness
// evidence.
ProbeReport probe_tau(const FormulaPtr& phi, const std::vector<FormulaPtr>& kb,
                      const Vocabulary& vocab, const BeliefConfig& cfg = {});

// Single tau>0 evaluation (concentration reasoning at the maxent point).
ProbeRow per_tau_value(const FormulaPtr& phi, const CanonicalForm& cf, const ConstraintFormula& g,
                       const Vocabulary& vocab, const ToleranceVector& tau,
                       const BeliefConfig& cfg = {});

}  // namespace rw

#endif
