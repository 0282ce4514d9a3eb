#ifndef RW_COUNTING_HPP
#define RW_COUNTING_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rw/bigint.hpp"
#include "rw/world.hpp"

namespace rw {

// #worlds report. Counts omit the h(N) relation factor unless the counted
// formula mentions a relation (the factor cancels in every ratio we form).
struct CountReport {
  BigInt total;
  bool has_histogram = false;
  std::map<std::vector<Rational>, BigInt> histogram;  // pi(W) -> exact count
  bool relations_materialized = false;
  std::string backend;  // "enumerate" or "aggregate"
};

struct CountOptions {
  enum class Backend { Auto, Enumerate, Aggregate };
  Backend backend = Backend::Auto;
  bool want_histogram = false;
  long long state_budget = 10'000'000;
};

struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& m) : std::runtime_error(m) {}
};

CountReport count_worlds(const Vocabulary& vocab, int N, const ToleranceVector& tau,
                         const FormulaPtr& f, const CountOptions& opt = {});

// Pr_N^tau(phi | kb); nullopt exactly when #worlds(kb) == 0.
std::optional<Rational> pr_n(const Vocabulary& vocab, int N, const ToleranceVector& tau,
                             const FormulaPtr& phi, const FormulaPtr& kb,
                             const CountOptions& opt = {});

struct PrPoint {
  int N;
  std::optional<Rational> value;
  std::optional<Rational> running_inf, running_sup;
};

std::vector<PrPoint> pr_sequence(const Vocabulary& vocab, const std::vector<int>& Ns,
                                 const ToleranceVector& tau, const FormulaPtr& phi,
                                 const FormulaPtr& kb, const CountOptions& opt = {});

// h(N) * N^|C| * multinomial(N; u*N): worlds with pi(W) = u and arbitrary
// constant and relation denotations. u must be a 1/N lattice point.
BigInt closed_form_count(const std::vector<Rational>& u, int N, const Vocabulary& vocab);

// CSV export of a histogram: header "u1,...,uK,count", exact rationals.
std::string histogram_csv(const CountReport& report, int K);

}  // namespace rw

#endif
