#include "rw/constraint_ops.hpp"

#include <algorithm>
#include <cmath>

namespace rw {

std::string SizeDescription::to_string(const Vocabulary& vocab) const {
  std::string s;
  for (size_t i = 0; i < exists.size(); ++i) {
    if (i) s += " & ";
    if (!exists[i]) s += "!";
    s += "exists x (" + atom_name(vocab, static_cast<int>(i)) + ")";
  }
  return s;
}

SizeDescription size_description_of(const VectorXd& u, double zero_threshold) {
  SizeDescription sd;
  sd.exists.resize(u.size());
  for (int i = 0; i < u.size(); ++i) sd.exists[i] = std::abs(u(i)) > zero_threshold;
  return sd;
}

FormulaPtr size_description_formula(const SizeDescription& sd, const Vocabulary& vocab) {
  std::vector<FormulaPtr> parts;
  for (size_t a = 0; a < sd.exists.size(); ++a) {
    FormulaPtr ex = f_exists("x", atom_formula(vocab, static_cast<int>(a), Term{false, "x"}));
    parts.push_back(sd.exists[a] ? ex : f_not(ex));
  }
  return f_and_all(parts);
}

EssentialPositivity is_essentially_positive(const ConstraintFormula& g,
                                            const ConstraintOptions& opt) {
  EssentialPositivity out;
  ToleranceVector zero;
  std::set<int> idx;
  for (auto& cell : g.cells)
    for (auto& c : cell.constraints)
      if (c.tol_index > 0) idx.insert(c.tol_index);
  for (int i : idx) zero.values[i] = Rational(0);

  RegionDescriptor strict_region = region_from_instantiated(instantiate(g, zero));
  RegionDescriptor weak_region = region_from_instantiated(gamma_weakened(g));
  out.strict = maximize(strict_region, opt.maxent);
  out.weakened = maximize(weak_region, opt.maxent);
  if (!out.strict.feasible || !out.weakened.feasible) {
    out.essentially_positive = out.strict.feasible == out.weakened.feasible;
    return out;
  }
  if (std::abs(out.strict.entropy - out.weakened.entropy) > opt.maxent.tie_tol * 10) {
    out.essentially_positive = false;
    return out;
  }
  // same-entropy check plus mutual coverage of the maxima sets
  auto covered = [&](const std::vector<MaxEntPoint>& a, const std::vector<MaxEntPoint>& b) {
    for (auto& pa : a) {
      bool found = false;
      for (auto& pb : b)
        if ((pa.u - pb.u).norm() <= 1e-5) found = true;
      if (!found) return false;
    }
    return true;
  };
  out.essentially_positive =
      covered(out.strict.maxima, out.weakened.maxima) && covered(out.weakened.maxima, out.strict.maxima);
  return out;
}

SafetyCheck is_safe(const VectorXd& v, const FormulaPtr& kb, const Vocabulary& vocab,
                    const ToleranceVector& tau, const ConstraintOptions& opt) {
  SafetyCheck out;
  SizeDescription sd = size_description_of(v, opt.zero_threshold);
  FormulaPtr bad = f_and(kb, f_not(size_description_formula(sd, vocab)));
  CanonicalForm cf = to_canonical(bad, vocab);
  RegionDescriptor region = solution_space(gamma(cf), tau);
  out.distance = min_distance(region, v, opt.maxent);
  out.safe = !(out.distance <= opt.safety_distance);
  return out;
}

StabilityCheck check_stability(const FormulaPtr& kb, const Vocabulary& vocab,
                               const ToleranceVector& tau, const ConstraintOptions& opt) {
  StabilityCheck out;
  CanonicalForm cf = to_canonical(kb, vocab);
  RegionDescriptor region = solution_space(gamma(cf), tau);
  MaxEntResult me = maximize(region, opt.maxent);
  if (!me.feasible) {
    out.reason = "knowledge base infeasible at this tolerance";
    return out;
  }
  out.multiple_maxima = me.maxima.size() > 1;
  std::optional<SizeDescription> sigma;
  for (auto& m : me.maxima) {
    SizeDescription sd = size_description_of(m.u, opt.zero_threshold);
    if (!sigma) {
      sigma = sd;
    } else if (!(*sigma == sd)) {
      out.reason = "maximum-entropy points disagree on the size description";
      return out;
    }
  }
  for (auto& m : me.maxima) {
    SafetyCheck sc = is_safe(m.u, kb, vocab, tau, opt);
    if (!sc.safe) {
      out.reason = "maximum-entropy point is unsafe (distance " + std::to_string(sc.distance) + ")";
      return out;
    }
  }
  out.stable = true;
  out.sigma_star = sigma;
  return out;
}

EventualConsistency check_eventual_consistency(const FormulaPtr& kb, const Vocabulary& vocab,
                                               const std::vector<Rational>& tau_probes,
                                               int max_lattice_N, const ConstraintOptions& opt) {
  EventualConsistency out;
  CanonicalForm cf = to_canonical(kb, vocab);
  ConstraintFormula g = gamma(cf);
  std::set<int> idx;
  for (auto& cell : g.cells)
    for (auto& c : cell.constraints)
      if (c.tol_index > 0) idx.insert(c.tol_index);

  bool all_ok = !tau_probes.empty();
  for (auto& tp : tau_probes) {
    ToleranceVector tau;
    for (int i : idx) tau.values[i] = tp;
    RegionDescriptor region = solution_space(g, tau);
    MaxEntResult me = maximize(region, opt.maxent);
    EventualConsistency::Probe probe;
    probe.tau = tp;
    probe.feasible = me.feasible;
    if (!me.feasible) all_ok = false;
    out.probes.push_back(probe);
  }
  out.feasible_at_all_probes = all_ok;

  // 1/N lattice witness at the smallest probe tolerance (exact arithmetic,
  // strict constraints strictly), searching around the solver point first.
  if (!tau_probes.empty()) {
    ToleranceVector tau;
    Rational smallest = tau_probes.back();
    for (auto& tp : tau_probes)
      if (tp < smallest) smallest = tp;
    for (int i : idx) tau.values[i] = smallest;
    InstConstraintFormula inst = instantiate(g, tau);
    RegionDescriptor region = region_from_instantiated(inst);
    MaxEntResult me = maximize(region, opt.maxent);
    if (me.feasible && !me.maxima.empty()) {
      const VectorXd& target = me.maxima[0].u;
      int K = region.K;
      for (int N = 1; N <= max_lattice_N && !out.lattice_N; ++N) {
        // round target to the 1/N lattice, largest coordinate absorbs the gap
        std::vector<long long> counts(K, 0);
        long long total = 0;
        int imax = 0;
        for (int i = 0; i < K; ++i) {
          counts[i] = llround(target(i) * N);
          if (counts[i] < 0) counts[i] = 0;
          total += counts[i];
          if (target(i) > target(imax)) imax = i;
        }
        counts[imax] += N - total;
        if (counts[imax] < 0) continue;
        std::vector<Rational> u;
        for (int i = 0; i < K; ++i) u.push_back(Rational(counts[i], N));
        if (formula_satisfied(inst, u)) {
          out.lattice_N = N;
          out.lattice_point = u;
        }
      }
      if (!out.lattice_N)
        out.note = "no 1/N lattice witness found up to N=" + std::to_string(max_lattice_N);
    } else {
      out.note = "constraint system infeasible at the smallest probe tolerance";
    }
  }
  return out;
}

World world_from_lattice_point(const std::vector<Rational>& u, int N, const CanonDisjunct& d,
                               const Vocabulary& vocab) {
  World w;
  w.N = N;
  w.atom_of.assign(N, 0);
  int K = vocab.atom_count();
  std::vector<long long> counts(K, 0);
  long long pos = 0;
  for (int a = 0; a < K; ++a) {
    Rational scaled = u[a] * Rational(N);
    if (scaled.den() != BigInt(1))
      throw std::invalid_argument("world_from_lattice_point: not a 1/N lattice point");
    counts[a] = scaled.num().to_int64();
    for (long long i = 0; i < counts[a]; ++i) w.atom_of[pos++] = a;
  }
  if (pos != N) throw std::invalid_argument("world_from_lattice_point: coordinates do not sum to 1");
  std::vector<long long> start(K, 0);
  for (int a = 1; a < K; ++a) start[a] = start[a - 1] + counts[a - 1];
  int fallback = -1;
  for (int a = 0; a < K; ++a)
    if (counts[a] > 0 && fallback < 0) fallback = a;
  for (auto& c : vocab.constants) {
    auto it = d.constant_atom.find(c);
    int a = it != d.constant_atom.end() ? it->second : fallback;
    if (a < 0 || counts[a] == 0)
      throw std::invalid_argument("world_from_lattice_point: empty atom for constant " + c);
    w.constant_denotation[c] = static_cast<int>(start[a]);
  }
  return w;
}

}  // namespace rw
