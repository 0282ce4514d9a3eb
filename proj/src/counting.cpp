#include "rw/counting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rw/translate.hpp"

namespace rw {

namespace {

double enumeration_states(const Vocabulary& vocab, int N, bool with_relations) {
  double states = std::pow(static_cast<double>(vocab.atom_count()), N);
  states *= std::pow(static_cast<double>(N), vocab.constants.size());
  if (with_relations) {
    for (auto& r : vocab.relations)
      states *= std::pow(2.0, std::pow(static_cast<double>(N), r.second));
  }
  return states;
}

double aggregation_groups(const Vocabulary& vocab, int N) {
  // compositions of N into K parts, times constant patterns (small)
  double g = 1;
  int K = vocab.atom_count();
  for (int i = 1; i < K; ++i) g *= static_cast<double>(N + i) / i;
  double cpat = std::pow(static_cast<double>(K + 2), vocab.constants.size());
  return g * cpat * std::max(1.0, static_cast<double>(N));
}

// All set partitions of {0..n-1} as class-index vectors (restricted growth).
void enum_partitions(int n, std::vector<std::vector<int>>* out) {
  std::vector<int> cls(n, 0);
  std::function<void(int, int)> rec = [&](int i, int maxc) {
    if (i == n) {
      out->push_back(cls);
      return;
    }
    for (int c = 0; c <= maxc; ++c) {
      cls[i] = c;
      rec(i + 1, std::max(maxc, c + 1));
    }
  };
  if (n == 0) {
    out->push_back({});
    return;
  }
  rec(0, 0);
}

struct Prepared {
  FormulaPtr exact;    // translated, tau-substituted
  bool relations = false;
  bool equality = false;
};

Prepared prepare(const FormulaPtr& f, const ToleranceVector& tau, const Vocabulary& vocab) {
  Prepared p;
  p.exact = substitute_tau(to_exact(f), tau);
  p.relations = mentions_relation(f, vocab);
  p.equality = mentions_term_equality(f);
  return p;
}

CountReport count_enumerate(const Vocabulary& vocab, int N, const Prepared& f,
                            const CountOptions& opt) {
  bool with_rel = f.relations;
  double states = enumeration_states(vocab, N, with_rel);
  if (states > static_cast<double>(opt.state_budget))
    throw CapacityError("enumeration backend: state space " + std::to_string(states) +
                        " exceeds budget");
  int K = vocab.atom_count();
  int C = static_cast<int>(vocab.constants.size());

  CountReport rep;
  rep.relations_materialized = with_rel;
  rep.backend = "enumerate";
  rep.has_histogram = opt.want_histogram;

  World w;
  w.N = N;
  w.atom_of.assign(N, 0);

  // relation tuple universes
  std::vector<std::string> rel_names;
  std::vector<std::vector<std::vector<int>>> rel_universe;
  if (with_rel) {
    for (auto& r : vocab.relations) {
      rel_names.push_back(r.first);
      std::vector<std::vector<int>> tuples;
      std::vector<int> t(r.second, 0);
      for (;;) {
        tuples.push_back(t);
        int i = 0;
        while (i < r.second) {
          if (++t[i] < N) break;
          t[i] = 0;
          ++i;
        }
        if (i == r.second) break;
      }
      if (tuples.size() > 24) throw CapacityError("relation universe too large to materialize");
      rel_universe.push_back(std::move(tuples));
    }
  }

  std::function<void(size_t, BigInt*)> count_relations = [&](size_t ri, BigInt* acc) {
    if (ri == rel_names.size()) {
      Valuation v;
      if (eval_exact(w, v, f.exact, vocab)) *acc += BigInt(1);
      return;
    }
    const auto& universe = rel_universe[ri];
    unsigned long long m = 1ULL << universe.size();
    for (unsigned long long bits = 0; bits < m; ++bits) {
      std::set<std::vector<int>> tuples;
      for (size_t b = 0; b < universe.size(); ++b)
        if (bits & (1ULL << b)) tuples.insert(universe[b]);
      w.relation_tuples[rel_names[ri]] = std::move(tuples);
      count_relations(ri + 1, acc);
    }
  };

  // odometer over atom assignments
  for (;;) {
    std::vector<Rational> u = w.pi(vocab);
    BigInt match;
    // odometer over constant placements
    std::vector<int> cpos(C, 0);
    for (;;) {
      for (int i = 0; i < C; ++i) w.constant_denotation[vocab.constants[i]] = cpos[i];
      if (with_rel) {
        count_relations(0, &match);
      } else {
        Valuation v;
        if (eval_exact(w, v, f.exact, vocab)) match += BigInt(1);
      }
      int i = 0;
      while (i < C) {
        if (++cpos[i] < N) break;
        cpos[i] = 0;
        ++i;
      }
      if (i == C) break;
    }
    if (!match.is_zero()) {
      rep.total += match;
      if (opt.want_histogram) rep.histogram[u] += match;
    }
    int i = 0;
    while (i < N) {
      if (++w.atom_of[i] < K) break;
      w.atom_of[i] = 0;
      ++i;
    }
    if (i == N) break;
  }
  return rep;
}

CountReport count_aggregate(const Vocabulary& vocab, int N, const Prepared& f,
                            const CountOptions& opt) {
  if (f.relations)
    throw CapacityError("aggregated backend requires relation-free formulas");
  if (aggregation_groups(vocab, N) > static_cast<double>(opt.state_budget))
    throw CapacityError("aggregated backend: group count exceeds budget");
  int K = vocab.atom_count();
  int C = static_cast<int>(vocab.constants.size());

  CountReport rep;
  rep.backend = "aggregate";
  rep.has_histogram = opt.want_histogram;

  std::vector<std::vector<int>> partitions;
  enum_partitions(C, &partitions);

  std::vector<int> counts(K, 0);
  std::vector<std::uint64_t> parts(K);
  std::function<void(int, int)> rec = [&](int idx, int remaining) {
    if (idx == K - 1) {
      counts[idx] = remaining;
      // block start offsets per atom
      std::vector<int> start(K, 0);
      for (int a = 1; a < K; ++a) start[a] = start[a - 1] + counts[a - 1];
      World w;
      w.N = N;
      w.atom_of.assign(N, 0);
      for (int a = 0; a < K; ++a)
        for (int e = start[a]; e < start[a] + counts[a]; ++e) w.atom_of[e] = a;
      for (int a = 0; a < K; ++a) parts[a] = static_cast<std::uint64_t>(counts[a]);
      BigInt base = BigInt::multinomial(parts);

      BigInt group_total;
      // constants: equality partition + atom per class
      for (const auto& cls : partitions) {
        int nclasses = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
        std::vector<int> class_atom(nclasses, 0);
        std::function<void(int)> assign = [&](int ci) {
          if (ci == nclasses) {
            // capacity check + placement count
            std::vector<int> per_atom(K, 0);
            for (int a : class_atom) ++per_atom[a];
            BigInt ways(1);
            bool ok = true;
            for (int a = 0; a < K; ++a) {
              if (per_atom[a] > counts[a]) {
                ok = false;
                break;
              }
              ways *= BigInt::falling_factorial(counts[a], per_atom[a]);
            }
            if (!ok || ways.is_zero()) return;
            // representative placement: class j of atom a gets the j'th
            // element of a's block (distinct elements within the atom)
            std::vector<int> used(K, 0);
            std::vector<int> class_elem(nclasses, 0);
            for (int j = 0; j < nclasses; ++j) {
              int a = class_atom[j];
              class_elem[j] = start[a] + used[a];
              ++used[a];
            }
            for (int i = 0; i < C; ++i)
              w.constant_denotation[vocab.constants[i]] = class_elem[cls[i]];
            Valuation v;
            if (eval_exact(w, v, f.exact, vocab)) group_total += ways;
            return;
          }
          for (int a = 0; a < K; ++a) {
            if (counts[a] == 0) continue;
            class_atom[ci] = a;
            assign(ci + 1);
          }
        };
        if (nclasses == 0) {
          Valuation v;
          if (eval_exact(w, v, f.exact, vocab)) group_total += BigInt(1);
        } else {
          assign(0);
        }
      }
      if (!group_total.is_zero()) {
        BigInt contribution = base * group_total;
        rep.total += contribution;
        if (opt.want_histogram) rep.histogram[w.pi(vocab)] += contribution;
      }
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[idx] = c;
      rec(idx + 1, remaining - c);
    }
  };
  rec(0, N);
  return rep;
}

}  // namespace

CountReport count_worlds(const Vocabulary& vocab, int N, const ToleranceVector& tau,
                         const FormulaPtr& f, const CountOptions& opt) {
  Prepared p = prepare(f, tau, vocab);
  switch (opt.backend) {
    case CountOptions::Backend::Enumerate:
      return count_enumerate(vocab, N, p, opt);
    case CountOptions::Backend::Aggregate:
      return count_aggregate(vocab, N, p, opt);
    case CountOptions::Backend::Auto: {
      if (!p.relations &&
          aggregation_groups(vocab, N) < enumeration_states(vocab, N, p.relations))
        return count_aggregate(vocab, N, p, opt);
      return count_enumerate(vocab, N, p, opt);
    }
  }
  throw std::logic_error("count_worlds: bad backend");
}

std::optional<Rational> pr_n(const Vocabulary& vocab, int N, const ToleranceVector& tau,
                             const FormulaPtr& phi, const FormulaPtr& kb,
                             const CountOptions& opt) {
  CountOptions o = opt;
  o.want_histogram = false;
  CountReport den = count_worlds(vocab, N, tau, kb, o);
  if (den.total.is_zero()) return std::nullopt;
  CountReport num = count_worlds(vocab, N, tau, f_and(phi, kb), o);
  // If one count materialized relations and the other did not, scale by h(N).
  if (num.relations_materialized != den.relations_materialized) {
    BigInt h(1);
    for (auto& r : vocab.relations) {
      double tuples = std::pow(static_cast<double>(N), r.second);
      h *= BigInt::pow(BigInt(2), static_cast<std::uint64_t>(tuples));
    }
    if (!num.relations_materialized) num.total *= h;
    if (!den.relations_materialized) den.total *= h;
  }
  return Rational(num.total, den.total);
}

std::vector<PrPoint> pr_sequence(const Vocabulary& vocab, const std::vector<int>& Ns,
                                 const ToleranceVector& tau, const FormulaPtr& phi,
                                 const FormulaPtr& kb, const CountOptions& opt) {
  std::vector<PrPoint> out;
  std::optional<Rational> inf, sup;
  for (int N : Ns) {
    PrPoint pt;
    pt.N = N;
    pt.value = pr_n(vocab, N, tau, phi, kb, opt);
    if (pt.value) {
      if (!inf || *pt.value < *inf) inf = pt.value;
      if (!sup || *pt.value > *sup) sup = pt.value;
    }
    pt.running_inf = inf;
    pt.running_sup = sup;
    out.push_back(pt);
  }
  return out;
}

BigInt closed_form_count(const std::vector<Rational>& u, int N, const Vocabulary& vocab) {
  if (static_cast<int>(u.size()) != vocab.atom_count())
    throw std::invalid_argument("closed_form_count: wrong dimension");
  std::vector<std::uint64_t> parts;
  Rational total(0);
  for (auto& ui : u) {
    Rational scaled = ui * Rational(N);
    if (scaled.den() != BigInt(1) || scaled.sign() < 0)
      throw std::invalid_argument("closed_form_count: u is not a 1/N lattice point");
    parts.push_back(static_cast<std::uint64_t>(scaled.num().to_int64()));
    total += ui;
  }
  if (total != Rational(1))
    throw std::invalid_argument("closed_form_count: coordinates must sum to 1");
  BigInt r = BigInt::multinomial(parts);
  r *= BigInt::pow(BigInt(N), vocab.constants.size());
  for (auto& rel : vocab.relations) {
    double tuples = std::pow(static_cast<double>(N), rel.second);
    if (tuples > 4096) throw CapacityError("closed_form_count: relation factor too large");
    r *= BigInt::pow(BigInt(2), static_cast<std::uint64_t>(tuples));
  }
  return r;
}

std::string histogram_csv(const CountReport& report, int K) {
  std::string out;
  for (int i = 1; i <= K; ++i) out += "u" + std::to_string(i) + ",";
  out += "count\n";
  for (auto& [u, c] : report.histogram) {
    for (auto& ui : u) out += ui.to_string() + ",";
    out += c.to_string() + "\n";
  }
  return out;
}

}  // namespace rw
