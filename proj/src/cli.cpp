#include "rw/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rw/belief.hpp"
#include "rw/canonical.hpp"
#include "rw/constraint_ops.hpp"
#include "rw/counting.hpp"
#include "rw/defaults.hpp"
#include "rw/parser.hpp"
#include "rw/translate.hpp"

namespace rw {

namespace {

using njson = nlohmann::ordered_json;

struct UserError : std::runtime_error {
  explicit UserError(const std::string& m) : std::runtime_error(m) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --tau "1=0.05,2=0.01"
ToleranceVector parse_tau_spec(const std::string& spec) {
  ToleranceVector tau;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    size_t eq = part.find('=');
    if (eq == std::string::npos) throw UserError("bad --tau entry '" + part + "' (want i=value)");
    int idx = std::stoi(part.substr(0, eq));
    tau.values[idx] = Rational::parse(part.substr(eq + 1));
  }
  tau.validate_positive();
  return tau;
}

std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stoi(part));
  return out;
}

ToleranceVector fill_tau(const SourceFile& file, const FormulaPtr& query,
                         const std::string& tau_spec, const std::string& tau_all) {
  std::set<int> idx;
  for (auto& f : file.kb) collect_tolerance_indices(f, &idx);
  if (query) collect_tolerance_indices(query, &idx);
  ToleranceVector tau;
  if (!tau_all.empty()) {
    Rational v = Rational::parse(tau_all);
    for (int i : idx) tau.values[i] = v;
  }
  if (!tau_spec.empty()) {
    ToleranceVector given = parse_tau_spec(tau_spec);
    for (auto& [i, v] : given.values) tau.values[i] = v;
  }
  for (int i : idx)
    if (!tau.has(i))
      throw UserError("tolerance index " + std::to_string(i) +
                      " has no value; pass --tau or --tau-all");
  tau.validate_positive();
  return tau;
}

FormulaPtr pick_query(const SourceFile& file, const std::string& query_text) {
  if (!query_text.empty()) return parse_formula(query_text, file.vocab);
  if (!file.queries.empty()) return file.queries[0];
  throw UserError("no query: pass --query or add a query block to the file");
}

njson tau_json(const ToleranceVector& tau) {
  njson j = njson::object();
  for (auto& [i, v] : tau.values) j[std::to_string(i)] = v.to_double();
  return j;
}

njson config_json(const BeliefConfig& cfg) {
  njson j;
  j["zero_threshold"] = cfg.constraint.zero_threshold;
  j["safety_distance"] = cfg.constraint.safety_distance;
  j["cluster_radius"] = cfg.constraint.maxent.cluster_radius;
  j["tie_tol"] = cfg.constraint.maxent.tie_tol;
  j["seed"] = cfg.constraint.maxent.solve.seed;
  j["probe_spread_tol"] = cfg.probe_spread_tol;
  njson probes = njson::array();
  for (auto& p : cfg.tau_probes) probes.push_back(p.to_double());
  j["tau_probes"] = probes;
  return j;
}

njson belief_json(const BeliefResult& r, const FormulaPtr& query, const BeliefConfig& cfg) {
  njson j;
  j["query"] = print(query);
  j["status"] = to_string(r.status);
  j["query_class"] = r.query_kind;
  if (r.value) j["value"] = *r.value;
  if (r.interval) j["interval"] = njson::array({r.interval->first, r.interval->second});
  njson pts = njson::array();
  for (auto& u : r.maxent_points) {
    njson p = njson::array();
    for (int i = 0; i < u.size(); ++i) p.push_back(u(i));
    pts.push_back(p);
  }
  j["maxent_point"] = pts;
  j["entropy"] = r.entropy;
  njson flags;
  flags["essentially_positive"] = r.essentially_positive;
  flags["unique"] = r.unique;
  if (r.stable)
    flags["stable"] = *r.stable;
  else
    flags["stable"] = nullptr;
  flags["uniqueness"] = r.uniqueness;
  j["flags"] = flags;
  if (!r.reason.empty()) j["reason"] = r.reason;
  njson probes = njson::array();
  for (auto& row : r.probes.rows) {
    njson pr;
    njson t = njson::object();
    for (auto& [i, v] : row.tau) t[std::to_string(i)] = v.to_double();
    pr["tau"] = t;
    pr["status"] = row.status;
    if (row.value) pr["value"] = *row.value;
    probes.push_back(pr);
  }
  j["probes"] = probes;
  if (!r.probes.rows.empty()) j["probe_spread"] = r.probes.spread;
  njson oracle = njson::array();
  for (auto& row : r.oracle) {
    njson o;
    o["N"] = row.N;
    if (row.value) {
      o["value"] = row.value->to_double();
      o["exact"] = row.value->to_string();
    }
    oracle.push_back(o);
  }
  j["oracle"] = oracle;
  if (!r.direct_inference_bounds.empty()) {
    njson di = njson::array();
    for (auto& [lo, hi] : r.direct_inference_bounds) di.push_back(njson::array({lo, hi}));
    j["direct_inference_bounds"] = di;
    if (r.direct_inference_value) j["direct_inference_value"] = *r.direct_inference_value;
  }
  j["config"] = config_json(cfg);
  return j;
}

int cmd_check(const SourceFile& file, std::ostream& out) {
  out << "vocabulary: " << file.vocab.unary_predicates.size() << " unary predicate(s), "
      << file.vocab.constants.size() << " constant(s), " << file.vocab.relations.size()
      << " relation(s); " << file.vocab.atom_count() << " atoms\n";
  out << "kb: " << file.kb.size() << " formula(s); query block: " << file.queries.size()
      << " formula(s)\n";
  for (auto& w : file.warnings) out << "warning: " << w << "\n";
  FormulaPtr kb = file.kb_conjunction();
  EventualConsistency ec = check_eventual_consistency(
      kb, file.vocab, {Rational(1, 10), Rational(1, 100), Rational(1, 1000)});
  for (auto& p : ec.probes)
    out << "tau=" << p.tau.to_string() << ": " << (p.feasible ? "satisfiable" : "UNSATISFIABLE")
        << "\n";
  if (ec.lattice_N) {
    out << "lattice witness at N=" << *ec.lattice_N << ": (";
    for (size_t i = 0; i < ec.lattice_point->size(); ++i) {
      if (i) out << ", ";
      out << (*ec.lattice_point)[i].to_string();
    }
    out << ")\n";
  } else if (!ec.note.empty()) {
    out << "note: " << ec.note << "\n";
  }
  out << (ec.feasible_at_all_probes ? "eventual consistency: plausible"
                                    : "eventual consistency: FAILS at some probe")
      << "\n";
  return ec.feasible_at_all_probes ? 0 : 1;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"random-worlds degrees of belief engine"};
  app.require_subcommand(1);

  std::string input, query_text, tau_spec, tau_all, n_list = "4", backend = "auto",
                     scales_spec;
  bool want_json = false, histogram = false;
  std::uint64_t seed = 0;
  std::string oracle_list;
  long long budget = 10'000'000;

  auto add_common = [&](CLI::App* sub, bool with_query) {
    sub->add_option("file", input, "input .rwkb file")->required();
    if (with_query) sub->add_option("--query", query_text, "query formula (overrides the file)");
    sub->add_option("--tau", tau_spec, "tolerances like 1=0.05,2=0.01");
    sub->add_option("--tau-all", tau_all, "one tolerance for every index");
    sub->add_option("--seed", seed, "solver seed (default 0)");
    sub->add_flag("--json", want_json, "machine-readable JSON output");
  };

  CLI::App* check = app.add_subcommand("check", "parse and run consistency diagnostics");
  add_common(check, false);
  CLI::App* canon = app.add_subcommand("canon", "print the canonical form");
  add_common(canon, false);
  CLI::App* constraints = app.add_subcommand("constraints", "print Gamma(KB)");
  add_common(constraints, false);
  CLI::App* maxent_cmd = app.add_subcommand("maxent", "maximum-entropy point(s) of the space");
  add_common(maxent_cmd, false);
  CLI::App* believe_cmd = app.add_subcommand("believe", "degree of belief for a query");
  add_common(believe_cmd, true);
  believe_cmd->add_option("--oracle-N", oracle_list, "cross-check sizes like 50,100");
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "exact Pr_N via world counting");
  add_common(oracle_cmd, true);
  oracle_cmd->add_option("--N", n_list, "domain sizes like 4,8,16");
  oracle_cmd->add_flag("--histogram", histogram, "emit the pi(W) histogram CSV");
  oracle_cmd->add_option("--backend", backend, "auto | enum | agg");
  oracle_cmd->add_option("--budget", budget, "state budget");
  CLI::App* probe_cmd = app.add_subcommand("probe", "tau-grid nonrobustness probe");
  add_common(probe_cmd, true);
  probe_cmd->add_option("--scales", scales_spec, "probe scales like 0.1,0.025");
  CLI::App* defaults_cmd = app.add_subcommand("defaults", "ME-plausible default entailment");
  defaults_cmd->add_option("rules", input, "rules file")->required();
  defaults_cmd->add_option("--query", query_text, "query rule like 'Bird -> Fly'")->required();
  defaults_cmd->add_flag("--json", want_json, "machine-readable JSON output");
  defaults_cmd->add_option("--seed", seed, "solver seed");

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (defaults_cmd->parsed()) {
      DefaultRule query;
      DefaultRuleSet rules = parse_rules_with_query(read_file(input), query_text, &query);
      BeliefConfig cfg;
      cfg.constraint.maxent.solve.seed = seed;
      MEPlausibleResult r = me_plausible(rules, query, cfg);
      auto verdict_str = [](MEVerdict v) {
        switch (v) {
          case MEVerdict::True: return "TRUE";
          case MEVerdict::False: return "FALSE";
          case MEVerdict::Undefined: return "UNDEFINED";
          case MEVerdict::Inconclusive: return "INCONCLUSIVE";
        }
        return "?";
      };
      if (want_json) {
        njson j;
        j["query"] = query_text;
        j["verdict"] = verdict_str(r.verdict);
        njson trace = njson::array();
        for (auto& t : r.trace) {
          njson row;
          row["tau"] = t.tau.to_double();
          row["status"] = t.status;
          if (t.value) row["value"] = *t.value;
          trace.push_back(row);
        }
        j["trace"] = trace;
        j["fitted_slope"] = r.fitted_slope;
        if (!r.note.empty()) j["note"] = r.note;
        out << j.dump(2) << "\n";
      } else {
        out << "verdict: " << verdict_str(r.verdict) << "\n";
        for (auto& t : r.trace) {
          out << "  tau=" << t.tau.to_string() << " " << t.status;
          if (t.value) out << " value=" << *t.value;
          out << "\n";
        }
        if (!r.note.empty()) out << "note: " << r.note << "\n";
      }
      return 0;
    }

    SourceFile file = parse(read_file(input));
    for (auto& w : file.warnings)
      if (!want_json) err << "warning: " << w << "\n";

    if (check->parsed()) return cmd_check(file, out);

    if (canon->parsed()) {
      CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
      out << print(canonical_to_formula(cf, file.vocab)) << "\n";
      return 0;
    }

    if (constraints->parsed()) {
      CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
      ConstraintFormula g = gamma(cf);
      if (!tau_spec.empty() || !tau_all.empty()) {
        ToleranceVector tau = fill_tau(file, nullptr, tau_spec, tau_all);
        out << print_instantiated(instantiate(g, tau));
      } else {
        out << print_symbolic(g);
      }
      return 0;
    }

    if (maxent_cmd->parsed()) {
      CanonicalForm cf = to_canonical(file.kb_conjunction(), file.vocab);
      ConstraintFormula g = gamma(cf);
      InstConstraintFormula inst;
      if (!tau_spec.empty() || !tau_all.empty()) {
        ToleranceVector tau = fill_tau(file, nullptr, tau_spec, tau_all);
        inst = instantiate(g, tau);
      } else {
        ToleranceVector zero;
        std::set<int> idx;
        for (auto& f : file.kb) collect_tolerance_indices(f, &idx);
        for (int i : idx) zero.values[i] = Rational(0);
        inst = instantiate(g, zero);
      }
      MaxEntOptions mopt;
      mopt.solve.seed = seed;
      MaxEntResult me = maximize(region_from_instantiated(inst), mopt);
      if (want_json) {
        njson j;
        j["feasible"] = me.feasible;
        njson pts = njson::array();
        for (auto& m : me.maxima) {
          njson p = njson::array();
          for (int i = 0; i < m.u.size(); ++i) p.push_back(m.u(i));
          pts.push_back(p);
        }
        j["points"] = pts;
        j["entropy"] = me.entropy;
        j["unique"] = me.uniqueness == Uniqueness::ProvenUnique        ? "proven-unique"
                      : me.uniqueness == Uniqueness::HeuristicallyUnique ? "heuristically-unique"
                                                                         : "multiple";
        j["residuals"] = {{"kkt", me.kkt_residual}};
        j["seed"] = seed;
        out << j.dump(2) << "\n";
      } else {
        if (!me.feasible) {
          out << "infeasible\n";
          return 2;
        }
        out << "entropy " << me.entropy << ", " << me.maxima.size() << " maximum(s)\n";
        for (auto& m : me.maxima) {
          out << "  (";
          for (int i = 0; i < m.u.size(); ++i) {
            if (i) out << ", ";
            out << m.u(i);
          }
          out << ")\n";
        }
      }
      return 0;
    }

    if (believe_cmd->parsed()) {
      FormulaPtr query = pick_query(file, query_text);
      BeliefConfig cfg;
      cfg.constraint.maxent.solve.seed = seed;
      if (!tau_spec.empty() || !tau_all.empty())
        cfg.fixed_tau = fill_tau(file, query, tau_spec, tau_all);
      if (!oracle_list.empty()) cfg.oracle_Ns = parse_int_list(oracle_list);
      BeliefResult r = believe(query, file.kb, file.vocab, cfg);
      if (want_json) {
        out << belief_json(r, query, cfg).dump(2) << "\n";
      } else {
        out << "status: " << to_string(r.status) << " (" << r.query_kind << " query)\n";
        if (r.value) out << "value: " << *r.value << "\n";
        if (r.interval)
          out << "interval: [" << r.interval->first << ", " << r.interval->second << "]\n";
        if (!r.reason.empty()) out << "reason: " << r.reason << "\n";
        for (auto& row : r.probes.rows) {
          out << "  probe";
          for (auto& [i, v] : row.tau) out << " tau" << i << "=" << v.to_string();
          out << ": " << row.status;
          if (row.value) out << " value=" << *row.value;
          out << "\n";
        }
        for (auto& o : r.oracle) {
          out << "  oracle N=" << o.N << ": ";
          if (o.value)
            out << o.value->to_string() << " (" << o.value->to_double() << ")";
          else
            out << "undefined";
          out << "\n";
        }
      }
      return 0;
    }

    if (oracle_cmd->parsed()) {
      FormulaPtr query = file.queries.empty() && query_text.empty()
                             ? f_true()
                             : pick_query(file, query_text);
      ToleranceVector tau = fill_tau(file, query, tau_spec, tau_all);
      CountOptions copt;
      copt.state_budget = budget;
      if (backend == "enum") copt.backend = CountOptions::Backend::Enumerate;
      else if (backend == "agg") copt.backend = CountOptions::Backend::Aggregate;
      else if (backend != "auto") throw UserError("bad --backend (want auto|enum|agg)");
      std::vector<int> Ns = parse_int_list(n_list);
      if (histogram) {
        copt.want_histogram = true;
        CountReport rep = count_worlds(file.vocab, Ns.at(0), tau, file.kb_conjunction(), copt);
        out << histogram_csv(rep, file.vocab.atom_count());
        return 0;
      }
      auto seq = pr_sequence(file.vocab, Ns, tau, query, file.kb_conjunction(), copt);
      if (want_json) {
        njson j;
        j["query"] = print(query);
        j["tau"] = tau_json(tau);
        njson rows = njson::array();
        for (auto& p : seq) {
          njson row;
          row["N"] = p.N;
          if (p.value) {
            row["value"] = p.value->to_double();
            row["exact"] = p.value->to_string();
          }
          if (p.running_inf) row["running_inf"] = p.running_inf->to_double();
          if (p.running_sup) row["running_sup"] = p.running_sup->to_double();
          rows.push_back(row);
        }
        j["sequence"] = rows;
        out << j.dump(2) << "\n";
      } else {
        for (auto& p : seq) {
          out << "N=" << p.N << ": ";
          if (p.value)
            out << p.value->to_string() << " (" << p.value->to_double() << ")";
          else
            out << "undefined";
          out << "\n";
        }
      }
      return 0;
    }

    if (probe_cmd->parsed()) {
      FormulaPtr query = pick_query(file, query_text);
      BeliefConfig cfg;
      cfg.constraint.maxent.solve.seed = seed;
      if (!scales_spec.empty()) {
        cfg.probe_scales.clear();
        std::stringstream ss(scales_spec);
        std::string part;
        while (std::getline(ss, part, ',')) cfg.probe_scales.push_back(Rational::parse(part));
      }
      ProbeReport rep = probe_tau(query, file.kb, file.vocab, cfg);
      if (want_json) {
        njson j;
        j["query"] = print(query);
        njson rows = njson::array();
        for (auto& row : rep.rows) {
          njson r;
          njson t = njson::object();
          for (auto& [i, v] : row.tau) t[std::to_string(i)] = v.to_double();
          r["tau"] = t;
          r["status"] = row.status;
          if (row.value) r["value"] = *row.value;
          rows.push_back(r);
        }
        j["rows"] = rows;
        j["spread"] = rep.spread;
        out << j.dump(2) << "\n";
      } else {
        for (auto& row : rep.rows) {
          out << "probe";
          for (auto& [i, v] : row.tau) out << " tau" << i << "=" << v.to_string();
          out << ": " << row.status;
          if (row.value) out << " value=" << *row.value;
          out << "\n";
        }
        out << "spread: " << rep.spread << "\n";
      }
      return 0;
    }
  } catch (const UserError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CanonicalError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 1;
}

}  // namespace rw
