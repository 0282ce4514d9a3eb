#include "rw/defaults.hpp"

#include <algorithm>
#include <cctype>

#include "rw/atoms.hpp"
#include "rw/canonical.hpp"
#include "rw/descriptions.hpp"

namespace rw {

namespace {

struct RuleParser {
  const std::string& src;
  size_t pos = 0;
  std::vector<std::string> preds;

  explicit RuleParser(const std::string& s) : src(s) {}

  void skip() {
    for (;;) {
      while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
      if (pos < src.size() && src[pos] == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
  }

  bool eat(const std::string& tok) {
    skip();
    if (src.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  bool peek(const std::string& tok) {
    skip();
    return src.compare(pos, tok.size(), tok) == 0;
  }

  std::string ident() {
    skip();
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    if (start == pos) throw std::runtime_error("rules: expected an identifier at offset " +
                                               std::to_string(start));
    std::string name = src.substr(start, pos - start);
    if (std::find(preds.begin(), preds.end(), name) == preds.end()) preds.push_back(name);
    return name;
  }

  FormulaPtr prop() {
    FormulaPtr f = conj();
    while (peek("|") && !peek("||")) {
      eat("|");
      f = f_or(f, conj());
    }
    return f;
  }

  FormulaPtr conj() {
    FormulaPtr f = unary();
    while (eat("&")) f = f_and(f, unary());
    return f;
  }

  FormulaPtr unary() {
    if (eat("!")) return f_not(unary());
    if (eat("(")) {
      FormulaPtr f = prop();
      if (!eat(")")) throw std::runtime_error("rules: expected ')'");
      return f;
    }
    skip();
    if (src.compare(pos, 4, "true") == 0) {
      pos += 4;
      return f_true();
    }
    if (src.compare(pos, 5, "false") == 0) {
      pos += 5;
      return f_false();
    }
    return f_pred(ident(), {Term{false, "x"}});
  }

  DefaultRule rule() {
    DefaultRule r;
    r.premise = prop();
    if (eat("=>")) {
      r.strict = true;
    } else if (eat("->")) {
      r.strict = false;
    } else {
      throw std::runtime_error("rules: expected '->' or '=>'");
    }
    r.conclusion = prop();
    if (!eat(";")) throw std::runtime_error("rules: expected ';'");
    return r;
  }

  bool at_end() {
    skip();
    return pos >= src.size();
  }
};

}  // namespace

DefaultRuleSet parse_rules(const std::string& text) {
  RuleParser p(text);
  DefaultRuleSet out;
  while (!p.at_end()) out.rules.push_back(p.rule());
  out.vocab.unary_predicates = p.preds;
  return out;
}

DefaultRuleSet parse_rules_with_query(const std::string& text, const std::string& query,
                                      DefaultRule* query_rule) {
  RuleParser p(text);
  DefaultRuleSet out;
  while (!p.at_end()) out.rules.push_back(p.rule());
  std::string q = query;
  if (q.find(';') == std::string::npos) q += ";";
  RuleParser pq(q);
  pq.preds = p.preds;
  *query_rule = pq.rule();
  out.vocab.unary_predicates = pq.preds;
  return out;
}

FormulaPtr defaults_translate(const DefaultRuleSet& rules) {
  std::vector<FormulaPtr> parts;
  for (auto& r : rules.rules) {
    if (r.strict) {
      parts.push_back(f_forall("x", f_implies(r.premise, r.conclusion)));
    } else {
      // all defaults share tolerance index 1 (a single epsilon)
      parts.push_back(f_compare(p_cond_prop(r.conclusion, r.premise, {"x"}), CmpOp::ApproxEq, 1,
                                p_const(Rational(1))));
    }
  }
  return f_and_all(parts);
}

MEPlausibleResult me_plausible(const DefaultRuleSet& rules, const DefaultRule& query,
                               const BeliefConfig& cfg) {
  MEPlausibleResult out;
  FormulaPtr kb = defaults_translate(rules);
  const Vocabulary& vocab = rules.vocab;
  CanonicalForm cf = to_canonical(kb, vocab);
  ConstraintFormula g = gamma(cf);

  std::vector<Rational> taus = {Rational(1, 10), Rational(1, 100), Rational(1, 1000),
                                Rational(1, 10000)};
  int undefined_count = 0, solver_failures = 0;
  for (auto& t : taus) {
    METrace row;
    row.tau = t;
    ToleranceVector tau;
    tau.values[1] = t;
    try {
      RegionDescriptor region = solution_space(g, tau);
      MaxEntResult me = maximize(region, cfg.constraint.maxent);
      if (!me.feasible || me.maxima.empty()) {
        row.status = "infeasible";
        ++solver_failures;
      } else {
        const VectorXd& v = me.maxima[0].u;
        double fb = f_formula(query.premise, v, vocab);
        if (fb <= cfg.constraint.zero_threshold) {
          row.status = "premise-inconsistent";
          ++undefined_count;
        } else {
          row.status = "ok";
          row.value = f_formula(f_and(query.conclusion, query.premise), v, vocab) / fb;
        }
      }
    } catch (const std::exception&) {
      row.status = "solver-failure";
      ++solver_failures;
    }
    out.trace.push_back(row);
  }

  if (undefined_count == static_cast<int>(taus.size())) {
    out.verdict = MEVerdict::Undefined;
    out.note = "the premise is inconsistent with the rules at every probed tolerance";
    return out;
  }
  if (solver_failures > 0) {
    out.verdict = MEVerdict::Inconclusive;
    out.note = "solver failure at some probed tolerance";
    return out;
  }
  std::vector<double> vals;
  for (auto& r : out.trace) {
    if (!r.value) {
      out.verdict = MEVerdict::Inconclusive;
      out.note = "value undefined at tau=" + r.tau.to_string();
      return out;
    }
    vals.push_back(*r.value);
  }
  // fitted-slope criterion: with c from the second-to-last point, the final
  // deficit 1-v must shrink at least proportionally to tau (slack 1.5);
  // almost-converged traces (deficit below 1e-9) pass outright.
  size_t m = vals.size();
  double t_prev = taus[m - 2].to_double(), t_last = taus[m - 1].to_double();
  double d_prev = 1.0 - vals[m - 2], d_last = 1.0 - vals[m - 1];
  out.fitted_slope = d_prev / t_prev;
  bool monotone = true;
  for (size_t i = 1; i < m; ++i)
    if (vals[i] < vals[i - 1] - 1e-9) monotone = false;
  bool shrinks = d_last <= out.fitted_slope * t_last * 1.5 + 1e-9;
  if (monotone && (d_last <= 1e-9 || (shrinks && vals[m - 1] > 0.5))) {
    out.verdict = MEVerdict::True;
  } else {
    out.verdict = MEVerdict::False;
  }
  return out;
}

}  // namespace rw
