#include "rw/parser.hpp"

#include <cctype>
#include <map>
#include <set>

namespace rw {

namespace {

enum class Tok {
  End, Ident, Number,
  LBrace, RBrace, LParen, RParen, LBracket, RBracket,
  Semi, Comma, Slash, Underscore,
  Bang, Amp, Pipe, DblPipe, Arrow, DblArrow,
  ApproxEq, ApproxLeq, ApproxGeq,
  Eq, Leq, Lt, Geq, Gt,
  Plus, Minus, Star,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(&src) { next(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    next();
    return t;
  }

 private:
  const std::string* src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;

  char cur() const { return pos_ < src_->size() ? (*src_)[pos_] : '\0'; }
  char ahead(int n) const { return pos_ + n < src_->size() ? (*src_)[pos_ + n] : '\0'; }

  void advance() {
    if (cur() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void next() {
    for (;;) {
      while (std::isspace(static_cast<unsigned char>(cur()))) advance();
      if (cur() == '#') {
        while (cur() && cur() != '\n') advance();
        continue;
      }
      break;
    }
    tok_.line = line_;
    tok_.col = col_;
    tok_.text.clear();
    char c = cur();
    if (!c) {
      tok_.kind = Tok::End;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
        tok_.text += cur();
        advance();
      }
      tok_.kind = Tok::Ident;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (std::isdigit(static_cast<unsigned char>(cur()))) {
        tok_.text += cur();
        advance();
      }
      if (cur() == '.' && std::isdigit(static_cast<unsigned char>(ahead(1)))) {
        tok_.text += '.';
        advance();
        while (std::isdigit(static_cast<unsigned char>(cur()))) {
          tok_.text += cur();
          advance();
        }
      }
      tok_.kind = Tok::Number;
      return;
    }
    auto two = [&](char a, char b) { return c == a && ahead(1) == b; };
    if (two('|', '|')) { tok_.kind = Tok::DblPipe; advance(); advance(); return; }
    if (two('-', '>')) { tok_.kind = Tok::Arrow; advance(); advance(); return; }
    if (two('=', '>')) { tok_.kind = Tok::DblArrow; advance(); advance(); return; }
    if (two('~', '=')) { tok_.kind = Tok::ApproxEq; advance(); advance(); return; }
    if (two('<', '~')) { tok_.kind = Tok::ApproxLeq; advance(); advance(); return; }
    if (two('>', '~')) { tok_.kind = Tok::ApproxGeq; advance(); advance(); return; }
    if (two('<', '=')) { tok_.kind = Tok::Leq; advance(); advance(); return; }
    if (two('>', '=')) { tok_.kind = Tok::Geq; advance(); advance(); return; }
    switch (c) {
      case '{': tok_.kind = Tok::LBrace; break;
      case '}': tok_.kind = Tok::RBrace; break;
      case '(': tok_.kind = Tok::LParen; break;
      case ')': tok_.kind = Tok::RParen; break;
      case '[': tok_.kind = Tok::LBracket; break;
      case ']': tok_.kind = Tok::RBracket; break;
      case ';': tok_.kind = Tok::Semi; break;
      case ',': tok_.kind = Tok::Comma; break;
      case '/': tok_.kind = Tok::Slash; break;
      case '_': tok_.kind = Tok::Underscore; break;
      case '!': tok_.kind = Tok::Bang; break;
      case '&': tok_.kind = Tok::Amp; break;
      case '|': tok_.kind = Tok::Pipe; break;
      case '=': tok_.kind = Tok::Eq; break;
      case '<': tok_.kind = Tok::Lt; break;
      case '>': tok_.kind = Tok::Gt; break;
      case '+': tok_.kind = Tok::Plus; break;
      case '-': tok_.kind = Tok::Minus; break;
      case '*': tok_.kind = Tok::Star; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
    advance();
  }
};

const std::set<std::string> kKeywords = {"vocab", "kb",    "query",  "pred", "const",
                                         "rel",   "exists", "forall", "true", "false",
                                         "eps"};

class Parser {
 public:
  Parser(const std::string& src, const Vocabulary* fixed_vocab)
      : lex_(src), fixed_vocab_(fixed_vocab) {
    if (fixed_vocab_) vocab_ = *fixed_vocab_;
  }

  SourceFile parse_file() {
    SourceFile out;
    bool saw_vocab = false;
    while (lex_.peek().kind != Tok::End) {
      Token t = expect(Tok::Ident, "block name");
      if (t.text == "vocab") {
        if (saw_vocab) err(t, "duplicate vocab block");
        saw_vocab = true;
        parse_vocab_block();
      } else if (t.text == "kb") {
        if (!saw_vocab) err(t, "vocab block must precede kb block");
        parse_formula_block(&out.kb, /*kb_side=*/true);
      } else if (t.text == "query") {
        if (!saw_vocab) err(t, "vocab block must precede query block");
        parse_formula_block(&out.queries, /*kb_side=*/false);
      } else {
        err(t, "expected 'vocab', 'kb', or 'query'");
      }
    }
    if (!saw_vocab) throw ParseError("missing vocab block", 1, 1);
    out.vocab = vocab_;
    out.warnings = warnings();
    return out;
  }

  FormulaPtr parse_single_formula() {
    FormulaPtr f = parse_formula(false);
    if (lex_.peek().kind != Tok::End) err(lex_.peek(), "trailing input after formula");
    check_closed(f, lex_.peek());
    return f;
  }

  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    for (auto& [idx, count] : tol_uses_)
      if (count > 1)
        out.push_back("tolerance index " + std::to_string(idx) + " is used in " +
                      std::to_string(count) + " comparisons; use distinct subscripts unless the "
                      "tolerances are known to be equal");
    return out;
  }

 private:
  Lexer lex_;
  const Vocabulary* fixed_vocab_;
  Vocabulary vocab_;
  std::map<int, int> tol_uses_;

  [[noreturn]] void err(const Token& t, const std::string& msg) {
    throw ParseError(msg, t.line, t.col);
  }

  Token expect(Tok k, const std::string& what) {
    Token t = lex_.take();
    if (t.kind != k) err(t, "expected " + what);
    return t;
  }

  void parse_vocab_block() {
    if (fixed_vocab_) err(lex_.peek(), "vocab block not allowed here");
    expect(Tok::LBrace, "'{'");
    while (lex_.peek().kind != Tok::RBrace) {
      Token t = expect(Tok::Ident, "declaration ('pred', 'const', or 'rel')");
      if (t.text == "pred") {
        do {
          Token n = expect(Tok::Ident, "predicate name");
          check_name(n);
          vocab_.unary_predicates.push_back(n.text);
        } while (accept(Tok::Comma));
        expect(Tok::Semi, "';'");
      } else if (t.text == "const") {
        do {
          Token n = expect(Tok::Ident, "constant name");
          check_name(n);
          vocab_.constants.push_back(n.text);
        } while (accept(Tok::Comma));
        expect(Tok::Semi, "';'");
      } else if (t.text == "rel") {
        do {
          Token n = expect(Tok::Ident, "relation name");
          check_name(n);
          expect(Tok::Slash, "'/'");
          Token a = expect(Tok::Number, "arity");
          int arity = std::stoi(a.text);
          if (arity < 2) err(a, "relation arity must be >= 2");
          vocab_.relations.emplace_back(n.text, arity);
        } while (accept(Tok::Comma));
        expect(Tok::Semi, "';'");
      } else {
        err(t, "expected 'pred', 'const', or 'rel'");
      }
    }
    expect(Tok::RBrace, "'}'");
    vocab_.validate();
    if (vocab_.k() > 16) throw ParseError("more than 16 unary predicates is unsupported", 1, 1);
  }

  void check_name(const Token& n) {
    if (kKeywords.count(n.text)) err(n, "'" + n.text + "' is a reserved word");
  }

  bool accept(Tok k) {
    if (lex_.peek().kind == k) {
      lex_.take();
      return true;
    }
    return false;
  }

  void parse_formula_block(std::vector<FormulaPtr>* out, bool kb_side) {
    expect(Tok::LBrace, "'{'");
    while (lex_.peek().kind != Tok::RBrace) {
      Token start = lex_.peek();
      FormulaPtr f = parse_formula(false);
      expect(Tok::Semi, "';'");
      check_closed(f, start);
      if (kb_side) check_kb_restrictions(f, start);
      out->push_back(f);
    }
    expect(Tok::RBrace, "'}'");
  }

  void check_closed(const FormulaPtr& f, const Token& at) {
    std::set<std::string> fv;
    free_variables(f, &fv);
    if (!fv.empty()) err(at, "unbound variable '" + *fv.begin() + "' (undeclared symbol?)");
  }

  void check_kb_restrictions(const FormulaPtr& f, const Token& at) {
    if (mentions_term_equality(f))
      err(at, "equality between terms is not allowed in the kb block");
    if (mentions_relation(f, vocab_))
      err(at, "relations of arity >= 2 are not allowed in the kb block");
  }

  // formula := implies; implies := or ('->' implies)?
  FormulaPtr parse_formula(bool in_bars) {
    FormulaPtr lhs = parse_or(in_bars);
    if (accept(Tok::Arrow)) return f_implies(lhs, parse_formula(in_bars));
    return lhs;
  }

  FormulaPtr parse_or(bool in_bars) {
    FormulaPtr f = parse_and(in_bars);
    while (!in_bars && lex_.peek().kind == Tok::Pipe) {
      lex_.take();
      f = f_or(f, parse_and(in_bars));
    }
    return f;
  }

  FormulaPtr parse_and(bool in_bars) {
    FormulaPtr f = parse_unary(in_bars);
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      f = f_and(f, parse_unary(in_bars));
    }
    return f;
  }

  FormulaPtr parse_unary(bool in_bars) {
    Token t = lex_.peek();
    if (t.kind == Tok::Bang) {
      lex_.take();
      return f_not(parse_unary(in_bars));
    }
    if (t.kind == Tok::Ident && (t.text == "exists" || t.text == "forall")) {
      lex_.take();
      Token v = expect(Tok::Ident, "variable name");
      if (kKeywords.count(v.text)) err(v, "'" + v.text + "' is a reserved word");
      if (vocab_.is_predicate(v.text) || vocab_.is_constant(v.text) || vocab_.is_relation(v.text))
        err(v, "'" + v.text + "' is declared and cannot be used as a bound variable");
      FormulaPtr body = parse_unary(in_bars);
      return t.text == "exists" ? f_exists(v.text, body) : f_forall(v.text, body);
    }
    return parse_primary(in_bars);
  }

  bool starts_prop_expr(const Token& t) const {
    return t.kind == Tok::Number || t.kind == Tok::DblPipe || t.kind == Tok::Minus ||
           (t.kind == Tok::Ident && t.text == "eps");
  }

  FormulaPtr parse_primary(bool in_bars) {
    Token t = lex_.peek();
    if (t.kind == Tok::Ident && t.text == "true") {
      lex_.take();
      return f_true();
    }
    if (t.kind == Tok::Ident && t.text == "false") {
      lex_.take();
      return f_false();
    }
    if (starts_prop_expr(t)) return parse_comparison(nullptr, in_bars);
    if (t.kind == Tok::LParen) {
      // Either a parenthesized formula or a comparison whose left side starts
      // with a parenthesized proportion expression. Try the proportion route
      // speculatively and roll back when it does not pan out.
      Lexer snapshot = lex_;
      bool is_cmp = false;
      PropExprPtr lhs;
      try {
        lhs = parse_prop_expr(in_bars);
        Tok k = lex_.peek().kind;
        is_cmp = k == Tok::ApproxEq || k == Tok::ApproxLeq || k == Tok::ApproxGeq ||
                 k == Tok::Eq || k == Tok::Leq || k == Tok::Lt || k == Tok::Gt || k == Tok::Geq;
      } catch (const ParseError&) {
        is_cmp = false;
      }
      if (is_cmp) return parse_comparison(lhs, in_bars);
      lex_ = snapshot;
      lex_.take();
      FormulaPtr f = parse_formula(false);
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Ident) {
      Token name = lex_.take();
      if (vocab_.is_predicate(name.text) || vocab_.is_relation(name.text)) {
        expect(Tok::LParen, "'('");
        std::vector<Term> args;
        do {
          args.push_back(parse_term());
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
        int want = vocab_.is_predicate(name.text) ? 1 : vocab_.relation_arity(name.text);
        if (static_cast<int>(args.size()) != want)
          err(name, "'" + name.text + "' expects " + std::to_string(want) + " argument(s)");
        return f_pred(name.text, args);
      }
      // A bare term: must be a term equality t = t'.
      Term a = term_from_ident(name);
      expect(Tok::Eq, "'=' (term equality)");
      Term b = parse_term();
      return f_term_eq(a, b);
    }
    err(t, "expected a formula");
  }

  Term parse_term() {
    Token t = expect(Tok::Ident, "term (variable or constant)");
    return term_from_ident(t);
  }

  Term term_from_ident(const Token& t) {
    if (kKeywords.count(t.text)) err(t, "'" + t.text + "' is a reserved word");
    if (vocab_.is_predicate(t.text) || vocab_.is_relation(t.text))
      err(t, "'" + t.text + "' is a predicate, not a term");
    if (vocab_.is_constant(t.text)) return Term{true, t.text};
    return Term{false, t.text};
  }

  // comparison := propexpr cmpop propexpr
  FormulaPtr parse_comparison(PropExprPtr first, bool in_bars) {
    PropExprPtr lhs = first ? first : parse_prop_expr(in_bars);
    Token op = lex_.take();
    int tol = 0;
    CmpOp cmp;
    switch (op.kind) {
      case Tok::ApproxEq: cmp = CmpOp::ApproxEq; tol = parse_tol_index(); break;
      case Tok::ApproxLeq: cmp = CmpOp::ApproxLeq; tol = parse_tol_index(); break;
      case Tok::ApproxGeq: cmp = CmpOp::ApproxLeq; tol = parse_tol_index(); break;
      case Tok::Eq: cmp = CmpOp::ExactEq; break;
      case Tok::Leq: cmp = CmpOp::ExactLeq; break;
      case Tok::Lt: cmp = CmpOp::ExactLt; break;
      case Tok::Gt: cmp = CmpOp::ExactGt; break;
      case Tok::Geq: cmp = CmpOp::ExactGeq; break;
      default:
        err(op, "expected a comparison operator");
    }
    PropExprPtr rhs = parse_prop_expr(in_bars);
    if (cmp_is_approx(cmp)) ++tol_uses_[tol];
    if (op.kind == Tok::ApproxGeq) std::swap(lhs, rhs);  // a >~[i] b  ==  b <~[i] a
    return f_compare(lhs, cmp, tol, rhs);
  }

  int parse_tol_index() {
    expect(Tok::LBracket, "'['");
    Token n = expect(Tok::Number, "tolerance index");
    expect(Tok::RBracket, "']'");
    if (n.text.find('.') != std::string::npos) err(n, "tolerance index must be an integer");
    int idx = std::stoi(n.text);
    if (idx <= 0) err(n, "tolerance index must be positive");
    return idx;
  }

  PropExprPtr parse_prop_expr(bool in_bars) {
    PropExprPtr e = parse_prop_term(in_bars);
    for (;;) {
      if (accept(Tok::Plus)) {
        e = p_sum(e, parse_prop_term(in_bars));
      } else if (lex_.peek().kind == Tok::Minus) {
        lex_.take();
        e = p_diff(e, parse_prop_term(in_bars));
      } else {
        return e;
      }
    }
  }

  PropExprPtr parse_prop_term(bool in_bars) {
    PropExprPtr e = parse_prop_factor(in_bars);
    while (accept(Tok::Star)) e = p_product(e, parse_prop_factor(in_bars));
    return e;
  }

  PropExprPtr parse_prop_factor(bool in_bars) {
    Token t = lex_.peek();
    if (t.kind == Tok::Minus) {
      lex_.take();
      PropExprPtr inner = parse_prop_factor(in_bars);
      if (inner->kind == PKind::Const) return p_const(-inner->value);
      return p_diff(p_const(Rational(0)), inner);
    }
    if (t.kind == Tok::Number) return p_const(parse_rational());
    if (t.kind == Tok::Ident && t.text == "eps") {
      lex_.take();
      return p_epsilon(parse_tol_index());
    }
    if (t.kind == Tok::DblPipe) return parse_proportion_term();
    if (t.kind == Tok::LParen) {
      lex_.take();
      PropExprPtr e = parse_prop_expr(in_bars);
      expect(Tok::RParen, "')'");
      return e;
    }
    err(t, "expected a proportion expression");
  }

  Rational parse_rational() {
    Token n = expect(Tok::Number, "number");
    if (lex_.peek().kind == Tok::Slash) {
      lex_.take();
      Token d = expect(Tok::Number, "denominator");
      if (n.text.find('.') != std::string::npos || d.text.find('.') != std::string::npos)
        err(d, "p/q rational must have integer parts");
      return Rational(BigInt(n.text), BigInt(d.text));
    }
    return Rational::parse(n.text);
  }

  // ||f||_{x,y} or ||f | g||_{x}; a top-level '|' inside the bars is the
  // conditional separator, so disjunctions there need parentheses.
  PropExprPtr parse_proportion_term() {
    expect(Tok::DblPipe, "'||'");
    FormulaPtr body = parse_formula(true);
    FormulaPtr cond;
    if (accept(Tok::Pipe)) cond = parse_formula(true);
    expect(Tok::DblPipe, "'||'");
    expect(Tok::Underscore, "'_'");
    expect(Tok::LBrace, "'{'");
    std::vector<std::string> vars;
    do {
      Token v = expect(Tok::Ident, "variable");
      if (kKeywords.count(v.text)) err(v, "'" + v.text + "' is a reserved word");
      if (vocab_.is_predicate(v.text) || vocab_.is_constant(v.text) || vocab_.is_relation(v.text))
        err(v, "'" + v.text + "' is declared and cannot be used as a bound variable");
      vars.push_back(v.text);
    } while (accept(Tok::Comma));
    expect(Tok::RBrace, "'}'");
    if (cond) return p_cond_prop(body, cond, vars);
    return p_prop(body, vars);
  }
};

}  // namespace

SourceFile parse(const std::string& text) {
  Parser p(text, nullptr);
  return p.parse_file();
}

FormulaPtr parse_formula(const std::string& text, const Vocabulary& vocab) {
  Parser p(text, &vocab);
  return p.parse_single_formula();
}

// --- printer ---

namespace {

int formula_prec(const Formula& f) {
  switch (f.kind) {
    case FKind::Implies: return 0;
    case FKind::Or: return 1;
    case FKind::And: return 2;
    case FKind::Not:
    case FKind::Exists:
    case FKind::Forall: return 3;
    default: return 4;
  }
}

int prop_prec(const PropExpr& p) {
  switch (p.kind) {
    case PKind::Sum:
    case PKind::Diff: return 0;
    case PKind::Product: return 1;
    default: return 2;
  }
}

void print_f(const FormulaPtr& f, int parent_prec, bool in_bars, std::string* out);

void print_p(const PropExprPtr& p, int parent_prec, std::string* out) {
  int prec = prop_prec(*p);
  bool parens = prec < parent_prec;
  if (p->kind == PKind::Const && p->value.sign() < 0) parens = parent_prec > 0;
  if (parens) *out += "(";
  switch (p->kind) {
    case PKind::Const:
      *out += p->value.to_string();
      break;
    case PKind::Epsilon:
      *out += "eps[" + std::to_string(p->tol_index) + "]";
      break;
    case PKind::Prop:
    case PKind::CondProp: {
      *out += "||";
      print_f(p->body, 2, true, out);  // parenthesize top-level '|' inside bars
      if (p->kind == PKind::CondProp) {
        *out += " | ";
        print_f(p->cond, 2, true, out);
      }
      *out += "||_{";
      for (size_t i = 0; i < p->vars.size(); ++i) {
        if (i) *out += ",";
        *out += p->vars[i];
      }
      *out += "}";
      break;
    }
    case PKind::Sum:
      print_p(p->lhs, 0, out);
      *out += " + ";
      print_p(p->rhs, 1, out);
      break;
    case PKind::Diff:
      print_p(p->lhs, 0, out);
      *out += " - ";
      print_p(p->rhs, 1, out);
      break;
    case PKind::Product:
      print_p(p->lhs, 1, out);
      *out += " * ";
      print_p(p->rhs, 2, out);
      break;
  }
  if (parens) *out += ")";
}

void print_f(const FormulaPtr& f, int parent_prec, bool in_bars, std::string* out) {
  int prec = formula_prec(*f);
  bool parens = prec < parent_prec;
  if (parens) *out += "(";
  switch (f->kind) {
    case FKind::True:
      *out += "true";
      break;
    case FKind::False:
      *out += "false";
      break;
    case FKind::Pred: {
      *out += f->name + "(";
      for (size_t i = 0; i < f->args.size(); ++i) {
        if (i) *out += ",";
        *out += f->args[i].name;
      }
      *out += ")";
      break;
    }
    case FKind::TermEq:
      *out += f->tlhs.name + " = " + f->trhs.name;
      break;
    case FKind::Not:
      *out += "!";
      print_f(f->child, 3, in_bars, out);
      break;
    case FKind::And:
      print_f(f->child, 2, in_bars, out);
      *out += " & ";
      print_f(f->child2, 3, in_bars, out);
      break;
    case FKind::Or:
      print_f(f->child, 1, in_bars, out);
      *out += " | ";
      print_f(f->child2, 2, in_bars, out);
      break;
    case FKind::Implies:
      print_f(f->child, 1, in_bars, out);
      *out += " -> ";
      print_f(f->child2, 0, in_bars, out);
      break;
    case FKind::Exists:
    case FKind::Forall:
      *out += (f->kind == FKind::Exists ? "exists " : "forall ") + f->name + " ";
      print_f(f->child, 3, in_bars, out);
      break;
    case FKind::Compare: {
      print_p(f->plhs, 0, out);
      switch (f->cmp) {
        case CmpOp::ApproxEq:
          *out += " ~=[" + std::to_string(f->tol_index) + "] ";
          break;
        case CmpOp::ApproxLeq:
          *out += " <~[" + std::to_string(f->tol_index) + "] ";
          break;
        case CmpOp::ExactEq: *out += " = "; break;
        case CmpOp::ExactLeq: *out += " <= "; break;
        case CmpOp::ExactLt: *out += " < "; break;
        case CmpOp::ExactGt: *out += " > "; break;
        case CmpOp::ExactGeq: *out += " >= "; break;
      }
      print_p(f->prhs, 0, out);
      break;
    }
  }
  if (parens) *out += ")";
}

}  // namespace

std::string print(const FormulaPtr& f) {
  std::string out;
  print_f(f, 0, false, &out);
  return out;
}

std::string print(const PropExprPtr& p) {
  std::string out;
  print_p(p, 0, &out);
  return out;
}

std::string print(const SourceFile& file) {
  std::string out = "vocab {\n";
  if (!file.vocab.unary_predicates.empty()) {
    out += "  pred ";
    for (size_t i = 0; i < file.vocab.unary_predicates.size(); ++i) {
      if (i) out += ", ";
      out += file.vocab.unary_predicates[i];
    }
    out += ";\n";
  }
  if (!file.vocab.constants.empty()) {
    out += "  const ";
    for (size_t i = 0; i < file.vocab.constants.size(); ++i) {
      if (i) out += ", ";
      out += file.vocab.constants[i];
    }
    out += ";\n";
  }
  if (!file.vocab.relations.empty()) {
    out += "  rel ";
    for (size_t i = 0; i < file.vocab.relations.size(); ++i) {
      if (i) out += ", ";
      out += file.vocab.relations[i].first + "/" + std::to_string(file.vocab.relations[i].second);
    }
    out += ";\n";
  }
  out += "}\n";
  out += "kb {\n";
  for (auto& f : file.kb) out += "  " + print(f) + ";\n";
  out += "}\n";
  if (!file.queries.empty()) {
    out += "query {\n";
    for (auto& f : file.queries) out += "  " + print(f) + ";\n";
    out += "}\n";
  }
  return out;
}

}  // namespace rw
