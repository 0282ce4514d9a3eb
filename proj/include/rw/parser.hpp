#ifndef RW_PARSER_HPP
#define RW_PARSER_HPP

#include <string>
#include <vector>

#include "rw/formula.hpp"
#include "rw/vocab.hpp"

namespace rw {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_),
        col(col_) {}
};

// One .rwkb file: a vocab block, a kb block (formulas implicitly conjoined),
// and an optional query block.
struct SourceFile {
  Vocabulary vocab;
  std::vector<FormulaPtr> kb;
  std::vector<FormulaPtr> queries;
  std::vector<std::string> warnings;  // e.g. reused tolerance indices

  FormulaPtr kb_conjunction() const { return f_and_all(kb); }
};

// Parses a full .rwkb file. Enforces the KB-side restrictions: no term
// equality, no relations of arity >= 2, all identifiers declared, formulas
// closed. Rejects ill-formed input with line/column information.
SourceFile parse(const std::string& text);

// Parses a single formula (query syntax) against an existing vocabulary.
FormulaPtr parse_formula(const std::string& text, const Vocabulary& vocab);

// Concrete syntax. parse(print(f)) is structurally equal to f.
std::string print(const FormulaPtr& f);
std::string print(const PropExprPtr& p);
std::string print(const SourceFile& file);

}  // namespace rw

#endif
