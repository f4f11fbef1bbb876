#pragma once

#include <stdexcept>
#include <string>

#include "flp/ast.hpp"
#include "flp/subst.hpp"

namespace flp {

struct SourcePos {
  int line = 0;
  int col = 0;
};

// Malformed input: lexing or grammar trouble.
class ParseError : public std::runtime_error {
public:
  ParseError(SourcePos pos, const std::string& what);
  SourcePos pos;
};

// Well-formed input that breaks a language rule: arity conflicts, cut in a
// formula or goal, duplicate if-binders, reserved names used as predicates.
class ValidationError : public std::runtime_error {
public:
  ValidationError(SourcePos pos, const std::string& what);
  SourcePos pos;
};

// Surface syntax. At clause-body top level a comma separates body elements;
// conjunction formulas exist only inside parentheses. Lists are sugar for
// nil/cons, true for 0=0, fail for 0=1.
Program parse_program(const std::string& src);

// Goals are plain formulas: comma is conjunction and cut is rejected.
FormulaP parse_goal(const std::string& src);
TermP parse_term_text(const std::string& src);

std::string print_term(const TermP& t);
std::string print_formula(const FormulaP& f);
std::string print_clause(const Clause& c);
std::string print_program(const Program& p);

// Bindings for the given variables in that order, e.g. "{Z -> []}".
// Fresh engine-made variables in answer terms print as _G1, _G2, ...
std::string print_answer(const Subst& s, const std::vector<std::string>& vars);

}  // namespace flp
