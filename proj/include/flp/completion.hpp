#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flp/ast.hpp"

namespace flp {

// Rewrites a program into completed form: one clause per predicate, head
// parameters distinct variables, and a single cut-free body formula whose
// free variables all appear in the head. Cuts become if(cond, branch)
// choices, extra clauses fold into disjunctions, and local variables get
// an explicit exists.
//
// The passes run in a fixed order; each leaves a checkpoint of the whole
// program so tests can pin intermediate shapes.

struct CompletionTrace {
  Program result;
  // Program state after each pass, keyed by pass number (2 through 10:
  // head canonicalization, conjunction fusion, empty bodies, duplicate
  // cuts, leading cuts, trailing cuts, cut splitting, last-clause scoping,
  // clause merging).
  std::vector<std::pair<int, Program>> after_pass;
  // The head parameter variables chosen in pass 1, longest arity's worth.
  std::vector<std::string> pool;
};

CompletionTrace complete_trace(const Program& p);
Program complete(const Program& p);

// Empty when the program is in completed form; otherwise one line per
// violated condition, naming the clause or predicate.
std::vector<std::string> completed_form_violations(const Program& p);
bool is_completed_form(const Program& p);

}  // namespace flp
