#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flp/ast.hpp"

namespace flp {

// Formula classes for the disjunction-position grammar:
//   N ::= p(t...) | s=t | N&N | exists x N | not O
//   O ::= N | O;O
// An N formula keeps disjunctions strictly under negations; an O formula
// additionally allows a disjunctive spine at the top. if(...) belongs to
// neither class.
enum class FormulaClass { NegatedDisjunction, OuterDisjunction, Neither };

bool is_negated_disjunction(const FormulaP& f);
bool is_outer_disjunction(const FormulaP& f);
FormulaClass classify(const FormulaP& f);

// Plain connective depth, and the largest depth the formula can reach
// under the rewrite rules below.
size_t depth(const FormulaP& f);
size_t potential_depth(const FormulaP& f);

// The five rewrite rules. At most one applies at any node:
//   R1  (B1;B2) & C        -> (B1&C) ; (B2&C)
//   R2  B & (C1;C2)        -> (B&C1) ; (B&C2)          B in N
//   R3  exists x (B1;B2)   -> (exists x B1) ; (exists x B2)
//   R4  if[xs](B1;B2, C)   -> if[xs](B1,C) ; (\+ exists xs (B1) & if[xs](B2,C))
//   R5  if[xs](B, C)       -> exists xs (B & C)        B in N
// Rewriting to a fixpoint yields the depth-first normal form, which is
// the same formula (up to bound renaming) no matter which redex is taken
// first.
enum class RedexChoice {
  OutermostLeftmost,
  OutermostRightmost,
  InnermostLeftmost,
  InnermostRightmost,
  Random,
};

struct RewriteStep {
  std::string rule;  // "R1" .. "R5"
  FormulaP result;
};

// One rewrite at the redex selected by `choice`, or nullopt when the
// formula is in normal form. `rng` is consulted only for Random.
std::optional<RewriteStep> rewrite_step(
    const FormulaP& f, RedexChoice choice = RedexChoice::OutermostLeftmost,
    std::mt19937_64* rng = nullptr);

struct DfnfChain {
  FormulaP normal_form;
  std::vector<RewriteStep> steps;
};

DfnfChain dfnf_chain(const FormulaP& f,
                     RedexChoice choice = RedexChoice::OutermostLeftmost,
                     std::mt19937_64* rng = nullptr);
FormulaP dfnf(const FormulaP& f);

}  // namespace flp
