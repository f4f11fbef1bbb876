#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "flp/ast.hpp"

namespace flp {

enum class TruthValue { T, F, U };

const char* truth_name(TruthValue v);

// Join under the definedness ordering (U below both T and F). Mixing T
// and F has no join; that throws, because the callers below only ever see
// such a mix when the semantics itself is broken.
TruthValue max_k(const std::vector<TruthValue>& vals);

// Maximum under the truth ordering F < U < T.
TruthValue max_t(const std::vector<TruthValue>& vals);

// Finite stand-in for "all ground terms": everything buildable from the
// signature up to the given nesting depth, constants being depth 1.
struct UniverseBound {
  std::vector<FnSig> signature;  // always includes the constants 0 and 1
  size_t max_depth = 1;
};

UniverseBound universe_for(const Program& p, size_t max_depth);
std::vector<TermP> enumerate_ground(const UniverseBound& bound);

// Three-valued valuation of a closed outer-disjunction formula: equations
// decide by syntactic identity, calls are U, conjunction and disjunction
// check the left side first and only consult the right when it is T
// (resp. F), negation flips, and exists takes the truth-maximal value
// over the bounded universe.
TruthValue valuate(const FormulaP& f, const UniverseBound& bound);

// Result class of running a closed formula with every predicate call
// treated as divergent: Success -> T, Fail -> F, Diverge -> U. Floundering
// means the caller handed over a formula outside the class this notion
// covers, and throws.
TruthValue pessimistic_outcome(const FormulaP& f);

// All ways of replacing exactly one predicate call with its defining body
// (the program must be in completed form), deduplicated up to bound
// renaming, leftmost call first.
std::vector<FormulaP> unfold_once(const Program& p, const FormulaP& f);

struct DenoteResult {
  TruthValue value = TruthValue::U;  // U here means: unknown at this depth
  FormulaP witness;  // the unfolding whose valuation decided a T/F value
  size_t explored = 0;  // distinct unfoldings valuated
  size_t rounds = 0;    // unfolding rounds actually expanded
};

// Approximates the program's denotation of a goal: close the goal
// existentially, enumerate unfoldings breadth-first for up to
// `unfold_depth` rounds, valuate the normal form of each, and report the
// first defined value (whole rounds are finished so a T/F clash inside
// one round is caught and reported as a bug rather than masked).
DenoteResult denote(const Program& p, const FormulaP& goal,
                    size_t unfold_depth, const UniverseBound& bound);

}  // namespace flp
