#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flp/ast.hpp"
#include "flp/engine.hpp"
#include "flp/subst.hpp"
#include "flp/valuation.hpp"

namespace flp {

// Seeded random generators plus the brute-force checkers behind the
// property suites. Same seed, same output, always.
struct GenConfig {
  uint64_t seed = 1;
  int max_clauses = 3;      // clauses per predicate
  int max_body_len = 3;     // elements per clause body
  int max_term_depth = 2;   // nesting of generated terms
  int max_formula_depth = 3;
  // Keep negated subformulas closed and if-conditions within their
  // binders, so conservative-choice runs cannot flounder.
  bool mode_safe = true;
};

Program gen_program(const GenConfig& cfg);            // clauses, cuts and all
Program gen_completed_program(const GenConfig& cfg);  // already in completed form
FormulaP gen_goal(const GenConfig& cfg, const Program& p);
FormulaP gen_ground_o_formula(const GenConfig& cfg);
FormulaP gen_n_formula(const GenConfig& cfg,
                       const std::vector<std::string>& free_vars);
// Formula rich in if/or/exists nodes, the food for the rewrite suites.
FormulaP gen_rewrite_formula(const GenConfig& cfg);

enum class WitnessVerdict { Pass, Skipped, Violation };

struct WitnessReport {
  WitnessVerdict verdict = WitnessVerdict::Skipped;
  std::string detail;  // counterexample description on violation
};

// Checks the two witness properties on one run: a success must survive
// grounding its leftover variables with 0, and a failure must be shared
// by every ground instance from the bounded universe. Floundering and
// fuel exhaustion are inconclusive and reported skipped. Verification
// reruns get a fixed factor of 4 more fuel. The mode parameter exists so
// tests can show the liberal modes actually break these properties.
WitnessReport check_witness(const Program& p, const FormulaP& g,
                            long long fuel, const UniverseBound& bound,
                            Mode mode = Mode::Conservative);

// Pessimistic outcome of every unfolding of the (existentially closed)
// goal reachable within the given number of rounds, breadth first. This
// reruns the engine per unfolding, making it an oracle for denote(),
// which instead valuates normal forms.
std::vector<std::pair<FormulaP, TruthValue>> brute_unfold_pessimistic(
    const Program& p, const FormulaP& g, size_t rounds);

// Substitutions that specialize each other, i.e. equal up to renaming.
bool answers_equal(const Subst& a, const Subst& b);

struct SuiteReport {
  std::string name;
  size_t cases = 0;
  size_t passed = 0;
  size_t skipped = 0;
  size_t violations = 0;
  std::string first_counterexample;
  std::string note;  // extra metric worth surfacing, e.g. peak fuel use
  bool ok() const { return violations == 0; }
};

std::string format_report(const SuiteReport& r);

// Conservative runs satisfy both witness properties.
SuiteReport run_witness_suite(uint64_t seed, size_t cases, long long fuel,
                              size_t universe_depth = 3);
// On completed programs the clause-resolution and body-expansion
// semantics agree.
SuiteReport run_equivalence_completed_suite(uint64_t seed, size_t cases,
                                            long long fuel);
// Completing a program preserves run results (completed side gets 4x fuel
// for the extra plumbing).
SuiteReport run_completion_preservation_suite(uint64_t seed, size_t cases,
                                              long long fuel);
// A non-floundering conservative run matches the liberal completed run.
SuiteReport run_conservative_correspondence_suite(uint64_t seed, size_t cases,
                                                  long long fuel);
// Rewriting: potential depth never grows, five redex strategies agree,
// normal forms are outer-disjunction, pessimistic outcomes survive.
SuiteReport run_dfnf_suite(uint64_t seed, size_t cases);
// Ground outer-disjunction formulas: valuation equals pessimistic outcome.
SuiteReport run_raising_suite(uint64_t seed, size_t cases);
// Completion reaches completed form with the per-pass shape guarantees.
SuiteReport run_completion_suite(uint64_t seed, size_t cases);
// Pessimistic runs finish within fuel 4x formula size, without
// floundering, on mode-safe goals.
SuiteReport run_pessimistic_bound_suite(uint64_t seed, size_t cases);

}  // namespace flp
