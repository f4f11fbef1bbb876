#pragma once

#include <memory>
#include <string>
#include <vector>

#include "flp/ast.hpp"
#include "flp/subst.hpp"

namespace flp {

// The four evaluation modes. They share one rule engine and differ in two
// axes: how choice constructs behave (liberal vs conservative, the latter
// floundering on non-closed negations and if-conditions) and how predicate
// calls are resolved (clause-by-clause with cut and backtracking, direct
// body expansion for completed programs, or immediate divergence).
enum class Mode { LiberalGeneral, LiberalCompleted, Conservative, Pessimistic };

const char* mode_name(Mode m);

enum class ResultKind { Success, Fail, Flounder, Diverge, FuelExhausted };

const char* result_name(ResultKind k);

// One derivation step in root-first layout: the judgement, the rule that
// resolved it, and the premises in evaluation order.
struct TraceNode {
  std::string rule;
  std::string judgement;
  std::string result;
  std::vector<TraceNode> children;
};

std::string render_trace(const TraceNode& n);

// Goal-stack element: a formula to prove, a call being resolved against its
// remaining candidate clauses, or the tail of a clause body after a cut
// committed.
struct StackElt {
  enum class Tag { Goal, Using, Body };
  Tag tag;
  FormulaP goal;
  std::string pred;
  std::vector<TermP> args;
  std::vector<Clause> clauses;
  std::vector<BodyElt> body;

  static StackElt make_goal(FormulaP f);
  static StackElt make_using(std::string pred, std::vector<TermP> args,
                             std::vector<Clause> clauses);
  static StackElt make_body(std::vector<BodyElt> body);
};

// Goal stacks are immutable lists whose tails are shared between the many
// continuations a derivation keeps alive, so a push costs one node and a
// pop costs nothing. Elements are stored as written; the running
// substitution is applied to an element when it is selected.
struct StackNode;
using GoalStack = std::shared_ptr<const StackNode>;  // nullptr is empty

struct StackNode {
  StackElt elt;
  GoalStack rest;
};

GoalStack push_front(StackElt e, GoalStack rest);

struct RunResult {
  ResultKind kind = ResultKind::Fail;
  Subst answer;       // bindings for the goal's free variables (Success only)
  Subst full_subst;   // unrestricted final substitution
  long long fuel_left = 0;
  std::unique_ptr<TraceNode> trace;  // present when tracing was requested
};

struct RunOptions {
  bool trace = false;
  // Completed-form and definedness validation for the modes that need it.
  // Tests that construct programs known to be valid can skip it.
  bool validate = true;
};

// Evaluate a goal. Goals cannot contain cut by construction. The modes
// other than LiberalGeneral require the program in completed form and
// reject calls to undefined predicates up front (Pessimistic never touches
// the program, so nothing is checked there).
RunResult run(Mode m, const Program& p, const FormulaP& goal, long long fuel,
              const RunOptions& opts = {});

// Evaluate from an explicit stack under an explicit substitution; the
// substitution is resolved against each element when it is selected.
RunResult run_stack(Mode m, const Program& p, const Subst& theta,
                    const GoalStack& stack, long long fuel,
                    const RunOptions& opts = {});

}  // namespace flp
