#include <functional>
#include <string>

#include "doctest.h"
#include "flp/ast.hpp"
#include "flp/engine.hpp"
#include "flp/subst.hpp"
#include "flp/syntax.hpp"

using namespace flp;

namespace {

RunResult go(Mode m, const std::string& prog, const std::string& goal,
             long long fuel = 10000, bool trace = false) {
  RunOptions opts;
  opts.trace = trace;
  return run(m, parse_program(prog), parse_goal(goal), fuel, opts);
}

std::string binding(const RunResult& r, const std::string& var) {
  const TermP* t = r.answer.lookup(var);
  return t ? print_term(*t) : "";
}

bool subtree_has_rule(const TraceNode& n, const std::string& rule) {
  if (n.rule == rule) return true;
  for (const auto& c : n.children)
    if (subtree_has_rule(c, rule)) return true;
  return false;
}

const char* kDelete3 =
    "d(X, [], []).\n"
    "d(X, [X|Ys], Zs) :- !, d(X, Ys, Zs).\n"
    "d(X, [Y|Ys], [Y|Zs]) :- d(X, Ys, Zs).\n";

const char* kCutCase =
    "p(a, Y).\n"
    "p(b, Y) :- q(Y), !, r(Y).\n"
    "p(X, Y).\n"
    "q(c).\n"
    "q(d).\n"
    "r(d).\n";

const char* kAlist =
    "m(X, Ys) :- exists(Yh, exists(Yt, (Ys = [Yh|Yt], (X = Yh ; m(X, "
    "Yt))))).\n"
    "v(X, Y, Z) :- if([W], m(a(Y, W), X), Z = W).\n";

}  // namespace

TEST_CASE("equations unify or fail") {
  CHECK(go(Mode::LiberalGeneral, "", "X = s(0)").kind == ResultKind::Success);
  CHECK(go(Mode::LiberalGeneral, "", "s(0) = s(1)").kind == ResultKind::Fail);
  CHECK(go(Mode::LiberalGeneral, "", "X = s(X)").kind == ResultKind::Fail);
  RunResult r = go(Mode::LiberalGeneral, "", "f(X, b) = f(a, Y)");
  CHECK(binding(r, "X") == "a");
  CHECK(binding(r, "Y") == "b");
}

TEST_CASE("each rule application costs one fuel") {
  // Unif/succ on the goal, then Success on the empty stack.
  RunResult r = go(Mode::LiberalGeneral, "", "true", 10);
  CHECK(r.kind == ResultKind::Success);
  CHECK(r.fuel_left == 8);
  // A failing unification never evaluates the empty stack.
  RunResult f = go(Mode::LiberalGeneral, "", "fail", 10);
  CHECK(f.kind == ResultKind::Fail);
  CHECK(f.fuel_left == 9);
  CHECK(go(Mode::LiberalGeneral, "", "true", 0).kind ==
        ResultKind::FuelExhausted);
  CHECK(go(Mode::LiberalGeneral, "", "true", 1).kind ==
        ResultKind::FuelExhausted);
}

TEST_CASE("conjunction evaluates left to right") {
  RunResult r = go(Mode::LiberalGeneral, "", "X = 0, Y = s(X)");
  CHECK(r.kind == ResultKind::Success);
  CHECK(binding(r, "Y") == "s(0)");
  CHECK(go(Mode::LiberalGeneral, "", "fail, X = 0").kind == ResultKind::Fail);
}

TEST_CASE("disjunction takes the first non-failing branch") {
  RunResult r = go(Mode::LiberalGeneral, "", "(X = a ; X = b)");
  CHECK(binding(r, "X") == "a");
  RunResult s = go(Mode::LiberalGeneral, "", "(fail ; X = b)");
  CHECK(binding(s, "X") == "b");
  // The left branch includes the continuation; its failure sends the whole
  // continuation to the right branch.
  RunResult t = go(Mode::LiberalGeneral, "", "(X = a ; X = b), X = b");
  CHECK(t.kind == ResultKind::Success);
  CHECK(binding(t, "X") == "b");
}

TEST_CASE("exists introduces a fresh variable") {
  RunResult r = go(Mode::LiberalGeneral, "", "exists(X, X = 0)");
  CHECK(r.kind == ResultKind::Success);
  CHECK(r.answer.size() == 0);
  // The bound X is distinct from the outer X.
  RunResult s = go(Mode::LiberalGeneral, "", "X = 1, exists(X, X = 0)");
  CHECK(s.kind == ResultKind::Success);
  CHECK(binding(s, "X") == "1");
}

TEST_CASE("negation as failure in the liberal modes") {
  CHECK(go(Mode::LiberalGeneral, "", "\\+ fail").kind == ResultKind::Success);
  CHECK(go(Mode::LiberalGeneral, "", "\\+ true").kind == ResultKind::Fail);
  // A succeeding negation body leaves no bindings behind.
  RunResult r = go(Mode::LiberalGeneral, "", "\\+ (\\+ (X = 0)), X = 1");
  CHECK(r.kind == ResultKind::Success);
  CHECK(binding(r, "X") == "1");
}

TEST_CASE("clause order and cut commitment") {
  CHECK(go(Mode::LiberalGeneral, kCutCase, "p(a, c)").kind ==
        ResultKind::Success);
  CHECK(go(Mode::LiberalGeneral, kCutCase, "p(b, Y)").kind ==
        ResultKind::Fail);
  CHECK(go(Mode::LiberalGeneral, kCutCase, "p(b, d)").kind ==
        ResultKind::Success);
  CHECK(go(Mode::LiberalGeneral, kCutCase, "p(b, b)").kind ==
        ResultKind::Success);
  CHECK(go(Mode::LiberalGeneral, kCutCase, "p(e, e)").kind ==
        ResultKind::Success);
}

TEST_CASE("failure after a committed cut is final") {
  const char* prog =
      "p :- q, !, fail.\n"
      "p.\n"
      "q.\n";
  CHECK(go(Mode::LiberalGeneral, prog, "p").kind == ResultKind::Fail);
}

TEST_CASE("a failing pre-cut prefix falls through to later clauses") {
  const char* prog =
      "p(X) :- fail, !, X = a.\n"
      "p(b).\n";
  RunResult r = go(Mode::LiberalGeneral, prog, "p(X)");
  CHECK(r.kind == ResultKind::Success);
  CHECK(binding(r, "X") == "b");
}

TEST_CASE("delete with cut gives the first-solution answer") {
  RunResult r = go(Mode::LiberalGeneral, kDelete3, "d(a, [a], Z)");
  CHECK(r.kind == ResultKind::Success);
  CHECK(binding(r, "Z") == "[]");

  RunResult s = go(Mode::LiberalGeneral, kDelete3, "d(a, [a, b, a], Z)");
  CHECK(s.kind == ResultKind::Success);
  CHECK(binding(s, "Z") == "[b]");
}

TEST_CASE("the delete trace starts at Pred and fails the first clause") {
  RunResult r = go(Mode::LiberalGeneral, kDelete3, "d(a, [a], Z)", 10000, true);
  REQUIRE(r.trace != nullptr);
  CHECK(r.trace->rule == "Pred");
  REQUIRE(!r.trace->children.empty());
  const TraceNode& using_node = r.trace->children.front();
  CHECK(using_node.rule == "Using/nocut/fail");
  REQUIRE(!using_node.children.empty());
  CHECK(subtree_has_rule(using_node.children.front(), "Unif/fail"));
  std::string text = render_trace(*r.trace);
  CHECK(text.find("[Pred]") != std::string::npos);
  CHECK(text.find("Using/cut/succ") != std::string::npos);
}

TEST_CASE("undefined predicates fail in the liberal general mode") {
  CHECK(go(Mode::LiberalGeneral, "q(a).", "nosuch(X)").kind ==
        ResultKind::Fail);
}

TEST_CASE("modes needing completed form validate the program and goal") {
  CHECK_THROWS_AS(go(Mode::LiberalCompleted, kCutCase, "p(a, c)"),
                  ValidationError);
  CHECK_THROWS_AS(go(Mode::Conservative, kCutCase, "p(a, c)"),
                  ValidationError);
  CHECK_THROWS_AS(go(Mode::LiberalCompleted, "p(X) :- X = 0.", "nosuch(X)"),
                  ValidationError);
}

TEST_CASE("body expansion resolves calls in completed mode") {
  const char* prog = "p(X) :- (X = a ; X = b).\n";
  RunResult r = go(Mode::LiberalCompleted, prog, "p(X)");
  CHECK(r.kind == ResultKind::Success);
  CHECK(binding(r, "X") == "a");
  CHECK(go(Mode::LiberalCompleted, prog, "p(c)").kind == ResultKind::Fail);
}

TEST_CASE("liberal and conservative split on open negation") {
  // Double negation succeeds liberally without binding x.
  RunResult r = go(Mode::LiberalCompleted, "", "\\+ (\\+ (X = 0)), X = 1");
  CHECK(r.kind == ResultKind::Success);
  CHECK(binding(r, "X") == "1");
  // Single negation fails liberally.
  CHECK(go(Mode::LiberalCompleted, "", "\\+ (X = 0), X = 1").kind ==
        ResultKind::Fail);
  // But its ground instance succeeds: the failure witness property breaks.
  CHECK(go(Mode::LiberalCompleted, "", "\\+ (1 = 0), 1 = 1").kind ==
        ResultKind::Success);
  // The conservative rules flounder instead.
  CHECK(go(Mode::Conservative, "", "\\+ (X = 0), X = 1").kind ==
        ResultKind::Flounder);
  CHECK(go(Mode::Conservative, "", "\\+ (\\+ (X = 0))").kind ==
        ResultKind::Flounder);
  CHECK(go(Mode::Conservative, "", "\\+ (X = 0)").kind ==
        ResultKind::Flounder);
  // Closed negations run fine conservatively.
  CHECK(go(Mode::Conservative, "", "\\+ (1 = 0)").kind ==
        ResultKind::Success);
}

TEST_CASE("divergence surfaces as fuel exhaustion in liberal modes") {
  const char* loop = "loop(X) :- loop(X).\n";
  CHECK(go(Mode::LiberalCompleted, loop, "\\+ (\\+ (X = 0)), loop(X)",
           10000)
            .kind == ResultKind::FuelExhausted);
  CHECK(go(Mode::Conservative, loop, "\\+ (\\+ (X = 0)), loop(X)", 10000)
            .kind == ResultKind::Flounder);
  CHECK(go(Mode::LiberalCompleted, loop, "\\+ loop(0)", 100).kind ==
        ResultKind::FuelExhausted);
}

TEST_CASE("if commits to the first solution of its condition") {
  RunResult r =
      go(Mode::Conservative, kAlist, "v([a(b, 0), a(b, 1)], b, Z)");
  CHECK(r.kind == ResultKind::Success);
  CHECK(binding(r, "Z") == "0");
  CHECK(go(Mode::Conservative, kAlist, "v([a(b, 0), a(b, 1)], b, 1)").kind ==
        ResultKind::Fail);
  CHECK(go(Mode::Conservative, kAlist, "v([a(b, 0), a(b, 1)], b, 0)").kind ==
        ResultKind::Success);
  // Same first-solution behaviour liberally.
  RunResult s =
      go(Mode::LiberalCompleted, kAlist, "v([a(b, 0), a(b, 1)], b, Z)");
  CHECK(binding(s, "Z") == "0");
}

TEST_CASE("a failing if condition fails the whole formula") {
  CHECK(go(Mode::LiberalCompleted, "", "if([X], X = 0, fail)").kind ==
        ResultKind::Fail);
  CHECK(go(Mode::LiberalCompleted, "", "if([X], fail, true)").kind ==
        ResultKind::Fail);
}

TEST_CASE("conservative if needs its condition within the binders") {
  CHECK(go(Mode::Conservative, "", "if([X], X = Y, true)").kind ==
        ResultKind::Flounder);
  CHECK(go(Mode::Conservative, "", "if([X], X = 0, true)").kind ==
        ResultKind::Success);
  // Liberally the open condition just runs.
  CHECK(go(Mode::LiberalCompleted, "", "if([X], X = Y, true)").kind ==
        ResultKind::Success);
}

TEST_CASE("liberal if instantiates the continuation with the commitment") {
  RunResult r =
      go(Mode::LiberalCompleted, "", "if([X], X = Y, true), Y = 0");
  CHECK(r.kind == ResultKind::Success);
  CHECK(binding(r, "Y") == "0");
}

TEST_CASE("pessimistic mode treats every call as divergent") {
  CHECK(go(Mode::Pessimistic, "p(X) :- X = 0.", "p(0)").kind ==
        ResultKind::Diverge);
  CHECK(go(Mode::Pessimistic, "", "0 = 0").kind == ResultKind::Success);
  CHECK(go(Mode::Pessimistic, "", "(0 = 0 ; p(X))").kind ==
        ResultKind::Success);
  CHECK(go(Mode::Pessimistic, "", "(p(X) ; 0 = 0)").kind ==
        ResultKind::Diverge);
  CHECK(go(Mode::Pessimistic, "", "(fail ; p(X))").kind ==
        ResultKind::Diverge);
  CHECK(go(Mode::Pessimistic, "", "\\+ p(0)").kind == ResultKind::Diverge);
}

TEST_CASE("flounders propagate out of enclosing formulas") {
  CHECK(go(Mode::Conservative, "", "(\\+ (X = 0) ; true)").kind ==
        ResultKind::Flounder);
  CHECK(go(Mode::Conservative, "", "0 = 0, \\+ (X = 0)").kind ==
        ResultKind::Flounder);
  CHECK(go(Mode::Conservative, "", "\\+ (\\+ (1 = 0))").kind ==
        ResultKind::Fail);
  CHECK(go(Mode::Conservative, "", "exists(X, \\+ (X = 0))").kind ==
        ResultKind::Flounder);
}

TEST_CASE("answers are restricted to goal variables") {
  RunResult r = go(Mode::LiberalGeneral, kDelete3, "d(a, [a, b], Z)");
  CHECK(r.kind == ResultKind::Success);
  CHECK(r.answer.size() == 1);
  CHECK(r.answer.lookup("Z") != nullptr);
  CHECK(r.full_subst.size() >= r.answer.size());
}

TEST_CASE("success with unbound goal variables leaves them out") {
  RunResult r = go(Mode::LiberalGeneral, kCutCase, "p(a, Y)");
  CHECK(r.kind == ResultKind::Success);
  CHECK(r.answer.size() == 0);
}
