#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "flp/ast.hpp"
#include "flp/dfnf.hpp"
#include "flp/subst.hpp"
#include "flp/syntax.hpp"
#include "flp/valuation.hpp"

using namespace flp;

namespace {

FormulaP F(const std::string& text) { return parse_goal(text); }

UniverseBound bits() {
  UniverseBound b;
  b.signature = {{"0", 0}, {"1", 0}};
  b.max_depth = 1;
  return b;
}

const char* kDelete1 =
    "d(X, Y, Z) :-\n"
    "    (Y = [], Z = [])\n"
    "  ; if([Ys], Y = [X|Ys], d(X, Ys, Z))\n"
    "  ; (\\+ exists(Ys, Y = [X|Ys]),\n"
    "     exists(Yh, exists(Ys, exists(Zs,\n"
    "       (Y = [Yh|Ys], Z = [Yh|Zs], d(X, Ys, Zs)))))).\n";

}  // namespace

TEST_CASE("the definedness join rejects a T and F mix") {
  CHECK(max_k({TruthValue::U, TruthValue::T}) == TruthValue::T);
  CHECK(max_k({TruthValue::F, TruthValue::U, TruthValue::F}) == TruthValue::F);
  CHECK(max_k({TruthValue::U, TruthValue::U}) == TruthValue::U);
  CHECK_THROWS_AS(max_k({TruthValue::T, TruthValue::F}), std::logic_error);
  CHECK_THROWS_AS(max_k({}), std::logic_error);
}

TEST_CASE("the truth maximum orders F below U below T") {
  CHECK(max_t({TruthValue::F, TruthValue::F}) == TruthValue::F);
  CHECK(max_t({TruthValue::F, TruthValue::U}) == TruthValue::U);
  CHECK(max_t({TruthValue::U, TruthValue::T, TruthValue::F}) == TruthValue::T);
  CHECK_THROWS_AS(max_t({}), std::logic_error);
}

TEST_CASE("truth values print as single letters") {
  CHECK(std::string(truth_name(TruthValue::T)) == "T");
  CHECK(std::string(truth_name(TruthValue::F)) == "F");
  CHECK(std::string(truth_name(TruthValue::U)) == "U");
}

TEST_CASE("ground enumeration counts terms up to the depth bound") {
  CHECK(enumerate_ground(bits()).size() == 2);

  UniverseBound lists;
  lists.signature = {{"0", 0}, {"1", 0}, {"nil", 0}, {"cons", 2}};
  lists.max_depth = 2;
  // Three constants plus cons over every pair of them.
  CHECK(enumerate_ground(lists).size() == 12);

  UniverseBound nats;
  nats.signature = {{"0", 0}, {"s", 1}};
  nats.max_depth = 3;
  CHECK(enumerate_ground(nats).size() == 3);
}

TEST_CASE("the program universe keeps the two spare constants") {
  UniverseBound b = universe_for(parse_program("p(a)."), 1);
  std::vector<TermP> terms = enumerate_ground(b);
  bool zero = false, one = false, a = false;
  for (const auto& t : terms) {
    if (t->name == "0") zero = true;
    if (t->name == "1") one = true;
    if (t->name == "a") a = true;
  }
  CHECK(zero);
  CHECK(one);
  CHECK(a);
}

TEST_CASE("valuation decides equations syntactically and calls as unknown") {
  CHECK(valuate(F("0 = 0"), bits()) == TruthValue::T);
  CHECK(valuate(F("0 = 1"), bits()) == TruthValue::F);
  CHECK(valuate(F("p(0)"), bits()) == TruthValue::U);
}

TEST_CASE("valuation checks the connectives sequentially") {
  CHECK(valuate(F("(0 = 1) ; p(0)"), bits()) == TruthValue::U);
  CHECK(valuate(F("(0 = 1), p(0)"), bits()) == TruthValue::F);
  CHECK(valuate(F("p(0), (0 = 1)"), bits()) == TruthValue::U);
  CHECK(valuate(F("(0 = 0) ; p(0)"), bits()) == TruthValue::T);
  CHECK(valuate(F("\\+ (0 = 0)"), bits()) == TruthValue::F);
  CHECK(valuate(F("\\+ (0 = 1)"), bits()) == TruthValue::T);
  CHECK(valuate(F("\\+ p(0)"), bits()) == TruthValue::U);
}

TEST_CASE("the existential sweeps the bounded universe") {
  CHECK(valuate(F("exists(X, X = 1)"), bits()) == TruthValue::T);
  UniverseBound nats;
  nats.signature = {{"0", 0}, {"s", 1}};
  nats.max_depth = 2;
  // No term equals its own successor anywhere in the universe.
  CHECK(valuate(F("exists(X, X = s(X))"), nats) == TruthValue::F);
  CHECK(valuate(F("exists(X, p(X))"), bits()) == TruthValue::U);
  // At 0 the body is unknown, at 1 it is true: one true element wins.
  CHECK(valuate(F("exists(X, \\+ ((X = 0, p(X))))"), bits()) ==
        TruthValue::T);
  // A disjunction below exists is outside the evaluable fragment.
  CHECK_THROWS_AS(valuate(F("exists(X, (X = 1 ; p(X)))"), bits()),
                  std::invalid_argument);
}

TEST_CASE("valuation rejects open formulas and committed choices") {
  CHECK_THROWS_AS(valuate(F("X = 0"), bits()), std::invalid_argument);
  CHECK_THROWS_AS(valuate(F("if([], 0 = 0, 0 = 0)"), bits()),
                  std::invalid_argument);
}

TEST_CASE("the pessimistic outcome maps result classes to truth values") {
  CHECK(pessimistic_outcome(F("0 = 0")) == TruthValue::T);
  CHECK(pessimistic_outcome(F("0 = 1")) == TruthValue::F);
  CHECK(pessimistic_outcome(F("p(0)")) == TruthValue::U);
  CHECK(pessimistic_outcome(F("(0 = 0) ; p(0)")) == TruthValue::T);
  CHECK(pessimistic_outcome(F("(p(0) ; 0 = 0)")) == TruthValue::U);
  CHECK(pessimistic_outcome(F("exists(X, X = 0)")) == TruthValue::T);
  CHECK(pessimistic_outcome(F("\\+ p(0)")) == TruthValue::U);
}

TEST_CASE("the pessimistic outcome rejects open or floundering goals") {
  CHECK_THROWS_AS(pessimistic_outcome(F("X = 0")), std::invalid_argument);
  // Closed overall, but the choice condition sees an outside variable.
  CHECK_THROWS_AS(pessimistic_outcome(F("exists(Y, if([], Y = 0, true))")),
                  std::invalid_argument);
}

TEST_CASE("unfolding expands one call at a time and deduplicates") {
  Program p = parse_program("q :- r.\nr :- 0 = 0.");
  auto both = unfold_once(p, F("q ; r"));
  REQUIRE(both.size() == 2);
  CHECK(alpha_equiv(both[0], F("r ; r")));
  CHECK(alpha_equiv(both[1], F("q ; 0 = 0")));
  // Two calls with alpha-equal expansions collapse to one unfolding.
  Program self = parse_program("q :- q.");
  auto folded = unfold_once(self, F("q, q"));
  REQUIRE(folded.size() == 1);
  CHECK(alpha_equiv(folded[0], F("q, q")));
  // A call the program does not define has no expansion.
  CHECK(unfold_once(parse_program("q :- r."), F("r")).empty());
}

TEST_CASE("unfolding instantiates the clause head") {
  Program p = parse_program("d(X, Y) :- Y = s(X).");
  auto out = unfold_once(p, F("d(0, W)"));
  REQUIRE(out.size() == 1);
  CHECK(alpha_equiv(out[0], F("W = s(0)")));
}

TEST_CASE("denotation needs a completed program and defined calls") {
  UniverseBound b = bits();
  CHECK_THROWS_AS(denote(parse_program("p(0)."), F("p(X)"), 1, b),
                  ValidationError);
  CHECK_THROWS_AS(
      denote(parse_program("p(X) :- X = 0."), F("nosuch(X)"), 1, b),
      ValidationError);
}

TEST_CASE("a call-free goal settles in round zero") {
  Program empty;
  DenoteResult r = denote(empty, F("exists(X, X = 0)"), 5, bits());
  CHECK(r.value == TruthValue::T);
  CHECK(r.explored == 1);
  CHECK(r.rounds == 0);
  REQUIRE(r.witness != nullptr);
  CHECK(alpha_equiv(r.witness, F("exists(X, X = 0)")));
}

TEST_CASE("a self-call loops to an unknown denotation") {
  Program p = parse_program("loop(X) :- loop(X).");
  DenoteResult r = denote(p, F("loop(0)"), 3, universe_for(p, 2));
  CHECK(r.value == TruthValue::U);
  CHECK(r.witness == nullptr);
  // The one unfolding is the goal itself, so the frontier dries up.
  CHECK(r.explored == 1);
}

TEST_CASE("deleting from the empty list denotes true after one unfolding") {
  Program p = parse_program(kDelete1);
  UniverseBound b = universe_for(p, 3);
  b.signature.push_back({"a", 0});

  FormulaP goal = F("d(a, [], Z)");
  FormulaP g0 = Formula::exists_all(free_vars(goal), goal);
  CHECK(valuate(dfnf(g0), b) == TruthValue::U);

  DenoteResult r = denote(p, goal, 2, b);
  CHECK(r.value == TruthValue::T);
  CHECK(r.explored == 2);
  CHECK(r.rounds == 1);
  REQUIRE(r.witness != nullptr);
  FormulaP g1 = F(
      "exists(Z, (([] = [], Z = [])"
      " ; if([Ys], [] = [a|Ys], d(a, Ys, Z))"
      " ; (\\+ exists(Ys, [] = [a|Ys]),"
      "    exists(Yh, exists(Ys, exists(Zs,"
      "      ([] = [Yh|Ys], Z = [Yh|Zs], d(a, Ys, Zs))))))))");
  CHECK(alpha_equiv(r.witness, g1));
  CHECK(valuate(dfnf(g1), b) == TruthValue::T);
}
