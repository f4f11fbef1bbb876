#include <string>

#include "doctest.h"
#include "flp/ast.hpp"
#include "flp/completion.hpp"
#include "flp/subst.hpp"
#include "flp/syntax.hpp"

using namespace flp;

namespace {

const char* kDelete3 =
    "d(X, [], []).\n"
    "d(X, [X|Ys], Zs) :- !, d(X, Ys, Zs).\n"
    "d(X, [Y|Ys], [Y|Zs]) :- d(X, Ys, Zs).\n";

const Program* snapshot(const CompletionTrace& tr, int pass) {
  for (const auto& [n, prog] : tr.after_pass)
    if (n == pass) return &prog;
  return nullptr;
}

}  // namespace

TEST_CASE("a ground fact becomes a head equation") {
  Program got = complete(parse_program("p(0)."));
  CHECK(alpha_equiv(got, parse_program("p(X1) :- X1 = 0.")));
  CHECK(is_completed_form(got));
}

TEST_CASE("an argument-free fact gets a true body") {
  Program got = complete(parse_program("p."));
  CHECK(alpha_equiv(got, parse_program("p :- true.")));
}

TEST_CASE("a leading cut is padded and merged into an if") {
  Program got = complete(parse_program("p :- !, q.\np :- r.\nq.\nr."));
  Program want =
      parse_program("p :- if([], true, q) ; (\\+ true, r).\nq :- true.\nr :- true.");
  CHECK(alpha_equiv(got, want));
  CHECK(is_completed_form(got));
}

TEST_CASE("head canonicalization emits parameter equations in order") {
  CompletionTrace tr = complete_trace(parse_program(kDelete3));
  REQUIRE(tr.pool == std::vector<std::string>{"X1", "X2", "X3"});
  const Program* after2 = snapshot(tr, 2);
  REQUIRE(after2 != nullptr);
  Program want = parse_program(
      "d(X1, X2, X3) :- X2 = [], X3 = [].\n"
      "d(X1, X2, X3) :- X2 = [X1|Ys], !, d(X1, Ys, X3).\n"
      "d(X1, X2, X3) :- X2 = [Y|Ys], X3 = [Y|Zs], d(X1, Ys, Zs).\n");
  CHECK(alpha_equiv(*after2, want));
  // Every head is now a row of distinct variables.
  for (const auto& c : after2->clauses)
    for (const auto& t : c.head) CHECK(t->is_var());
}

TEST_CASE("conjunction fusion leaves one formula between cuts") {
  CompletionTrace tr = complete_trace(parse_program(kDelete3));
  const Program* after7 = snapshot(tr, 7);
  REQUIRE(after7 != nullptr);
  Program want = parse_program(
      "d(X1, X2, X3) :- (X2 = [], X3 = []).\n"
      "d(X1, X2, X3) :- X2 = [X1|Ys], !, d(X1, Ys, X3).\n"
      "d(X1, X2, X3) :- (X2 = [Y|Ys], X3 = [Y|Zs], d(X1, Ys, Zs)).\n");
  CHECK(alpha_equiv(*after7, want));
  for (const auto& c : after7->clauses) {
    size_t formulas = 0;
    for (size_t i = 0; i < c.body.size(); ++i) {
      if (c.body[i].is_cut()) {
        formulas = 0;
      } else {
        CHECK(++formulas <= 1);
      }
    }
  }
}

TEST_CASE("the last clause is closed over its local variables") {
  CompletionTrace tr = complete_trace(parse_program(kDelete3));
  const Program* after9 = snapshot(tr, 9);
  REQUIRE(after9 != nullptr);
  const Clause& last = after9->clauses.back();
  REQUIRE(last.body.size() == 1);
  FormulaP f = last.body.front().formula;
  // Binders come out in first-occurrence order: Y, Ys, Zs.
  REQUIRE(f->kind == Formula::Kind::Exists);
  CHECK(f->var == "Y");
  REQUIRE(f->left->kind == Formula::Kind::Exists);
  CHECK(f->left->var == "Ys");
  REQUIRE(f->left->left->kind == Formula::Kind::Exists);
  CHECK(f->left->left->var == "Zs");
  CHECK(free_vars(f) == std::vector<std::string>{"X2", "X3", "X1"});
}

TEST_CASE("delete with a cut completes to a single three-way clause") {
  Program got = complete(parse_program(kDelete3));
  Program want = parse_program(
      "d(X1, X2, X3) :-\n"
      "    (X2 = [], X3 = [])\n"
      "  ; if([Ys], X2 = [X1|Ys], d(X1, Ys, X3))\n"
      "  ; (\\+ exists(Ys, X2 = [X1|Ys]),\n"
      "     exists(Y, exists(Ys, exists(Zs,\n"
      "       (X2 = [Y|Ys], X3 = [Y|Zs], d(X1, Ys, Zs)))))).\n");
  CHECK(alpha_equiv(got, want));
  CHECK(is_completed_form(got));
  // The printed result parses back to the same program.
  CHECK(alpha_equiv(parse_program(print_program(got)), got));
}

TEST_CASE("two cuts in one clause split off a helper predicate") {
  Program got = complete(parse_program("p(X) :- q(X), !, r(X), !, s(X)."));
  Program want = parse_program(
      "p(X1) :- if([], q(X1), aux1(X1)).\n"
      "aux1(X1) :- if([], r(X1), s(X1)).\n");
  CHECK(alpha_equiv(got, want));
  CHECK(is_completed_form(got));
  CHECK(got.clauses.size() == 2);
  CHECK(got.clauses[1].pred == "aux1");
}

TEST_CASE("the helper name avoids every name already in use") {
  Program got = complete(
      parse_program("p(X) :- aux1(X), !, q(X), !, aux1(X).\naux1(0)."));
  bool found = false;
  for (const auto& c : got.clauses)
    if (c.pred == "aux2") found = true;
  CHECK(found);
  CHECK(is_completed_form(got));
}

TEST_CASE("head parameter names dodge source variables") {
  CompletionTrace tr = complete_trace(parse_program("p(X1, b)."));
  CHECK(tr.pool == std::vector<std::string>{"XX1", "XX2"});
  CHECK(alpha_equiv(tr.result, parse_program("p(A, B) :- B = b.")));
}

TEST_CASE("completing a completed program changes nothing") {
  Program once = complete(parse_program(kDelete3));
  Program twice = complete(once);
  CHECK(alpha_equiv(once, twice));
}

TEST_CASE("violations name what is wrong with a raw program") {
  auto v = completed_form_violations(parse_program(kDelete3));
  REQUIRE(!v.empty());
  bool heads = false, multi = false, body = false;
  for (const auto& line : v) {
    if (line.find("not distinct variables") != std::string::npos) heads = true;
    if (line.find("defined by 3 clauses") != std::string::npos) multi = true;
    if (line.find("not a single formula") != std::string::npos) body = true;
  }
  CHECK(heads);
  CHECK(multi);
  CHECK(body);
  CHECK_FALSE(is_completed_form(parse_program(kDelete3)));
}

TEST_CASE("a stray body variable is a violation") {
  auto v = completed_form_violations(parse_program("p(X) :- X = Y."));
  REQUIRE(v.size() == 1);
  CHECK(v.front().find("not in the head: Y") != std::string::npos);
}
