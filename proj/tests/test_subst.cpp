#include "doctest.h"
#include "flp/ast.hpp"
#include "flp/subst.hpp"
#include "flp/syntax.hpp"

using namespace flp;

TEST_CASE("unification binds right variable to left term") {
  auto r = unify(Term::var("X"), Term::var("Y"));
  REQUIRE(r.has_value());
  const TermP* t = r->lookup("Y");
  REQUIRE(t != nullptr);
  CHECK((*t)->name == "X");
  CHECK(r->lookup("X") == nullptr);
}

TEST_CASE("unification solves structured terms") {
  TermP a = parse_term_text("f(X, g(X, b))");
  TermP b = parse_term_text("f(a, g(Y, Z))");
  auto r = unify(a, b);
  REQUIRE(r.has_value());
  NameSupply ns;
  CHECK(term_eq(apply_subst(*r, a), apply_subst(*r, b)));
  CHECK(term_eq(apply_subst(*r, Term::var("Z")), Term::fn("b")));
}

TEST_CASE("occurs check rejects cyclic bindings") {
  CHECK_FALSE(unify(Term::var("X"), parse_term_text("s(X)")).has_value());
  CHECK_FALSE(unify(parse_term_text("f(X, X)"),
                    parse_term_text("f(Y, s(Y))"))
                  .has_value());
}

TEST_CASE("unification failures") {
  CHECK_FALSE(unify(Term::fn("a"), Term::fn("b")).has_value());
  CHECK_FALSE(
      unify(parse_term_text("f(a)"), parse_term_text("g(a)")).has_value());
  CHECK_FALSE(
      unify(parse_term_text("[a]"), parse_term_text("[]")).has_value());
}

TEST_CASE("composition applies left then right") {
  Subst a = Subst::single("X", Term::var("Y"));
  Subst b = Subst::single("Y", Term::fn("c"));
  Subst ab = compose(a, b);
  CHECK(term_eq(apply_subst(ab, Term::var("X")), Term::fn("c")));
  CHECK(term_eq(apply_subst(ab, Term::var("Y")), Term::fn("c")));

  TermP t = parse_term_text("f(X, Y, Z)");
  CHECK(term_eq(apply_subst(ab, t), apply_subst(b, apply_subst(a, t))));
}

TEST_CASE("composed substitutions stay idempotent") {
  Subst a = Subst::single("X", parse_term_text("s(Y)"));
  Subst b = Subst::single("Y", Term::fn("0"));
  Subst ab = compose(a, b);
  CHECK(ab.idempotent());
  const TermP* x = ab.lookup("X");
  REQUIRE(x != nullptr);
  CHECK(term_eq(*x, parse_term_text("s(0)")));
}

TEST_CASE("substitution avoids capture under binders") {
  NameSupply ns;
  FormulaP f = parse_goal("exists(Y, p(X, Y))");
  FormulaP g = apply_subst(Subst::single("X", Term::var("Y")), f, ns);
  REQUIRE(g->kind == Formula::Kind::Exists);
  // The binder must have moved out of the way of the free Y.
  CHECK(g->var != "Y");
  CHECK(g->left->args[0]->name == "Y");
  CHECK(g->left->args[1]->name == g->var);
}

TEST_CASE("specializes compares answer generality") {
  Subst general = Subst::single("X", Term::var("Y"));
  Subst specific = Subst::single("X", Term::fn("c"));
  CHECK(specializes(specific, general));
  CHECK_FALSE(specializes(general, specific));
  CHECK(specializes(general, general));
}

TEST_CASE("answers equal up to renaming specialize both ways") {
  Subst a = Subst::single("X", parse_term_text("s(Y)"));
  Subst b = Subst::single("X", parse_term_text("s(Z)"));
  CHECK(specializes(a, b));
  CHECK(specializes(b, a));
}

TEST_CASE("restrict_to keeps only the named variables") {
  Subst s;
  s.bind("X", Term::fn("a"));
  s.bind("Y", Term::fn("b"));
  Subst r = restrict_to(s, {"X"});
  CHECK(r.lookup("X") != nullptr);
  CHECK(r.lookup("Y") == nullptr);
}

TEST_CASE("alpha equivalence ignores bound names only") {
  CHECK(alpha_equiv(parse_goal("exists(X, X = 0)"),
                    parse_goal("exists(Y, Y = 0)")));
  CHECK_FALSE(alpha_equiv(parse_goal("X = 0"), parse_goal("Y = 0")));
  CHECK(alpha_equiv(parse_goal("if([X], X = 0, p(X))"),
                    parse_goal("if([Z], Z = 0, p(Z))")));
  CHECK_FALSE(alpha_equiv(parse_goal("exists(X, p(X, Y))"),
                          parse_goal("exists(X, p(Y, X))")));
}

TEST_CASE("alpha keys agree exactly for alpha-equivalent formulas") {
  FormulaP a = parse_goal("exists(X, (X = 0 ; p(X, Y)))");
  FormulaP b = parse_goal("exists(W, (W = 0 ; p(W, Y)))");
  FormulaP c = parse_goal("exists(W, (W = 0 ; p(Y, W)))");
  CHECK(alpha_key(a) == alpha_key(b));
  CHECK(alpha_key(a) != alpha_key(c));
}

TEST_CASE("clause alpha equivalence renames clause variables wholesale") {
  Program p1 = parse_program("p(X, Y) :- q(X), r(Y).");
  Program p2 = parse_program("p(A, B) :- q(A), r(B).");
  Program p3 = parse_program("p(A, B) :- q(B), r(A).");
  CHECK(alpha_equiv(p1, p2));
  CHECK_FALSE(alpha_equiv(p1, p3));
}
