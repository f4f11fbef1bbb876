#include <string>

#include "doctest.h"
#include "flp/ast.hpp"
#include "flp/completion.hpp"
#include "flp/dfnf.hpp"
#include "flp/engine.hpp"
#include "flp/oracle.hpp"
#include "flp/subst.hpp"
#include "flp/syntax.hpp"
#include "flp/valuation.hpp"

using namespace flp;

namespace {

UniverseBound bits() {
  UniverseBound b;
  b.signature = {{"0", 0}, {"1", 0}};
  b.max_depth = 1;
  return b;
}

}  // namespace

TEST_CASE("generators repeat themselves under one seed") {
  for (uint64_t seed : {1u, 7u, 99u}) {
    GenConfig cfg;
    cfg.seed = seed;
    Program a = gen_program(cfg);
    Program b = gen_program(cfg);
    CHECK(alpha_equiv(a, b));
    CHECK(alpha_equiv(gen_completed_program(cfg), gen_completed_program(cfg)));
    CHECK(alpha_equiv(gen_goal(cfg, a), gen_goal(cfg, a)));
    CHECK(alpha_equiv(gen_rewrite_formula(cfg), gen_rewrite_formula(cfg)));
  }
  GenConfig one, two;
  one.seed = 5;
  two.seed = 6;
  // Different seeds should not collide on such a small sample.
  CHECK_FALSE(alpha_equiv(gen_program(one), gen_program(two)));
}

TEST_CASE("generated programs survive the printer and reparse") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    Program p = gen_program(cfg);
    CHECK(alpha_equiv(parse_program(print_program(p)), p));
  }
}

TEST_CASE("generated completed programs really are completed") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    CHECK(is_completed_form(gen_completed_program(cfg)));
  }
}

TEST_CASE("generated ground formulas are closed and outer-disjunction") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    FormulaP f = gen_ground_o_formula(cfg);
    CHECK(is_closed(f));
    CHECK(is_outer_disjunction(f));
  }
}

TEST_CASE("a plain success and a plain failure both pass the check") {
  Program p = parse_program("p(X1) :- X1 = 0.");
  CHECK(check_witness(p, parse_goal("p(X)"), 1000, bits()).verdict ==
        WitnessVerdict::Pass);
  CHECK(check_witness(p, parse_goal("p(1)"), 1000, bits()).verdict ==
        WitnessVerdict::Pass);
  CHECK(check_witness(p, parse_goal("p(X), X = 1"), 1000, bits()).verdict ==
        WitnessVerdict::Pass);
}

TEST_CASE("an open negation is inconclusive under the choice rules") {
  Program empty;
  WitnessReport r =
      check_witness(empty, parse_goal("\\+ (X = 0), X = 1"), 1000, bits());
  CHECK(r.verdict == WitnessVerdict::Skipped);
}

TEST_CASE("the liberal rules break the failure property and get caught") {
  Program empty;
  WitnessReport r = check_witness(empty, parse_goal("\\+ (X = 0), X = 1"),
                                  1000, bits(), Mode::LiberalCompleted);
  CHECK(r.verdict == WitnessVerdict::Violation);
  CHECK(r.detail.find("failure witness broke") != std::string::npos);
  CHECK(r.detail.find("1 = 1") != std::string::npos);
}

TEST_CASE("the liberal rules break the success property and get caught") {
  Program empty;
  WitnessReport r =
      check_witness(empty, parse_goal("\\+ (\\+ (X = 0)), X = 1"), 1000,
                    bits(), Mode::LiberalCompleted);
  CHECK(r.verdict == WitnessVerdict::Violation);
  CHECK(r.detail.find("success witness broke") != std::string::npos);
}

TEST_CASE("answers compare up to variable renaming") {
  Subst a, b, c;
  a.bind("X", Term::var("K"));
  a.bind("Y", Term::fn("s", {Term::var("K")}));
  b.bind("X", Term::var("M"));
  b.bind("Y", Term::fn("s", {Term::var("M")}));
  c.bind("X", Term::var("M"));
  c.bind("Y", Term::fn("s", {Term::var("N")}));
  CHECK(answers_equal(a, b));
  CHECK_FALSE(answers_equal(a, c));
  CHECK_FALSE(answers_equal(a, Subst{}));
}

TEST_CASE("brute unfolding tabulates the one-step denotation") {
  Program p = parse_program(
      "d(X, Y, Z) :-\n"
      "    (Y = [], Z = [])\n"
      "  ; if([Ys], Y = [X|Ys], d(X, Ys, Z))\n"
      "  ; (\\+ exists(Ys, Y = [X|Ys]),\n"
      "     exists(Yh, exists(Ys, exists(Zs,\n"
      "       (Y = [Yh|Ys], Z = [Yh|Zs], d(X, Ys, Zs)))))).\n");
  auto table = brute_unfold_pessimistic(p, parse_goal("d(a, [], Z)"), 1);
  REQUIRE(table.size() == 2);
  CHECK(alpha_equiv(table[0].first,
                    Formula::exists("Z", parse_goal("d(a, [], Z)"))));
  CHECK(table[0].second == TruthValue::U);
  CHECK(table[1].second == TruthValue::T);

  // A self-looping call never leaves U, at any number of rounds.
  Program loop = parse_program("loop(X) :- loop(X).");
  for (auto& [g, v] : brute_unfold_pessimistic(loop, parse_goal("loop(0)"), 3))
    CHECK(v == TruthValue::U);
}

TEST_CASE("small suite runs come back clean") {
  SuiteReport w = run_witness_suite(11, 25, 4000, 2);
  CHECK(w.ok());
  CHECK(w.cases == 25);
  CHECK(w.passed + w.skipped == w.cases);

  CHECK(run_equivalence_completed_suite(11, 25, 4000).ok());
  CHECK(run_completion_preservation_suite(11, 25, 4000).ok());
  CHECK(run_conservative_correspondence_suite(11, 25, 4000).ok());
  CHECK(run_raising_suite(11, 25).ok());
  CHECK(run_completion_suite(11, 25).ok());
  CHECK(run_pessimistic_bound_suite(11, 25).ok());
}

TEST_CASE("suite reports format as one summary line plus detail") {
  SuiteReport r;
  r.name = "demo";
  r.cases = 3;
  r.passed = 2;
  r.violations = 1;
  r.first_counterexample = "goal g";
  std::string text = format_report(r);
  CHECK(text.find("suite demo") != std::string::npos);
  CHECK(text.find("3 cases") != std::string::npos);
  CHECK(text.find("1 violation") != std::string::npos);
  CHECK(text.find("goal g") != std::string::npos);
}
