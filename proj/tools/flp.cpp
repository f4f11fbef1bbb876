#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flp/ast.hpp"
#include "flp/completion.hpp"
#include "flp/dfnf.hpp"
#include "flp/engine.hpp"
#include "flp/oracle.hpp"
#include "flp/subst.hpp"
#include "flp/syntax.hpp"
#include "flp/valuation.hpp"

namespace {

constexpr const char* kGrammarHelp = R"(Program syntax:
  clause      head. | head :- body.
  head        name(term, ...) | name
  body        element, element, ...      (comma separates elements)
  element     ! | formula
  formula     term = term | name(term, ...) | name
            | (formula, formula)         (conjunction)
            | (formula ; formula)        (disjunction)
            | \+ formula                 (negation as failure)
            | exists(Var, formula)
            | if([Var, ...], formula, formula)
            | true | fail
  term        Var | name | name(term, ...) | [t1, t2 | tail] | []
Variables start with an uppercase letter or underscore; names with a
lowercase letter. Queries are formulas; cut is clause-body only.)";

flp::Mode parse_mode(const std::string& s) {
  if (s == "liberal-general") return flp::Mode::LiberalGeneral;
  if (s == "liberal-completed") return flp::Mode::LiberalCompleted;
  if (s == "conservative") return flp::Mode::Conservative;
  if (s == "pessimistic") return flp::Mode::Pessimistic;
  throw flp::ValidationError({0, 0},
                             "--semantics expects one of: liberal-general, "
                             "liberal-completed, conservative, pessimistic");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct RunArgs {
  std::string program_path;
  std::string query;
  std::string semantics = "liberal-general";
  long long fuel = 10000;
  bool trace = false;
  bool auto_complete = false;
};

int do_run(const RunArgs& a) {
  flp::Program p = flp::parse_program(slurp(a.program_path));
  flp::FormulaP goal = flp::parse_goal(a.query);
  flp::Mode mode = parse_mode(a.semantics);
  if (a.auto_complete && (mode == flp::Mode::LiberalCompleted ||
                          mode == flp::Mode::Conservative))
    p = flp::complete(p);
  flp::RunOptions opts;
  opts.trace = a.trace;
  flp::RunResult r = flp::run(mode, p, goal, a.fuel, opts);
  if (a.trace && r.trace) std::cout << render_trace(*r.trace);
  switch (r.kind) {
    case flp::ResultKind::Success:
      std::cout << "yes " << flp::print_answer(r.answer, flp::free_vars(goal))
                << "\n";
      break;
    case flp::ResultKind::Fail:
      std::cout << "fail\n";
      break;
    case flp::ResultKind::Flounder:
      std::cout << "flounder\n";
      break;
    case flp::ResultKind::Diverge:
      std::cout << "diverge\n";
      break;
    case flp::ResultKind::FuelExhausted:
      std::cout << "unknown (fuel exhausted)\n";
      break;
  }
  return 0;
}

struct CompleteArgs {
  std::string program_path;
  std::string out_path;
};

int do_complete(const CompleteArgs& a) {
  flp::Program p = flp::parse_program(slurp(a.program_path));
  std::string text = flp::print_program(flp::complete(p));
  if (a.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(a.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + a.out_path);
    out << text;
  }
  return 0;
}

struct DfnfArgs {
  std::string formula;
};

int do_dfnf(const DfnfArgs& a) {
  flp::FormulaP f = flp::parse_goal(a.formula);
  flp::DfnfChain chain = flp::dfnf_chain(f);
  for (const auto& step : chain.steps)
    std::cout << step.rule << ": " << flp::print_formula(step.result) << "\n";
  std::cout << "normal form: " << flp::print_formula(chain.normal_form)
            << "\n";
  return 0;
}

struct DenoteArgs {
  std::string program_path;
  std::string goal;
  size_t unfold_depth = 2;
  size_t term_depth = 3;
};

int do_denote(const DenoteArgs& a) {
  flp::Program p = flp::parse_program(slurp(a.program_path));
  flp::FormulaP goal = flp::parse_goal(a.goal);
  flp::UniverseBound bound = flp::universe_for(p, a.term_depth);
  // Terms mentioned only in the goal count as part of the universe too.
  std::set<flp::FnSig> sigs(bound.signature.begin(), bound.signature.end());
  flp::collect_functors(goal, sigs);
  bound.signature.assign(sigs.begin(), sigs.end());
  flp::DenoteResult r = flp::denote(p, goal, a.unfold_depth, bound);
  std::cout << flp::truth_name(r.value) << "\n";
  if (r.witness)
    std::cout << "witness: " << flp::print_formula(r.witness) << "\n";
  std::cout << "explored: " << r.explored << " unfoldings in " << r.rounds
            << " rounds\n";
  return 0;
}

struct CheckArgs {
  std::string suite;
  uint64_t seed = 1;
  size_t cases = 200;
  long long fuel = 10000;
  size_t term_depth = 3;
  size_t unfold_depth = 2;  // accepted for symmetry; suites pick their own
  bool quiet = false;
};

int do_check(const CheckArgs& a) {
  std::vector<flp::SuiteReport> reports;
  if (a.suite == "witness") {
    reports.push_back(
        flp::run_witness_suite(a.seed, a.cases, a.fuel, a.term_depth));
  } else if (a.suite == "equivalence") {
    reports.push_back(
        flp::run_equivalence_completed_suite(a.seed, a.cases, a.fuel));
    reports.push_back(
        flp::run_completion_preservation_suite(a.seed, a.cases, a.fuel));
    reports.push_back(
        flp::run_conservative_correspondence_suite(a.seed, a.cases, a.fuel));
  } else if (a.suite == "dfnf") {
    reports.push_back(flp::run_dfnf_suite(a.seed, a.cases));
    reports.push_back(flp::run_pessimistic_bound_suite(a.seed, a.cases));
  } else if (a.suite == "raising") {
    reports.push_back(flp::run_raising_suite(a.seed, a.cases));
  } else if (a.suite == "completion") {
    reports.push_back(flp::run_completion_suite(a.seed, a.cases));
  } else {
    throw flp::ValidationError({0, 0},
                               "--suite expects one of: witness, equivalence, "
                               "dfnf, raising, completion");
  }
  bool all_ok = true;
  for (auto& r : reports) {
    if (a.quiet) r.first_counterexample.clear();
    std::cout << flp::format_report(r);
    all_ok = all_ok && r.ok();
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flp: a logic programming engine with cut, negation as "
               "failure, and a first-solution if construct"};
  app.footer(kGrammarHelp);
  app.require_subcommand(1);
  // Let --seed and --quiet be written after the subcommand too.
  app.fallthrough();

  uint64_t global_seed = 1;
  bool quiet = false;
  app.add_option("--seed", global_seed, "random seed for generative suites");
  app.add_flag("--quiet", quiet, "suppress counterexample listings");

  RunArgs run_args;
  CLI::App* c_run = app.add_subcommand("run", "evaluate a query");
  c_run->add_option("--program", run_args.program_path, "program file")
      ->required();
  c_run->add_option("--query", run_args.query, "goal formula")->required();
  c_run->add_option("--semantics", run_args.semantics,
                    "liberal-general | liberal-completed | conservative | "
                    "pessimistic");
  c_run->add_option("--fuel", run_args.fuel, "rule-application budget");
  c_run->add_flag("--trace", run_args.trace, "print the derivation tree");
  c_run->add_flag("--auto-complete", run_args.auto_complete,
                  "complete the program first if the mode needs it");

  CompleteArgs complete_args;
  CLI::App* c_complete =
      app.add_subcommand("complete", "transform a program to completed form");
  c_complete->add_option("--program", complete_args.program_path,
                         "program file")
      ->required();
  c_complete->add_option("--out", complete_args.out_path,
                         "write result here instead of stdout");

  DfnfArgs dfnf_args;
  CLI::App* c_dfnf = app.add_subcommand(
      "dfnf", "rewrite a formula to depth-first normal form");
  c_dfnf->add_option("--formula", dfnf_args.formula, "formula text")
      ->required();

  DenoteArgs denote_args;
  CLI::App* c_denote = app.add_subcommand(
      "denote", "three-valued denotation of a goal by unfolding");
  c_denote->add_option("--program", denote_args.program_path,
                       "completed-form program file")
      ->required();
  c_denote->add_option("--goal", denote_args.goal, "goal formula")->required();
  c_denote->add_option("--unfold-depth", denote_args.unfold_depth,
                       "unfolding rounds to explore");
  c_denote->add_option("--term-depth", denote_args.term_depth,
                       "ground-term universe depth");

  CheckArgs check_args;
  CLI::App* c_check =
      app.add_subcommand("check", "run a randomized property suite");
  c_check
      ->add_option("--suite", check_args.suite,
                   "witness | equivalence | dfnf | raising | completion")
      ->required();
  c_check->add_option("--cases", check_args.cases, "cases per suite");
  c_check->add_option("--fuel", check_args.fuel, "fuel per engine run");
  c_check->add_option("--term-depth", check_args.term_depth,
                      "ground universe depth for witness checking");
  c_check->add_option("--unfold-depth", check_args.unfold_depth,
                      "reserved; current suites pick their own unfold depth");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_run) return do_run(run_args);
    if (*c_complete) return do_complete(complete_args);
    if (*c_dfnf) return do_dfnf(dfnf_args);
    if (*c_denote) return do_denote(denote_args);
    if (*c_check) {
      check_args.seed = global_seed;
      check_args.quiet = quiet;
      return do_check(check_args);
    }
  } catch (const flp::ParseError& e) {
    std::cerr << "parse error at line " << e.pos.line << ", column "
              << e.pos.col << ": " << e.what() << "\n";
    return 2;
  } catch (const flp::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
