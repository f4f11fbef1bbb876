#include "flp/oracle.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flp/completion.hpp"
#include "flp/dfnf.hpp"
#include "flp/engine.hpp"
#include "flp/subst.hpp"
#include "flp/syntax.hpp"

namespace flp {
namespace {

// Verification reruns inside check_witness get this factor of extra fuel,
// and so does the completed side in the preservation suite.
constexpr long long kSlack = 4;

// splitmix64 finalizer; decorrelates per-case seeds derived from a base.
uint64_t mix(uint64_t seed, uint64_t i) {
  uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (i + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

const char* kPredNames[] = {"p", "q", "r"};

struct Gen {
  std::mt19937_64 rng;
  GenConfig cfg;
  int local_counter = 0;  // fresh bound-variable names per formula

  explicit Gen(const GenConfig& c) : rng(c.seed), cfg(c) {}

  size_t pick(size_t n) { return n <= 1 ? 0 : rng() % n; }
  bool chance(int pct) { return static_cast<int>(rng() % 100) < pct; }

  std::string fresh_local(const char* prefix) {
    return std::string(prefix) + std::to_string(++local_counter);
  }

  TermP ground_term(int depth) {
    if (depth <= 1 || chance(55)) return chance(50) ? zero() : one();
    return Term::fn("s", {ground_term(depth - 1)});
  }

  TermP term(int depth, const std::vector<std::string>& vars) {
    if (!vars.empty() && chance(35)) return Term::var(vars[pick(vars.size())]);
    if (depth <= 1 || chance(50)) return chance(50) ? zero() : one();
    return Term::fn("s", {term(depth - 1, vars)});
  }

  // Call target for clause/body position `i`: mostly predicates defined
  // earlier, so most programs stay recursion-free, with some back edges.
  size_t call_target(size_t i, size_t npred) {
    if (i > 0 && chance(70)) return pick(i);
    return pick(npred);
  }

  std::vector<TermP> call_args(size_t arity, int depth,
                               const std::vector<std::string>& vars) {
    std::vector<TermP> out;
    for (size_t k = 0; k < arity; ++k) out.push_back(term(depth, vars));
    return out;
  }
};

std::vector<FnSig> defined_preds(const Program& p) {
  std::vector<FnSig> out;
  for (const auto& c : p.clauses) {
    FnSig sig{c.pred, c.arity()};
    if (std::find(out.begin(), out.end(), sig) == out.end())
      out.push_back(sig);
  }
  return out;
}

// Body formula for a directly-generated completed program. Every free
// variable comes from `scope`, so condition 4 of completed form holds by
// construction.
FormulaP completed_body(Gen& g, int depth, std::vector<std::string> scope,
                        size_t self, const std::vector<size_t>& arities) {
  auto leaf = [&]() -> FormulaP {
    if (!arities.empty() && g.chance(40)) {
      size_t j = g.call_target(self, arities.size());
      return Formula::call(kPredNames[j],
                           g.call_args(arities[j], g.cfg.max_term_depth, scope));
    }
    if (!scope.empty() && g.chance(55))
      return Formula::eq(Term::var(scope[g.pick(scope.size())]),
                         g.term(g.cfg.max_term_depth, scope));
    return Formula::eq(g.term(g.cfg.max_term_depth, scope),
                       g.term(g.cfg.max_term_depth, scope));
  };
  if (depth <= 0) return leaf();
  int roll = static_cast<int>(g.rng() % 100);
  if (roll < 22)
    return Formula::conj(completed_body(g, depth - 1, scope, self, arities),
                         completed_body(g, depth - 1, scope, self, arities));
  if (roll < 38)
    return Formula::disj(completed_body(g, depth - 1, scope, self, arities),
                         completed_body(g, depth - 1, scope, self, arities));
  if (roll < 52) {
    std::string v = g.fresh_local("L");
    auto inner = scope;
    inner.push_back(v);
    return Formula::exists(v,
                           completed_body(g, depth - 1, inner, self, arities));
  }
  if (roll < 62) {
    // Negation body: closed in mode-safe generation, otherwise free to
    // mention clause variables (and so to flounder conservatively).
    auto inner_scope = g.cfg.mode_safe ? std::vector<std::string>{} : scope;
    return Formula::neg(
        completed_body(g, depth - 1, inner_scope, self, arities));
  }
  if (roll < 74) {
    std::string v = g.fresh_local("V");
    std::vector<std::string> cond_scope{v};
    if (!g.cfg.mode_safe) {
      cond_scope = scope;
      cond_scope.push_back(v);
    }
    auto branch_scope = scope;
    branch_scope.push_back(v);
    return Formula::if_then(
        {v}, completed_body(g, 1, cond_scope, self, arities),
        completed_body(g, depth - 1, branch_scope, self, arities));
  }
  return leaf();
}

FormulaP goal_formula(Gen& g, const std::vector<FnSig>& preds);

FormulaP simple_goal_atom(Gen& g, const std::vector<FnSig>& preds,
                          const std::vector<std::string>& scope) {
  if (!preds.empty() && g.chance(65)) {
    const FnSig& sig = preds[g.pick(preds.size())];
    std::vector<TermP> args;
    for (size_t k = 0; k < sig.arity; ++k) {
      if (!scope.empty() && g.chance(30))
        args.push_back(Term::var(scope[g.pick(scope.size())]));
      else
        args.push_back(g.ground_term(g.cfg.max_term_depth + 1));
    }
    return Formula::call(sig.name, std::move(args));
  }
  if (!scope.empty() && g.chance(60))
    return Formula::eq(Term::var(scope[g.pick(scope.size())]),
                       g.ground_term(g.cfg.max_term_depth + 1));
  return Formula::eq(g.ground_term(g.cfg.max_term_depth),
                     g.ground_term(g.cfg.max_term_depth));
}

FormulaP closed_goal_atom(Gen& g, const std::vector<FnSig>& preds) {
  std::vector<std::string> none;
  return simple_goal_atom(g, preds, none);
}

FormulaP goal_atom(Gen& g, const std::vector<FnSig>& preds,
                   const std::vector<std::string>& scope, int& or_budget) {
  int roll = static_cast<int>(g.rng() % 100);
  if (roll < 12 && or_budget > 0) {
    --or_budget;
    return Formula::disj(simple_goal_atom(g, preds, scope),
                         simple_goal_atom(g, preds, scope));
  }
  if (roll < 22) {
    std::string v = g.fresh_local("W");
    auto inner = scope;
    inner.push_back(v);
    return Formula::exists(v, simple_goal_atom(g, preds, inner));
  }
  if (roll < 30) {
    if (g.cfg.mode_safe) return Formula::neg(closed_goal_atom(g, preds));
    return Formula::neg(simple_goal_atom(g, preds, scope));
  }
  if (roll < 38) {
    std::string v = g.fresh_local("V");
    std::vector<std::string> vonly{v};
    FormulaP cond = g.cfg.mode_safe ? simple_goal_atom(g, preds, vonly)
                                    : simple_goal_atom(g, preds, scope);
    auto inner = scope;
    inner.push_back(v);
    return Formula::if_then({v}, cond, simple_goal_atom(g, preds, inner));
  }
  return simple_goal_atom(g, preds, scope);
}

FormulaP goal_formula(Gen& g, const std::vector<FnSig>& preds) {
  std::vector<std::string> scope;
  if (g.chance(70)) scope.push_back("X");
  if (!scope.empty() && g.chance(35)) scope.push_back("Y");
  int or_budget = 2;
  int atoms = 1 + static_cast<int>(g.pick(3));
  FormulaP out = goal_atom(g, preds, scope, or_budget);
  for (int k = 1; k < atoms; ++k)
    out = Formula::conj(out, goal_atom(g, preds, scope, or_budget));
  return out;
}

// Grammar-directed generation for the disjunction-position classes. All
// equations keep the right side ground, so existential witnesses always
// occur syntactically in the formula and stay inside a bounded universe.
FormulaP gen_o(Gen& g, int depth, const std::vector<std::string>& scope);

FormulaP gen_n(Gen& g, int depth, const std::vector<std::string>& scope) {
  auto leaf = [&]() -> FormulaP {
    if (g.chance(45)) {
      size_t arity = 1 + g.pick(2);
      std::vector<TermP> args;
      for (size_t k = 0; k < arity; ++k) {
        if (!scope.empty() && g.chance(50))
          args.push_back(Term::var(scope[g.pick(scope.size())]));
        else
          args.push_back(g.ground_term(g.cfg.max_term_depth));
      }
      return Formula::call(arity == 1 ? "p" : "q", std::move(args));
    }
    if (!scope.empty() && g.chance(60))
      return Formula::eq(Term::var(scope[g.pick(scope.size())]),
                         g.ground_term(g.cfg.max_term_depth));
    return Formula::eq(g.ground_term(g.cfg.max_term_depth),
                       g.ground_term(g.cfg.max_term_depth));
  };
  if (depth <= 0) return leaf();
  int roll = static_cast<int>(g.rng() % 100);
  if (roll < 28)
    return Formula::conj(gen_n(g, depth - 1, scope), gen_n(g, depth - 1, scope));
  if (roll < 45) {
    std::string v = g.fresh_local("W");
    auto inner = scope;
    inner.push_back(v);
    return Formula::exists(v, gen_n(g, depth - 1, inner));
  }
  if (roll < 58) {
    std::vector<std::string> none;
    return Formula::neg(gen_o(g, depth - 1, none));
  }
  return leaf();
}

FormulaP gen_o(Gen& g, int depth, const std::vector<std::string>& scope) {
  if (depth > 0 && g.chance(40))
    return Formula::disj(gen_o(g, depth - 1, scope),
                         gen_o(g, depth - 1, scope));
  return gen_n(g, depth, scope);
}

// Formulas for the rewrite suites: heavy on if/or/exists so every rule
// gets exercised. Mode-safe choices keep pessimistic runs flounder-free.
FormulaP rewrite_formula(Gen& g, int depth,
                         const std::vector<std::string>& scope) {
  auto leaf = [&]() -> FormulaP {
    if (g.chance(40)) {
      std::vector<TermP> args{g.term(g.cfg.max_term_depth, scope)};
      return Formula::call("p", std::move(args));
    }
    return Formula::eq(g.term(g.cfg.max_term_depth, scope),
                       g.term(g.cfg.max_term_depth, scope));
  };
  if (depth <= 0) return leaf();
  int roll = static_cast<int>(g.rng() % 100);
  if (roll < 20)
    return Formula::conj(rewrite_formula(g, depth - 1, scope),
                         rewrite_formula(g, depth - 1, scope));
  if (roll < 40)
    return Formula::disj(rewrite_formula(g, depth - 1, scope),
                         rewrite_formula(g, depth - 1, scope));
  if (roll < 58) {
    std::string v = g.fresh_local("V");
    std::vector<std::string> cond_scope{v};
    auto branch_scope = scope;
    branch_scope.push_back(v);
    return Formula::if_then({v}, rewrite_formula(g, 1, cond_scope),
                            rewrite_formula(g, depth - 1, branch_scope));
  }
  if (roll < 72) {
    std::string v = g.fresh_local("W");
    auto inner = scope;
    inner.push_back(v);
    return Formula::exists(v, rewrite_formula(g, depth - 1, inner));
  }
  if (roll < 82) {
    std::vector<std::string> none;
    return Formula::neg(rewrite_formula(g, depth - 1, none));
  }
  return leaf();
}

std::string describe_case(const Program& p, const FormulaP& g) {
  std::ostringstream os;
  os << "program:\n" << print_program(p) << "goal: " << print_formula(g);
  return os.str();
}

bool set_first(SuiteReport& rep, const std::string& detail) {
  if (rep.first_counterexample.empty()) rep.first_counterexample = detail;
  return true;
}

}  // namespace

Program gen_program(const GenConfig& cfg) {
  Gen g(cfg);
  Program out;
  size_t npred = 1 + g.pick(3);
  std::vector<size_t> arities;
  for (size_t i = 0; i < npred; ++i) arities.push_back(g.pick(3));
  const std::vector<std::string> head_vars{"A", "B", "C"};
  for (size_t i = 0; i < npred; ++i) {
    size_t ncl = 1 + g.pick(static_cast<size_t>(cfg.max_clauses));
    for (size_t ci = 0; ci < ncl; ++ci) {
      Clause c;
      c.pred = kPredNames[i];
      for (size_t k = 0; k < arities[i]; ++k) {
        int roll = static_cast<int>(g.rng() % 100);
        if (roll < 55)
          c.head.push_back(Term::var(head_vars[g.pick(head_vars.size())]));
        else if (roll < 80)
          c.head.push_back(g.ground_term(cfg.max_term_depth));
        else
          c.head.push_back(Term::fn(
              "s", {Term::var(head_vars[g.pick(head_vars.size())])}));
      }
      std::vector<std::string> vars = head_vars;
      vars.push_back("M");
      size_t blen = g.pick(static_cast<size_t>(cfg.max_body_len) + 1);
      for (size_t k = 0; k < blen; ++k) {
        int roll = static_cast<int>(g.rng() % 100);
        if (roll < 12) {
          c.body.push_back(BodyElt::cut());
        } else if (roll < 55) {
          c.body.push_back(BodyElt::goal(
              Formula::eq(g.term(cfg.max_term_depth, vars),
                          g.term(cfg.max_term_depth, vars))));
        } else if (roll < 85) {
          size_t j = g.call_target(i, npred);
          c.body.push_back(BodyElt::goal(Formula::call(
              kPredNames[j], g.call_args(arities[j], cfg.max_term_depth, vars))));
        } else if (roll < 92) {
          c.body.push_back(BodyElt::goal(
              Formula::disj(Formula::eq(g.term(2, vars), g.term(2, vars)),
                            Formula::eq(g.term(2, vars), g.term(2, vars)))));
        } else {
          // Closed negation: safe under the conservative choice rules.
          std::vector<std::string> none;
          size_t j = g.call_target(i, npred);
          FormulaP inner = Formula::call(
              kPredNames[j], g.call_args(arities[j], cfg.max_term_depth, none));
          c.body.push_back(BodyElt::goal(Formula::neg(inner)));
        }
      }
      out.clauses.push_back(std::move(c));
    }
  }
  return out;
}

Program gen_completed_program(const GenConfig& cfg) {
  Gen g(cfg);
  Program out;
  size_t npred = 1 + g.pick(3);
  std::vector<size_t> arities;
  for (size_t i = 0; i < npred; ++i) arities.push_back(g.pick(3));
  const std::vector<std::string> params{"A", "B"};
  for (size_t i = 0; i < npred; ++i) {
    Clause c;
    c.pred = kPredNames[i];
    std::vector<std::string> scope;
    for (size_t k = 0; k < arities[i]; ++k) {
      c.head.push_back(Term::var(params[k]));
      scope.push_back(params[k]);
    }
    c.body.push_back(BodyElt::goal(
        completed_body(g, cfg.max_formula_depth, scope, i, arities)));
    out.clauses.push_back(std::move(c));
  }
  return out;
}

FormulaP gen_goal(const GenConfig& cfg, const Program& p) {
  Gen g(cfg);
  g.rng.discard(7);  // decouple from the program drawn with the same seed
  return goal_formula(g, defined_preds(p));
}

FormulaP gen_ground_o_formula(const GenConfig& cfg) {
  Gen g(cfg);
  std::vector<std::string> none;
  return gen_o(g, cfg.max_formula_depth, none);
}

FormulaP gen_n_formula(const GenConfig& cfg,
                       const std::vector<std::string>& free_vars) {
  Gen g(cfg);
  return gen_n(g, cfg.max_formula_depth, free_vars);
}

FormulaP gen_rewrite_formula(const GenConfig& cfg) {
  Gen g(cfg);
  std::vector<std::string> scope;
  if (g.chance(60)) scope.push_back("X");
  return rewrite_formula(g, cfg.max_formula_depth, scope);
}

WitnessReport check_witness(const Program& p, const FormulaP& g,
                            long long fuel, const UniverseBound& bound,
                            Mode mode) {
  RunResult r = run(mode, p, g, fuel);
  WitnessReport rep;
  switch (r.kind) {
    case ResultKind::Flounder:
    case ResultKind::FuelExhausted:
      rep.verdict = WitnessVerdict::Skipped;
      return rep;
    case ResultKind::Diverge:
      // None of the checkable modes has a divergence verdict.
      rep.verdict = WitnessVerdict::Violation;
      rep.detail = "run reported diverge\n" + describe_case(p, g);
      return rep;
    case ResultKind::Success: {
      // Success property: the answer instance, with leftover variables
      // sent to 0, must itself succeed.
      NameSupply ns;
      FormulaP inst = apply_subst(r.answer, g, ns);
      Subst zeros;
      for (const auto& v : free_vars(inst)) zeros.bind(v, zero());
      FormulaP ground_goal = apply_subst(zeros, inst, ns);
      RunResult rr = run(mode, p, ground_goal, fuel * kSlack);
      if (rr.kind == ResultKind::Success) {
        rep.verdict = WitnessVerdict::Pass;
        return rep;
      }
      rep.verdict = WitnessVerdict::Violation;
      rep.detail = "success witness broke: grounded instance " +
                   print_formula(ground_goal) + " gave " +
                   result_name(rr.kind) + "\n" + describe_case(p, g);
      return rep;
    }
    case ResultKind::Fail: {
      // Failure property: every ground instance over the bounded universe
      // must fail as well.
      std::vector<TermP> universe = enumerate_ground(bound);
      std::vector<std::string> vars = free_vars(g);
      std::vector<size_t> idx(vars.size(), 0);
      NameSupply ns;
      while (true) {
        Subst inst;
        for (size_t k = 0; k < vars.size(); ++k)
          inst.bind(vars[k], universe[idx[k]]);
        FormulaP ground_goal = apply_subst(inst, g, ns);
        RunResult rr = run(mode, p, ground_goal, fuel * kSlack);
        if (rr.kind != ResultKind::Fail) {
          rep.verdict = WitnessVerdict::Violation;
          rep.detail = "failure witness broke: instance " +
                       print_formula(ground_goal) + " gave " +
                       result_name(rr.kind) + "\n" + describe_case(p, g);
          return rep;
        }
        size_t k = 0;
        for (; k < idx.size(); ++k) {
          if (++idx[k] < universe.size()) break;
          idx[k] = 0;
        }
        if (k == idx.size()) break;  // odometer wrapped: all instances done
      }
      rep.verdict = WitnessVerdict::Pass;
      return rep;
    }
  }
  rep.verdict = WitnessVerdict::Skipped;
  return rep;
}

std::vector<std::pair<FormulaP, TruthValue>> brute_unfold_pessimistic(
    const Program& p, const FormulaP& g, size_t rounds) {
  constexpr size_t kCeiling = 20000;
  FormulaP g0 = Formula::exists_all(free_vars(g), g);
  std::vector<std::pair<FormulaP, TruthValue>> out;
  out.emplace_back(g0, pessimistic_outcome(g0));
  std::set<std::string> seen{alpha_key(g0)};
  std::vector<FormulaP> frontier{g0};
  for (size_t round = 1; round <= rounds && !frontier.empty(); ++round) {
    std::vector<FormulaP> next;
    for (const auto& f : frontier) {
      for (const auto& u : unfold_once(p, f)) {
        if (!seen.insert(alpha_key(u)).second) continue;
        out.emplace_back(u, pessimistic_outcome(u));
        next.push_back(u);
        if (out.size() > kCeiling)
          throw std::runtime_error(
              "unfolding frontier exceeded its ceiling (" +
              std::to_string(kCeiling) + " formulas)");
      }
    }
    frontier = std::move(next);
  }
  return out;
}

bool answers_equal(const Subst& a, const Subst& b) {
  return specializes(a, b) && specializes(b, a);
}

std::string format_report(const SuiteReport& r) {
  std::ostringstream os;
  os << "suite " << r.name << ": " << r.cases << " cases, " << r.passed
     << " passed, " << r.skipped << " skipped, " << r.violations
     << " violations";
  if (!r.note.empty()) os << " (" << r.note << ")";
  os << "\n";
  if (!r.first_counterexample.empty())
    os << "first counterexample:\n" << r.first_counterexample << "\n";
  return os.str();
}

SuiteReport run_witness_suite(uint64_t seed, size_t cases, long long fuel,
                              size_t universe_depth) {
  SuiteReport rep;
  rep.name = "witness";
  rep.cases = cases;
  UniverseBound bound{{{"0", 0}, {"1", 0}, {"s", 1}}, universe_depth};
  for (size_t i = 0; i < cases; ++i) {
    GenConfig cfg;
    cfg.seed = mix(seed, i);
    Program p = gen_program(cfg);
    Program acc = complete(p);
    FormulaP g = gen_goal(cfg, p);
    WitnessReport w = check_witness(acc, g, fuel, bound);
    switch (w.verdict) {
      case WitnessVerdict::Pass:
        ++rep.passed;
        break;
      case WitnessVerdict::Skipped:
        ++rep.skipped;
        break;
      case WitnessVerdict::Violation:
        ++rep.violations;
        set_first(rep, w.detail);
        break;
    }
  }
  rep.note = std::to_string(rep.cases - rep.skipped) + " of " +
             std::to_string(rep.cases) + " conclusive";
  return rep;
}

SuiteReport run_equivalence_completed_suite(uint64_t seed, size_t cases,
                                            long long fuel) {
  SuiteReport rep;
  rep.name = "equivalence/completed";
  rep.cases = cases;
  for (size_t i = 0; i < cases; ++i) {
    GenConfig cfg;
    cfg.seed = mix(seed ^ 0x11, i);
    Program p = gen_completed_program(cfg);
    FormulaP g = gen_goal(cfg, p);
    RunResult general = run(Mode::LiberalGeneral, p, g, fuel);
    RunResult completed = run(Mode::LiberalCompleted, p, g, fuel);
    if (general.kind == ResultKind::FuelExhausted ||
        completed.kind == ResultKind::FuelExhausted) {
      ++rep.skipped;
      continue;
    }
    bool same = general.kind == completed.kind &&
                (general.kind != ResultKind::Success ||
                 answers_equal(general.answer, completed.answer));
    if (same) {
      ++rep.passed;
    } else {
      ++rep.violations;
      set_first(rep, "clause resolution gave " +
                         std::string(result_name(general.kind)) +
                         ", body expansion gave " +
                         result_name(completed.kind) + "\n" +
                         describe_case(p, g));
    }
  }
  return rep;
}

SuiteReport run_completion_preservation_suite(uint64_t seed, size_t cases,
                                              long long fuel) {
  SuiteReport rep;
  rep.name = "equivalence/completion";
  rep.cases = cases;
  for (size_t i = 0; i < cases; ++i) {
    GenConfig cfg;
    cfg.seed = mix(seed ^ 0x22, i);
    Program p = gen_program(cfg);
    FormulaP g = gen_goal(cfg, p);
    RunResult before = run(Mode::LiberalGeneral, p, g, fuel);
    if (before.kind == ResultKind::FuelExhausted) {
      ++rep.skipped;
      continue;
    }
    Program acc = complete(p);
    RunResult after = run(Mode::LiberalGeneral, acc, g, fuel * kSlack);
    bool same = before.kind == after.kind &&
                (before.kind != ResultKind::Success ||
                 answers_equal(before.answer, after.answer));
    if (same) {
      ++rep.passed;
    } else {
      ++rep.violations;
      set_first(rep, "original gave " + std::string(result_name(before.kind)) +
                         ", completed program gave " +
                         result_name(after.kind) + "\n" + describe_case(p, g) +
                         "\ncompleted:\n" + print_program(acc));
    }
  }
  return rep;
}

SuiteReport run_conservative_correspondence_suite(uint64_t seed, size_t cases,
                                                  long long fuel) {
  SuiteReport rep;
  rep.name = "equivalence/conservative";
  rep.cases = cases;
  for (size_t i = 0; i < cases; ++i) {
    GenConfig cfg;
    cfg.seed = mix(seed ^ 0x33, i);
    cfg.mode_safe = (i % 2 == 0);  // half the cases may flounder
    Program p = gen_completed_program(cfg);
    FormulaP g = gen_goal(cfg, p);
    RunResult cons = run(Mode::Conservative, p, g, fuel);
    RunResult lib = run(Mode::LiberalCompleted, p, g, fuel);
    if (cons.kind == ResultKind::FuelExhausted ||
        lib.kind == ResultKind::FuelExhausted) {
      ++rep.skipped;
      continue;
    }
    if (cons.kind == ResultKind::Flounder) {
      // A floundering conservative run constrains nothing.
      ++rep.passed;
      continue;
    }
    bool same = cons.kind == lib.kind &&
                (cons.kind != ResultKind::Success ||
                 answers_equal(cons.answer, lib.answer));
    if (same) {
      ++rep.passed;
    } else {
      ++rep.violations;
      set_first(rep, "conservative gave " +
                         std::string(result_name(cons.kind)) +
                         " but liberal gave " + result_name(lib.kind) + "\n" +
                         describe_case(p, g));
    }
  }
  return rep;
}

SuiteReport run_dfnf_suite(uint64_t seed, size_t cases) {
  SuiteReport rep;
  rep.name = "dfnf";
  rep.cases = cases;
  const RedexChoice others[] = {RedexChoice::OutermostRightmost,
                                RedexChoice::InnermostLeftmost,
                                RedexChoice::InnermostRightmost};
  for (size_t i = 0; i < cases; ++i) {
    GenConfig cfg;
    cfg.seed = mix(seed ^ 0x44, i);
    FormulaP f = gen_rewrite_formula(cfg);
    bool bad = false;
    DfnfChain chain = dfnf_chain(f);

    // Potential depth never grows along the rewrite.
    size_t pd = potential_depth(f);
    for (const auto& step : chain.steps) {
      size_t next = potential_depth(step.result);
      if (next > pd) {
        bad = true;
        set_first(rep, "potential depth grew from " + std::to_string(pd) +
                           " to " + std::to_string(next) + " by " + step.rule +
                           " on " + print_formula(f));
        break;
      }
      pd = next;
    }

    // Every redex strategy lands on the same normal form.
    if (!bad) {
      for (RedexChoice choice : others) {
        DfnfChain other = dfnf_chain(f, choice);
        if (!alpha_equiv(other.normal_form, chain.normal_form)) {
          bad = true;
          set_first(rep, "redex strategies disagree on " + print_formula(f) +
                             ": " + print_formula(chain.normal_form) +
                             " versus " + print_formula(other.normal_form));
          break;
        }
      }
    }
    if (!bad) {
      std::mt19937_64 rng(mix(seed ^ 0x45, i));
      DfnfChain random_chain = dfnf_chain(f, RedexChoice::Random, &rng);
      if (!alpha_equiv(random_chain.normal_form, chain.normal_form)) {
        bad = true;
        set_first(rep, "random redex strategy disagrees on " +
                           print_formula(f));
      }
    }

    // Normal forms sit in the outer-disjunction class.
    if (!bad && !is_outer_disjunction(chain.normal_form)) {
      bad = true;
      set_first(rep, "normal form is not outer-disjunction: " +
                         print_formula(chain.normal_form));
    }

    if (bad) {
      ++rep.violations;
      continue;
    }

    // Rewriting preserves the pessimistic run result of the closure.
    FormulaP closed = Formula::exists_all(free_vars(f), f);
    FormulaP closed_nf = dfnf(closed);
    Program empty;
    RunResult before = run(Mode::Pessimistic, empty, closed, 1000000);
    RunResult after = run(Mode::Pessimistic, empty, closed_nf, 1000000);
    if (before.kind == ResultKind::FuelExhausted ||
        after.kind == ResultKind::FuelExhausted) {
      ++rep.skipped;
      continue;
    }
    if (before.kind != after.kind) {
      ++rep.violations;
      set_first(rep, "pessimistic outcome changed from " +
                         std::string(result_name(before.kind)) + " to " +
                         result_name(after.kind) + " on " + print_formula(f));
      continue;
    }
    ++rep.passed;
  }
  return rep;
}

SuiteReport run_raising_suite(uint64_t seed, size_t cases) {
  SuiteReport rep;
  rep.name = "raising";
  rep.cases = cases;
  for (size_t i = 0; i < cases; ++i) {
    GenConfig cfg;
    cfg.seed = mix(seed ^ 0x55, i);
    FormulaP f = gen_ground_o_formula(cfg);
    UniverseBound bound;
    std::set<FnSig> sigs;
    collect_functors(f, sigs);
    sigs.insert({"0", 0});
    sigs.insert({"1", 0});
    bound.signature.assign(sigs.begin(), sigs.end());
    bound.max_depth = static_cast<size_t>(cfg.max_term_depth) + 2;
    TruthValue direct = valuate(f, bound);
    TruthValue via_run = pessimistic_outcome(f);
    if (direct == via_run) {
      ++rep.passed;
    } else {
      ++rep.violations;
      set_first(rep, std::string("valuation says ") + truth_name(direct) +
                         " but the pessimistic run says " +
                         truth_name(via_run) + " on " + print_formula(f));
    }
  }
  return rep;
}

SuiteReport run_completion_suite(uint64_t seed, size_t cases) {
  SuiteReport rep;
  rep.name = "completion";
  rep.cases = cases;
  for (size_t i = 0; i < cases; ++i) {
    GenConfig cfg;
    cfg.seed = mix(seed ^ 0x66, i);
    Program p = gen_program(cfg);
    CompletionTrace tr = complete_trace(p);
    std::string problem;

    if (!is_completed_form(tr.result)) {
      auto v = completed_form_violations(tr.result);
      problem = "result not in completed form: " +
                (v.empty() ? std::string("unknown") : v.front());
    }

    auto snapshot = [&](int pass) -> const Program* {
      for (const auto& [n, prog] : tr.after_pass)
        if (n == pass) return &prog;
      return nullptr;
    };

    // After head canonicalization every head is a list of distinct
    // variables.
    if (problem.empty()) {
      if (const Program* s = snapshot(2)) {
        for (const auto& c : s->clauses) {
          std::set<std::string> seen;
          for (const auto& t : c.head) {
            if (!t->is_var() || !seen.insert(t->name).second) {
              problem = "head not canonical after pass 2 in clause " +
                        print_clause(c);
              break;
            }
          }
          if (!problem.empty()) break;
        }
      }
    }

    // After padding, bodies alternate formula, cut, formula, ...
    if (problem.empty()) {
      if (const Program* s = snapshot(7)) {
        for (const auto& c : s->clauses) {
          bool ok = !c.body.empty() && !c.body.front().is_cut() &&
                    !c.body.back().is_cut();
          for (size_t k = 0; ok && k + 1 < c.body.size(); ++k)
            ok = c.body[k].is_cut() != c.body[k + 1].is_cut();
          if (!ok) {
            problem = "body not alternating after pass 7 in clause " +
                      print_clause(c);
            break;
          }
        }
      }
    }

    // After splitting, at most one cut per clause.
    if (problem.empty()) {
      if (const Program* s = snapshot(8)) {
        for (const auto& c : s->clauses) {
          size_t cuts = 0;
          for (const auto& e : c.body) cuts += e.is_cut() ? 1 : 0;
          if (cuts > 1) {
            problem =
                "multiple cuts left after pass 8 in clause " + print_clause(c);
            break;
          }
        }
      }
    }

    // After scoping, last clauses are single formulas over head variables.
    if (problem.empty()) {
      if (const Program* s = snapshot(9)) {
        std::map<std::pair<std::string, size_t>, size_t> last;
        for (size_t k = 0; k < s->clauses.size(); ++k)
          last[{s->clauses[k].pred, s->clauses[k].arity()}] = k;
        for (const auto& [sig, k] : last) {
          const Clause& c = s->clauses[k];
          bool ok = c.body.size() == 1 && !c.body.front().is_cut();
          if (ok) {
            std::set<std::string> head_vars;
            for (const auto& t : c.head) head_vars.insert(t->name);
            for (const auto& v : free_vars(c.body.front().formula))
              if (!head_vars.count(v)) ok = false;
          }
          if (!ok) {
            problem = "last clause not scoped after pass 9: " + print_clause(c);
            break;
          }
        }
      }
    }

    // The result survives a print/parse round trip.
    if (problem.empty()) {
      Program reparsed = parse_program(print_program(tr.result));
      if (!alpha_equiv(reparsed, tr.result))
        problem = "completed program does not round-trip through the printer";
    }

    if (problem.empty()) {
      ++rep.passed;
    } else {
      ++rep.violations;
      set_first(rep, problem + "\ninput:\n" + print_program(p) +
                         "output:\n" + print_program(tr.result));
    }
  }
  return rep;
}

SuiteReport run_pessimistic_bound_suite(uint64_t seed, size_t cases) {
  SuiteReport rep;
  rep.name = "pessimistic-bound";
  rep.cases = cases;
  double peak = 0.0;
  for (size_t i = 0; i < cases; ++i) {
    GenConfig cfg;
    cfg.seed = mix(seed ^ 0x77, i);
    Program p = gen_completed_program(cfg);
    FormulaP g = gen_goal(cfg, p);
    long long budget = 4 * static_cast<long long>(formula_size(g));
    RunResult r = run(Mode::Pessimistic, p, g, budget);
    if (r.kind == ResultKind::FuelExhausted ||
        r.kind == ResultKind::Flounder) {
      ++rep.violations;
      set_first(rep, std::string("pessimistic run gave ") +
                         result_name(r.kind) + " with fuel " +
                         std::to_string(budget) + "\n" + describe_case(p, g));
      continue;
    }
    double used = static_cast<double>(budget - r.fuel_left) /
                  static_cast<double>(budget);
    peak = std::max(peak, used);
    ++rep.passed;
  }
  std::ostringstream os;
  os << "peak fuel use " << static_cast<int>(peak * 100.0) << "% of budget";
  rep.note = os.str();
  return rep;
}

}  // namespace flp
