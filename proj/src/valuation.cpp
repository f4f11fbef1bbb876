#include "flp/valuation.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "flp/completion.hpp"
#include "flp/dfnf.hpp"
#include "flp/engine.hpp"
#include "flp/subst.hpp"
#include "flp/syntax.hpp"

namespace flp {

const char* truth_name(TruthValue v) {
  switch (v) {
    case TruthValue::T: return "T";
    case TruthValue::F: return "F";
    case TruthValue::U: return "U";
  }
  return "?";
}

TruthValue max_k(const std::vector<TruthValue>& vals) {
  if (vals.empty()) throw std::logic_error("max_k of an empty set");
  bool t = false, f = false;
  for (TruthValue v : vals) {
    t = t || v == TruthValue::T;
    f = f || v == TruthValue::F;
  }
  if (t && f)
    throw std::logic_error("max_k saw both T and F; no join exists");
  if (t) return TruthValue::T;
  if (f) return TruthValue::F;
  return TruthValue::U;
}

TruthValue max_t(const std::vector<TruthValue>& vals) {
  if (vals.empty()) throw std::logic_error("max_t of an empty set");
  TruthValue best = TruthValue::F;
  for (TruthValue v : vals) {
    if (v == TruthValue::T) return TruthValue::T;
    if (v == TruthValue::U) best = TruthValue::U;
  }
  return best;
}

UniverseBound universe_for(const Program& p, size_t max_depth) {
  UniverseBound bound;
  bound.max_depth = max_depth;
  std::set<FnSig> sigs = program_functors(p);
  sigs.insert({"0", 0});
  sigs.insert({"1", 0});
  for (const auto& s : sigs) bound.signature.push_back(s);
  return bound;
}

namespace {

std::string term_key(const TermP& t) {
  std::string out = t->name;
  if (!t->args.empty()) {
    out += "(";
    for (size_t i = 0; i < t->args.size(); ++i) {
      if (i) out += ",";
      out += term_key(t->args[i]);
    }
    out += ")";
  }
  return out;
}

}  // namespace

std::vector<TermP> enumerate_ground(const UniverseBound& bound) {
  const size_t ceiling = 1000000;
  std::vector<TermP> terms;
  std::set<std::string> seen;
  for (const auto& sig : bound.signature) {
    if (sig.arity == 0) {
      TermP t = Term::fn(sig.name);
      if (seen.insert(term_key(t)).second) terms.push_back(t);
    }
  }
  for (size_t d = 2; d <= bound.max_depth; ++d) {
    size_t prev = terms.size();
    for (const auto& sig : bound.signature) {
      if (sig.arity == 0) continue;
      std::vector<size_t> idx(sig.arity, 0);
      for (;;) {
        std::vector<TermP> args;
        for (size_t i : idx) args.push_back(terms[i]);
        TermP t = Term::fn(sig.name, std::move(args));
        if (seen.insert(term_key(t)).second) {
          terms.push_back(t);
          if (terms.size() > ceiling)
            throw std::runtime_error("ground-term universe too large");
        }
        size_t k = 0;
        while (k < idx.size() && ++idx[k] == prev) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
  }
  return terms;
}

namespace {

struct ValCtx {
  const std::vector<TermP>& universe;
  NameSupply ns;

  TruthValue val(const FormulaP& f) {
    switch (f->kind) {
      case Formula::Kind::Eq:
        return term_eq(f->lhs, f->rhs) ? TruthValue::T : TruthValue::F;
      case Formula::Kind::Call:
        return TruthValue::U;
      case Formula::Kind::And: {
        TruthValue l = val(f->left);
        return l == TruthValue::T ? val(f->right) : l;
      }
      case Formula::Kind::Or: {
        TruthValue l = val(f->left);
        return l == TruthValue::F ? val(f->right) : l;
      }
      case Formula::Kind::Not: {
        TruthValue b = val(f->left);
        if (b == TruthValue::T) return TruthValue::F;
        if (b == TruthValue::F) return TruthValue::T;
        return TruthValue::U;
      }
      case Formula::Kind::Exists: {
        TruthValue best = TruthValue::F;
        for (const auto& t : universe) {
          TruthValue v =
              val(apply_subst(Subst::single(f->var, t), f->left, ns));
          if (v == TruthValue::T) return TruthValue::T;
          if (v == TruthValue::U) best = TruthValue::U;
        }
        return best;
      }
      case Formula::Kind::If:
        throw std::invalid_argument(
            "valuate applies to outer-disjunction formulas only");
    }
    return TruthValue::U;
  }
};

}  // namespace

TruthValue valuate(const FormulaP& f, const UniverseBound& bound) {
  if (!is_closed(f))
    throw std::invalid_argument("valuate needs a closed formula");
  if (!is_outer_disjunction(f))
    throw std::invalid_argument(
        "valuate applies to outer-disjunction formulas only");
  std::vector<TermP> universe = enumerate_ground(bound);
  ValCtx ctx{universe, {}};
  return ctx.val(f);
}

TruthValue pessimistic_outcome(const FormulaP& f) {
  if (!is_closed(f))
    throw std::invalid_argument("pessimistic outcome needs a closed formula");
  Program empty;
  long long fuel = 4 * static_cast<long long>(formula_size(f)) + 64;
  RunResult r = run(Mode::Pessimistic, empty, f, fuel);
  switch (r.kind) {
    case ResultKind::Success: return TruthValue::T;
    case ResultKind::Fail: return TruthValue::F;
    case ResultKind::Diverge: return TruthValue::U;
    case ResultKind::Flounder:
      throw std::invalid_argument(
          "goal flounders; pessimistic outcome is only defined for goals "
          "whose choices are closed");
    case ResultKind::FuelExhausted:
      throw std::logic_error("pessimistic run exceeded its size bound");
  }
  return TruthValue::U;
}

namespace {

size_t count_calls(const FormulaP& f) {
  switch (f->kind) {
    case Formula::Kind::Call:
      return 1;
    case Formula::Kind::Eq:
      return 0;
    case Formula::Kind::Not:
    case Formula::Kind::Exists:
      return count_calls(f->left);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::If:
      return count_calls(f->left) + count_calls(f->right);
  }
  return 0;
}

// Rebuild f with the `target`-th call (pre-order) expanded to its
// defining body. `target` counts down; on non-target paths the original
// nodes are reused.
FormulaP expand_call(const FormulaP& f, long& target, const Program& p,
                     NameSupply& ns) {
  if (target < 0) return f;
  switch (f->kind) {
    case Formula::Kind::Eq:
      return f;
    case Formula::Kind::Call: {
      if (target-- != 0) return f;
      auto cs = p.clauses_for(f->pred, f->args.size());
      if (cs.empty()) return f;
      const Clause& c = cs.front();
      Subst s;
      for (size_t i = 0; i < c.head.size(); ++i)
        s.bind(c.head[i]->name, f->args[i]);
      FormulaP body = c.body.empty() ? truth() : c.body.front().formula;
      return apply_subst(s, body, ns);
    }
    case Formula::Kind::Not: {
      FormulaP b = expand_call(f->left, target, p, ns);
      return b == f->left ? f : Formula::neg(b);
    }
    case Formula::Kind::Exists: {
      FormulaP b = expand_call(f->left, target, p, ns);
      return b == f->left ? f : Formula::exists(f->var, b);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::If: {
      FormulaP l = expand_call(f->left, target, p, ns);
      FormulaP r = expand_call(f->right, target, p, ns);
      if (l == f->left && r == f->right) return f;
      if (f->kind == Formula::Kind::And) return Formula::conj(l, r);
      if (f->kind == Formula::Kind::Or) return Formula::disj(l, r);
      return Formula::if_then(f->binders, l, r);
    }
  }
  return f;
}

}  // namespace

std::vector<FormulaP> unfold_once(const Program& p, const FormulaP& f) {
  std::vector<FormulaP> out;
  std::set<std::string> seen;
  size_t calls = count_calls(f);
  for (size_t k = 0; k < calls; ++k) {
    NameSupply ns;
    long target = static_cast<long>(k);
    FormulaP u = expand_call(f, target, p, ns);
    if (u == f) continue;  // call to a predicate the program does not define
    if (seen.insert(alpha_key(u)).second) out.push_back(u);
  }
  return out;
}

DenoteResult denote(const Program& p, const FormulaP& goal,
                    size_t unfold_depth, const UniverseBound& bound) {
  auto viols = completed_form_violations(p);
  if (!viols.empty())
    throw ValidationError({0, 0},
                          "program is not in completed form: " + viols.front());
  std::set<FnSig> called;
  collect_called_preds(goal, called);
  for (const auto& sig : called) {
    if (!p.defines(sig.name, sig.arity))
      throw ValidationError({0, 0}, "call to undefined predicate '" +
                                        sig.name + "/" +
                                        std::to_string(sig.arity) + "'");
  }

  const size_t ceiling = 50000;
  FormulaP g0 = Formula::exists_all(free_vars(goal), goal);
  std::vector<FormulaP> frontier{g0};
  std::set<std::string> seen{alpha_key(g0)};

  DenoteResult res;
  for (size_t round = 0;; ++round) {
    res.rounds = round;
    bool saw_t = false, saw_f = false;
    for (const auto& gi : frontier) {
      TruthValue v = valuate(dfnf(gi), bound);
      ++res.explored;
      if (v == TruthValue::T) saw_t = true;
      if (v == TruthValue::F) saw_f = true;
      if (v != TruthValue::U && !res.witness) {
        res.value = v;
        res.witness = gi;
      }
    }
    if (saw_t && saw_f)
      throw std::logic_error(
          "one unfolding round valuated to both T and F; the unfolding "
          "semantics must agree on defined values");
    if (res.witness) return res;
    if (round == unfold_depth) return res;
    std::vector<FormulaP> next;
    for (const auto& gi : frontier) {
      for (const auto& u : unfold_once(p, gi)) {
        if (seen.insert(alpha_key(u)).second) next.push_back(u);
      }
      if (seen.size() > ceiling)
        throw std::runtime_error("unfolding frontier exceeded its ceiling");
    }
    if (next.empty()) return res;  // no new unfoldings; value settled at U
    frontier = std::move(next);
  }
}

}  // namespace flp
