#include "flp/engine.hpp"

#include <pthread.h>

#include <functional>
#include <set>
#include <unordered_map>

#include "flp/completion.hpp"
#include "flp/syntax.hpp"

namespace flp {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::LiberalGeneral: return "liberal-general";
    case Mode::LiberalCompleted: return "liberal-completed";
    case Mode::Conservative: return "conservative";
    case Mode::Pessimistic: return "pessimistic";
  }
  return "?";
}

const char* result_name(ResultKind k) {
  switch (k) {
    case ResultKind::Success: return "success";
    case ResultKind::Fail: return "fail";
    case ResultKind::Flounder: return "flounder";
    case ResultKind::Diverge: return "diverge";
    case ResultKind::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

StackElt StackElt::make_goal(FormulaP f) {
  StackElt e;
  e.tag = Tag::Goal;
  e.goal = std::move(f);
  return e;
}

StackElt StackElt::make_using(std::string pred, std::vector<TermP> args,
                              std::vector<Clause> clauses) {
  StackElt e;
  e.tag = Tag::Using;
  e.pred = std::move(pred);
  e.args = std::move(args);
  e.clauses = std::move(clauses);
  return e;
}

StackElt StackElt::make_body(std::vector<BodyElt> body) {
  StackElt e;
  e.tag = Tag::Body;
  e.body = std::move(body);
  return e;
}

GoalStack push_front(StackElt e, GoalStack rest) {
  return std::make_shared<const StackNode>(
      StackNode{std::move(e), std::move(rest)});
}

namespace {

bool conservative_choice(Mode m) {
  return m == Mode::Conservative || m == Mode::Pessimistic;
}

enum class PredStyle { General, Completed, Pessimistic };

PredStyle pred_style(Mode m) {
  switch (m) {
    case Mode::LiberalGeneral: return PredStyle::General;
    case Mode::LiberalCompleted:
    case Mode::Conservative: return PredStyle::Completed;
    case Mode::Pessimistic: return PredStyle::Pessimistic;
  }
  return PredStyle::General;
}

GoalStack prepend_goals(const std::vector<FormulaP>& gs, GoalStack rest) {
  for (auto it = gs.rbegin(); it != gs.rend(); ++it)
    rest = push_front(StackElt::make_goal(*it), rest);
  return rest;
}

std::string render_subst(const Subst& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s.entries()) {
    if (!first) out += ", ";
    first = false;
    out += v + " -> " + print_term(t);
  }
  return out + "}";
}

std::string render_elt(const StackElt& e) {
  switch (e.tag) {
    case StackElt::Tag::Goal:
      return print_formula(e.goal);
    case StackElt::Tag::Using: {
      std::string out = e.pred;
      if (!e.args.empty()) {
        out += "(";
        for (size_t i = 0; i < e.args.size(); ++i) {
          if (i) out += ", ";
          out += print_term(e.args[i]);
        }
        out += ")";
      }
      out += " using (";
      for (size_t i = 0; i < e.clauses.size(); ++i) {
        if (i) out += " ; ";
        std::string cl = print_clause(e.clauses[i]);
        if (!cl.empty() && cl.back() == '.') cl.pop_back();
        out += cl;
      }
      return out + ")";
    }
    case StackElt::Tag::Body: {
      std::string out = "body(";
      for (size_t i = 0; i < e.body.size(); ++i) {
        if (i) out += ", ";
        out += e.body[i].is_cut() ? "!" : print_formula(e.body[i].formula);
      }
      return out + ")";
    }
  }
  return "?";
}

std::string render_stack(const GoalStack& st) {
  if (!st) return "<empty>";
  std::string out;
  for (const StackNode* n = st.get(); n; n = n->rest.get()) {
    if (!out.empty()) out += ", ";
    out += render_elt(n->elt);
  }
  return out;
}

// Split a clause body at its first cut. Everything before the first cut
// is cut-free by construction of the split.
bool split_at_cut(const std::vector<BodyElt>& body,
                  std::vector<FormulaP>& before,
                  std::vector<BodyElt>& after) {
  for (size_t i = 0; i < body.size(); ++i) {
    if (body[i].is_cut()) {
      after.assign(body.begin() + i + 1, body.end());
      return true;
    }
    before.push_back(body[i].formula);
  }
  return false;
}

class Engine {
public:
  Engine(Mode m, const Program& p, long long fuel, bool trace)
      : mode_(m), prog_(p), fuel_(fuel), trace_(trace) {}

  // The running substitution lives in one mutable store. Entries are
  // triangular: a stored term may mention variables bound later, so
  // readers chase bindings instead of the store rewriting itself.
  // eval() drops the bindings its subtree made whenever it returns
  // Fail, which is the only way entries ever leave the store; Success
  // keeps them, and the other outcomes abandon the run before anything
  // reads the store again.
  ResultKind eval(const GoalStack& stack, TraceNode* parent) {
    // Evaluation recurses once per rule application, so its native depth is
    // bounded by the fuel. The cap keeps a hostile fuel setting from
    // smashing even the oversized stack run() provides; hitting it is
    // reported as running out of resources, like fuel.
    if (depth_ >= kMaxEvalDepth) return ResultKind::FuelExhausted;
    ++depth_;
    size_t mark = trail_.size();
    TraceNode* node = nullptr;
    if (trace_) {
      parent->children.emplace_back();
      node = &parent->children.back();
      node->judgement = render_subst(snapshot()) + ": " + render_stack(stack);
    }
    ResultKind r = step(stack, node);
    if (r == ResultKind::Fail) undo_to(mark);
    if (node) {
      node->result = result_name(r);
      if (r == ResultKind::Success)
        node->result += " " + render_subst(snapshot());
    }
    --depth_;
    return r;
  }

  void seed(const Subst& theta) {
    for (const auto& [v, t] : theta.entries()) bind_var(v, t);
  }

  // Fully resolved copy of the store, for answers and traces.
  Subst snapshot() const {
    Subst out;
    for (const auto& [v, t] : bind_) out.bind(v, resolve(t));
    return out;
  }

  long long fuel_left() const { return fuel_; }

private:
  void bind_var(const std::string& v, TermP t) {
    trail_.push_back(v);
    bind_.emplace(v, std::move(t));
  }

  void undo_to(size_t mark) {
    while (trail_.size() > mark) {
      bind_.erase(trail_.back());
      trail_.pop_back();
    }
  }

  // Chase bindings to a fixpoint. Bound variables never occur in a
  // selected element, so a stored term only mentions variables bound
  // after its own and the chase terminates. Entries are never rewritten
  // in place: compressing a chain would go stale the moment undo_to
  // removed a link it had been compressed through.
  TermP resolve(const TermP& t) const {
    if (t->kind == Term::Kind::Var) {
      auto it = bind_.find(t->name);
      return it == bind_.end() ? t : resolve(it->second);
    }
    if (t->args.empty()) return t;
    std::vector<TermP> args;
    args.reserve(t->args.size());
    bool changed = false;
    for (const auto& a : t->args) {
      args.push_back(resolve(a));
      changed = changed || args.back() != a;
    }
    return changed ? Term::fn(t->name, std::move(args)) : t;
  }

  // Resolve one selected element against the store. Only the element's
  // own variables are looked up, so the cost scales with the element and
  // not with the store; the resolved bindings then go through apply_subst
  // to reuse its capture avoidance. Candidate clauses inside a Using
  // element are renamed apart and their probe bindings drop on failure,
  // so clause variables are never in the store; arguments may be.
  StackElt resolve_elt(const StackElt& e) {
    if (bind_.empty()) return e;
    Subst tmp;
    auto add = [&](const std::vector<std::string>& vs) {
      for (const auto& v : vs) {
        if (tmp.lookup(v)) continue;
        auto it = bind_.find(v);
        if (it != bind_.end()) tmp.bind(v, resolve(it->second));
      }
    };
    StackElt out = e;
    switch (e.tag) {
      case StackElt::Tag::Goal:
        add(free_vars(e.goal));
        if (!tmp.empty()) out.goal = apply_subst(tmp, e.goal, ns_);
        break;
      case StackElt::Tag::Using:
        for (const auto& a : e.args) add(free_vars(a));
        if (!tmp.empty())
          for (auto& a : out.args) a = apply_subst(tmp, a);
        break;
      case StackElt::Tag::Body:
        for (const auto& b : e.body)
          if (!b.is_cut()) add(free_vars(b.formula));
        if (!tmp.empty())
          for (auto& b : out.body) b = apply_subst(tmp, b, ns_);
        break;
    }
    return out;
  }

  ResultKind step(const GoalStack& stack, TraceNode* node) {
    if (fuel_ <= 0) {
      if (node) node->rule = "FuelExhausted";
      return ResultKind::FuelExhausted;
    }
    --fuel_;

    if (!stack) {
      if (node) node->rule = "Success";
      return ResultKind::Success;
    }

    StackElt top = resolve_elt(stack->elt);
    const GoalStack& rest = stack->rest;
    switch (top.tag) {
      case StackElt::Tag::Goal:
        return step_goal(top.goal, rest, node);
      case StackElt::Tag::Using:
        return step_using(top, rest, node);
      case StackElt::Tag::Body:
        return step_body(top.body, rest, node);
    }
    return ResultKind::Fail;
  }

  ResultKind step_goal(const FormulaP& f, const GoalStack& rest,
                       TraceNode* node) {
    switch (f->kind) {
      case Formula::Kind::Eq: {
        auto sigma = unify(f->lhs, f->rhs);
        if (!sigma) {
          if (node) node->rule = "Unif/fail";
          return ResultKind::Fail;
        }
        if (node) node->rule = "Unif/succ";
        // The selected equation was fully resolved, so the unifier's
        // domain is disjoint from the store.
        for (const auto& [v, t] : sigma->entries()) bind_var(v, t);
        return eval(rest, node);
      }
      case Formula::Kind::And: {
        if (node) node->rule = "Conj";
        return eval(prepend_goals({f->left, f->right}, rest), node);
      }
      case Formula::Kind::Or: {
        ResultKind left =
            eval(push_front(StackElt::make_goal(f->left), rest), node);
        if (left != ResultKind::Fail) {
          if (node) node->rule = "Disj/nofail";
          return left;
        }
        if (node) node->rule = "Disj/fail";
        return eval(push_front(StackElt::make_goal(f->right), rest), node);
      }
      case Formula::Kind::Exists: {
        if (node) node->rule = "Exists";
        std::string fresh = ns_.fresh(f->var);
        FormulaP body =
            apply_subst(Subst::single(f->var, Term::var(fresh)), f->left, ns_);
        return eval(push_front(StackElt::make_goal(body), rest), node);
      }
      case Formula::Kind::Not:
        return step_not(f, rest, node);
      case Formula::Kind::If:
        return step_if(f, rest, node);
      case Formula::Kind::Call:
        return step_call(f, rest, node);
    }
    return ResultKind::Fail;
  }

  ResultKind step_not(const FormulaP& f, const GoalStack& rest,
                      TraceNode* node) {
    if (conservative_choice(mode_) && !free_vars(f->left).empty()) {
      if (node) node->rule = "Not/flounder";
      return ResultKind::Flounder;
    }
    ResultKind inner =
        eval(push_front(StackElt::make_goal(f->left), nullptr), node);
    switch (inner) {
      case ResultKind::Success:
        if (node) node->rule = "Not/succ";
        // Whatever the probe bound is dropped by the caller's undo.
        return ResultKind::Fail;
      case ResultKind::Fail:
        if (node) node->rule = "Not/fail";
        return eval(rest, node);
      case ResultKind::Flounder:
      case ResultKind::Diverge:
        if (node) node->rule = "Not/sub";
        return inner;
      case ResultKind::FuelExhausted:
        if (node) node->rule = "Not";
        return inner;
    }
    return inner;
  }

  ResultKind step_if(const FormulaP& f, const GoalStack& rest,
                     TraceNode* node) {
    if (conservative_choice(mode_)) {
      // exists(binders, cond) must be closed, else the choice flounders.
      std::set<std::string> bound(f->binders.begin(), f->binders.end());
      for (const auto& v : free_vars(f->left)) {
        if (!bound.count(v)) {
          if (node) node->rule = "If/flounder";
          return ResultKind::Flounder;
        }
      }
    }
    Subst rename;
    for (const auto& b : f->binders)
      rename.bind(b, Term::var(ns_.fresh(b)));
    FormulaP cond = apply_subst(rename, f->left, ns_);
    FormulaP branch = apply_subst(rename, f->right, ns_);

    ResultKind inner =
        eval(push_front(StackElt::make_goal(cond), nullptr), node);
    switch (inner) {
      case ResultKind::Success:
        if (node) node->rule = "If/succ";
        // Liberal choice lets the condition instantiate the continuation;
        // under conservative choice the closedness check above makes the
        // condition's bindings invisible outside, so keeping them in the
        // store is sound in both.
        return eval(push_front(StackElt::make_goal(branch), rest), node);
      case ResultKind::Fail:
        if (node) node->rule = "If/fail";
        return ResultKind::Fail;
      case ResultKind::Flounder:
      case ResultKind::Diverge:
        if (node) node->rule = "If/sub";
        return inner;
      case ResultKind::FuelExhausted:
        if (node) node->rule = "If";
        return inner;
    }
    return inner;
  }

  ResultKind step_call(const FormulaP& f, const GoalStack& rest,
                       TraceNode* node) {
    if (node) node->rule = "Pred";
    switch (pred_style(mode_)) {
      case PredStyle::Pessimistic:
        return ResultKind::Diverge;
      case PredStyle::Completed: {
        auto cs = prog_.clauses_for(f->pred, f->args.size());
        if (cs.empty())
          throw ValidationError(
              {0, 0}, "call to undefined predicate '" + f->pred + "/" +
                          std::to_string(f->args.size()) + "'");
        const Clause& c = cs.front();
        Subst formals;
        for (size_t i = 0; i < c.head.size(); ++i)
          formals.bind(c.head[i]->name, f->args[i]);
        FormulaP raw = c.body.empty() ? truth() : c.body.front().formula;
        FormulaP body = apply_subst(formals, raw, ns_);
        return eval(push_front(StackElt::make_goal(body), rest), node);
      }
      case PredStyle::General: {
        std::vector<Clause> renamed;
        for (const auto& c : prog_.clauses_for(f->pred, f->args.size())) {
          Subst fresh;
          for (const auto& v : free_vars(c))
            fresh.bind(v, Term::var(ns_.fresh(v)));
          renamed.push_back(apply_subst(fresh, c, ns_));
        }
        return eval(push_front(StackElt::make_using(f->pred, f->args,
                                                    std::move(renamed)),
                               rest),
                    node);
      }
    }
    return ResultKind::Fail;
  }

  ResultKind step_using(const StackElt& u, const GoalStack& rest,
                        TraceNode* node) {
    if (u.clauses.empty()) {
      if (node) node->rule = "Using/empty";
      return ResultKind::Fail;
    }
    const Clause& c = u.clauses.front();
    std::vector<Clause> remaining(u.clauses.begin() + 1, u.clauses.end());

    std::vector<FormulaP> eqs;
    for (size_t i = 0; i < u.args.size(); ++i)
      eqs.push_back(Formula::eq(u.args[i], c.head[i]));

    std::vector<FormulaP> before;
    std::vector<BodyElt> after;
    if (split_at_cut(c.body, before, after)) {
      // Clause with a cut: head unification and the pre-cut prefix run in
      // isolation; success commits to this clause, discarding both the
      // remaining clauses and any deeper alternatives inside the prefix.
      GoalStack probe = prepend_goals(eqs, prepend_goals(before, nullptr));
      ResultKind pre = eval(probe, node);
      switch (pre) {
        case ResultKind::Success:
          if (node) node->rule = "Using/cut/succ";
          return eval(push_front(StackElt::make_body(std::move(after)), rest),
                      node);
        case ResultKind::Fail:
          if (node) node->rule = "Using/cut/fail";
          return eval(push_front(StackElt::make_using(u.pred, u.args,
                                                      std::move(remaining)),
                                 rest),
                      node);
        default:
          if (node) node->rule = "Using/cut";
          return pre;
      }
    }

    // Cut-free clause: the body runs together with the continuation, so
    // failure anywhere downstream retries the next clause.
    GoalStack probe = rest;
    for (auto it = c.body.rbegin(); it != c.body.rend(); ++it)
      probe = push_front(StackElt::make_goal(it->formula), probe);
    probe = prepend_goals(eqs, probe);
    ResultKind r = eval(probe, node);
    switch (r) {
      case ResultKind::Success:
        if (node) node->rule = "Using/nocut/succ";
        return r;
      case ResultKind::Fail:
        if (node) node->rule = "Using/nocut/fail";
        return eval(push_front(StackElt::make_using(u.pred, u.args,
                                                    std::move(remaining)),
                               rest),
                    node);
      default:
        if (node) node->rule = "Using/nocut";
        return r;
    }
  }

  ResultKind step_body(const std::vector<BodyElt>& body, const GoalStack& rest,
                       TraceNode* node) {
    std::vector<FormulaP> before;
    std::vector<BodyElt> after;
    if (split_at_cut(body, before, after)) {
      ResultKind pre = eval(prepend_goals(before, nullptr), node);
      switch (pre) {
        case ResultKind::Success:
          if (node) node->rule = "Body/cut/succ";
          return eval(push_front(StackElt::make_body(std::move(after)), rest),
                      node);
        case ResultKind::Fail:
          if (node) node->rule = "Body/cut/fail";
          return ResultKind::Fail;
        default:
          if (node) node->rule = "Body/cut";
          return pre;
      }
    }
    if (node) node->rule = "Body/nocut";
    GoalStack st = rest;
    for (auto it = body.rbegin(); it != body.rend(); ++it)
      st = push_front(StackElt::make_goal(it->formula), st);
    return eval(st, node);
  }

  static constexpr size_t kMaxEvalDepth = 400000;

  Mode mode_;
  const Program& prog_;
  long long fuel_;
  bool trace_;
  size_t depth_ = 0;
  std::unordered_map<std::string, TermP> bind_;
  std::vector<std::string> trail_;
  NameSupply ns_;
};

// Deep derivations need more stack than the 8MB default; a gigabyte of
// address space is reserved lazily, so untouched pages cost nothing.
constexpr size_t kEvalStackBytes = size_t{1} << 30;

void* call_closure(void* arg) {
  (*static_cast<std::function<void()>*>(arg))();
  return nullptr;
}

void on_big_stack(const std::function<void()>& fn) {
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, kEvalStackBytes);
  pthread_t tid;
  std::function<void()> body = fn;
  int rc = pthread_create(&tid, &attr, call_closure, &body);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    fn();  // current stack is the best we can do
    return;
  }
  pthread_join(tid, nullptr);
}

void validate_for_mode(Mode m, const Program& p, const FormulaP& goal) {
  if (m == Mode::LiberalGeneral || m == Mode::Pessimistic) return;
  auto viols = completed_form_violations(p);
  if (!viols.empty())
    throw ValidationError({0, 0},
                          "program is not in completed form: " + viols.front());
  std::set<FnSig> called = called_preds(p);
  collect_called_preds(goal, called);
  for (const auto& sig : called) {
    if (!p.defines(sig.name, sig.arity))
      throw ValidationError({0, 0}, "call to undefined predicate '" + sig.name +
                                        "/" + std::to_string(sig.arity) + "'");
  }
}

}  // namespace

std::string render_trace(const TraceNode& n) {
  std::string out;
  std::function<void(const TraceNode&, int)> walk = [&](const TraceNode& t,
                                                        int depth) {
    out += std::string(static_cast<size_t>(depth) * 2, ' ');
    out += "[" + t.rule + "] " + t.judgement + " => " + t.result + "\n";
    for (const auto& c : t.children) walk(c, depth + 1);
  };
  walk(n, 0);
  return out;
}

RunResult run(Mode m, const Program& p, const FormulaP& goal, long long fuel,
              const RunOptions& opts) {
  if (opts.validate) validate_for_mode(m, p, goal);
  GoalStack st = push_front(StackElt::make_goal(goal), nullptr);
  RunResult out = run_stack(m, p, Subst(), st, fuel, opts);
  if (out.kind == ResultKind::Success)
    out.answer = restrict_to(out.full_subst, free_vars(goal));
  return out;
}

RunResult run_stack(Mode m, const Program& p, const Subst& theta,
                    const GoalStack& stack, long long fuel,
                    const RunOptions& opts) {
  Engine eng(m, p, fuel, opts.trace);
  eng.seed(theta);
  TraceNode root;
  ResultKind kind = ResultKind::Fail;
  std::exception_ptr err;
  on_big_stack([&] {
    try {
      kind = eng.eval(stack, opts.trace ? &root : nullptr);
    } catch (...) {
      err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);
  RunResult out;
  out.kind = kind;
  if (kind == ResultKind::Success) {
    out.full_subst = eng.snapshot();
    out.answer = out.full_subst;
  }
  out.fuel_left = eng.fuel_left();
  if (opts.trace && !root.children.empty())
    out.trace = std::make_unique<TraceNode>(std::move(root.children.front()));
  return out;
}

}  // namespace flp
