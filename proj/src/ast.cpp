#include "flp/ast.hpp"

#include <algorithm>

namespace flp {

TermP Term::var(std::string name) {
  return TermP(new Term(Kind::Var, std::move(name), {}));
}

TermP Term::fn(std::string functor, std::vector<TermP> args) {
  return TermP(new Term(Kind::Fn, std::move(functor), std::move(args)));
}

TermP zero() {
  static const TermP t = Term::fn("0");
  return t;
}

TermP one() {
  static const TermP t = Term::fn("1");
  return t;
}

TermP nil() {
  static const TermP t = Term::fn("nil");
  return t;
}

TermP cons(TermP head, TermP tail) {
  return Term::fn("cons", {std::move(head), std::move(tail)});
}

TermP make_list(const std::vector<TermP>& items, TermP tail) {
  TermP out = std::move(tail);
  for (auto it = items.rbegin(); it != items.rend(); ++it)
    out = cons(*it, out);
  return out;
}

bool term_eq(const TermP& a, const TermP& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name) return false;
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!term_eq(a->args[i], b->args[i])) return false;
  return true;
}

bool occurs(const std::string& var, const TermP& t) {
  if (t->is_var()) return t->name == var;
  for (const auto& a : t->args)
    if (occurs(var, a)) return true;
  return false;
}

bool is_ground(const TermP& t) {
  if (t->is_var()) return false;
  for (const auto& a : t->args)
    if (!is_ground(a)) return false;
  return true;
}

size_t term_size(const TermP& t) {
  size_t n = 1;
  for (const auto& a : t->args) n += term_size(a);
  return n;
}

FormulaP Formula::eq(TermP l, TermP r) {
  auto f = std::shared_ptr<Formula>(new Formula(Kind::Eq));
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

FormulaP Formula::call(std::string pred, std::vector<TermP> args) {
  auto f = std::shared_ptr<Formula>(new Formula(Kind::Call));
  f->pred = std::move(pred);
  f->args = std::move(args);
  return f;
}

FormulaP Formula::conj(FormulaP l, FormulaP r) {
  auto f = std::shared_ptr<Formula>(new Formula(Kind::And));
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}

FormulaP Formula::disj(FormulaP l, FormulaP r) {
  auto f = std::shared_ptr<Formula>(new Formula(Kind::Or));
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}

FormulaP Formula::neg(FormulaP body) {
  auto f = std::shared_ptr<Formula>(new Formula(Kind::Not));
  f->left = std::move(body);
  return f;
}

FormulaP Formula::exists(std::string var, FormulaP body) {
  auto f = std::shared_ptr<Formula>(new Formula(Kind::Exists));
  f->var = std::move(var);
  f->left = std::move(body);
  return f;
}

FormulaP Formula::exists_all(const std::vector<std::string>& vars, FormulaP body) {
  FormulaP out = std::move(body);
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    out = exists(*it, out);
  return out;
}

FormulaP Formula::if_then(std::vector<std::string> binders, FormulaP cond,
                          FormulaP branch) {
  auto f = std::shared_ptr<Formula>(new Formula(Kind::If));
  f->binders = std::move(binders);
  f->left = std::move(cond);
  f->right = std::move(branch);
  return f;
}

FormulaP truth() {
  static const FormulaP f = Formula::eq(zero(), zero());
  return f;
}

FormulaP falsity() {
  static const FormulaP f = Formula::eq(zero(), one());
  return f;
}

bool formula_eq(const FormulaP& a, const FormulaP& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::Eq:
      return term_eq(a->lhs, b->lhs) && term_eq(a->rhs, b->rhs);
    case Formula::Kind::Call: {
      if (a->pred != b->pred || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!term_eq(a->args[i], b->args[i])) return false;
      return true;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return formula_eq(a->left, b->left) && formula_eq(a->right, b->right);
    case Formula::Kind::Not:
      return formula_eq(a->left, b->left);
    case Formula::Kind::Exists:
      return a->var == b->var && formula_eq(a->left, b->left);
    case Formula::Kind::If:
      return a->binders == b->binders && formula_eq(a->left, b->left) &&
             formula_eq(a->right, b->right);
  }
  return false;
}

size_t formula_size(const FormulaP& f) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      return 1 + term_size(f->lhs) + term_size(f->rhs);
    case Formula::Kind::Call: {
      size_t n = 1;
      for (const auto& a : f->args) n += term_size(a);
      return n;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return 1 + formula_size(f->left) + formula_size(f->right);
    case Formula::Kind::Not:
    case Formula::Kind::Exists:
      return 1 + formula_size(f->left);
    case Formula::Kind::If:
      return 1 + formula_size(f->left) + formula_size(f->right);
  }
  return 1;
}

bool Clause::has_cut() const {
  return std::any_of(body.begin(), body.end(),
                     [](const BodyElt& e) { return e.is_cut(); });
}

std::vector<Clause> Program::clauses_for(const std::string& pred,
                                         size_t arity) const {
  std::vector<Clause> out;
  for (const auto& c : clauses)
    if (c.pred == pred && c.arity() == arity) out.push_back(c);
  return out;
}

bool Program::defines(const std::string& pred, size_t arity) const {
  for (const auto& c : clauses)
    if (c.pred == pred && c.arity() == arity) return true;
  return false;
}

void collect_free_vars(const TermP& t, std::vector<std::string>& out,
                       std::set<std::string>& seen) {
  if (t->is_var()) {
    if (seen.insert(t->name).second) out.push_back(t->name);
    return;
  }
  for (const auto& a : t->args) collect_free_vars(a, out, seen);
}

namespace {

// Bound names shadow; 'bound' is the multiset of binders in scope.
void free_vars_rec(const FormulaP& f, std::vector<std::string>& out,
                   std::set<std::string>& seen,
                   std::vector<std::string>& bound) {
  auto term_vars = [&](const TermP& t) {
    std::vector<std::string> vs;
    std::set<std::string> local;
    collect_free_vars(t, vs, local);
    for (const auto& v : vs) {
      if (std::find(bound.begin(), bound.end(), v) != bound.end()) continue;
      if (seen.insert(v).second) out.push_back(v);
    }
  };
  switch (f->kind) {
    case Formula::Kind::Eq:
      term_vars(f->lhs);
      term_vars(f->rhs);
      break;
    case Formula::Kind::Call:
      for (const auto& a : f->args) term_vars(a);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      free_vars_rec(f->left, out, seen, bound);
      free_vars_rec(f->right, out, seen, bound);
      break;
    case Formula::Kind::Not:
      free_vars_rec(f->left, out, seen, bound);
      break;
    case Formula::Kind::Exists:
      bound.push_back(f->var);
      free_vars_rec(f->left, out, seen, bound);
      bound.pop_back();
      break;
    case Formula::Kind::If: {
      for (const auto& b : f->binders) bound.push_back(b);
      free_vars_rec(f->left, out, seen, bound);
      free_vars_rec(f->right, out, seen, bound);
      bound.resize(bound.size() - f->binders.size());
      break;
    }
  }
}

}  // namespace

std::vector<std::string> free_vars(const TermP& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_free_vars(t, out, seen);
  return out;
}

std::vector<std::string> free_vars(const FormulaP& f) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::vector<std::string> bound;
  free_vars_rec(f, out, seen, bound);
  return out;
}

std::vector<std::string> free_vars(const Clause& c) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& t : c.head) collect_free_vars(t, out, seen);
  std::vector<std::string> bound;
  for (const auto& e : c.body) {
    if (e.is_cut()) continue;
    std::vector<std::string> sub;
    std::set<std::string> subseen;
    free_vars_rec(e.formula, sub, subseen, bound);
    for (const auto& v : sub)
      if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

std::set<std::string> free_var_set(const FormulaP& f) {
  auto vs = free_vars(f);
  return {vs.begin(), vs.end()};
}

bool is_closed(const FormulaP& f) { return free_vars(f).empty(); }

void collect_all_vars(const FormulaP& f, std::set<std::string>& out) {
  auto term_vars = [&](const TermP& t) {
    std::vector<std::string> vs;
    std::set<std::string> local;
    collect_free_vars(t, vs, local);
    out.insert(vs.begin(), vs.end());
  };
  switch (f->kind) {
    case Formula::Kind::Eq:
      term_vars(f->lhs);
      term_vars(f->rhs);
      break;
    case Formula::Kind::Call:
      for (const auto& a : f->args) term_vars(a);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_all_vars(f->left, out);
      collect_all_vars(f->right, out);
      break;
    case Formula::Kind::Not:
      collect_all_vars(f->left, out);
      break;
    case Formula::Kind::Exists:
      out.insert(f->var);
      collect_all_vars(f->left, out);
      break;
    case Formula::Kind::If:
      out.insert(f->binders.begin(), f->binders.end());
      collect_all_vars(f->left, out);
      collect_all_vars(f->right, out);
      break;
  }
}

std::set<std::string> all_vars(const Program& p) {
  std::set<std::string> out;
  for (const auto& c : p.clauses) {
    for (const auto& t : c.head) {
      std::vector<std::string> vs;
      std::set<std::string> seen;
      collect_free_vars(t, vs, seen);
      out.insert(vs.begin(), vs.end());
    }
    for (const auto& e : c.body)
      if (!e.is_cut()) collect_all_vars(e.formula, out);
  }
  return out;
}

void collect_functors(const TermP& t, std::set<FnSig>& out) {
  if (t->is_var()) return;
  out.insert({t->name, t->args.size()});
  for (const auto& a : t->args) collect_functors(a, out);
}

void collect_functors(const FormulaP& f, std::set<FnSig>& out) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      collect_functors(f->lhs, out);
      collect_functors(f->rhs, out);
      break;
    case Formula::Kind::Call:
      for (const auto& a : f->args) collect_functors(a, out);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::If:
      collect_functors(f->left, out);
      collect_functors(f->right, out);
      break;
    case Formula::Kind::Not:
    case Formula::Kind::Exists:
      collect_functors(f->left, out);
      break;
  }
}

std::set<FnSig> program_functors(const Program& p) {
  std::set<FnSig> out;
  for (const auto& c : p.clauses) {
    for (const auto& t : c.head) collect_functors(t, out);
    for (const auto& e : c.body)
      if (!e.is_cut()) collect_functors(e.formula, out);
  }
  return out;
}

void collect_called_preds(const FormulaP& f, std::set<FnSig>& out) {
  switch (f->kind) {
    case Formula::Kind::Call:
      out.insert({f->pred, f->args.size()});
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::If:
      collect_called_preds(f->left, out);
      collect_called_preds(f->right, out);
      break;
    case Formula::Kind::Not:
    case Formula::Kind::Exists:
      collect_called_preds(f->left, out);
      break;
    case Formula::Kind::Eq:
      break;
  }
}

std::set<FnSig> called_preds(const Program& p) {
  std::set<FnSig> out;
  for (const auto& c : p.clauses)
    for (const auto& e : c.body)
      if (!e.is_cut()) collect_called_preds(e.formula, out);
  return out;
}

std::string NameSupply::fresh(const std::string& hint) {
  std::string base = hint.substr(0, hint.find('#'));
  if (base.empty()) base = "V";
  return base + "#" + std::to_string(++counter_);
}

}  // namespace flp
