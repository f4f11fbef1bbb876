#include "flp/subst.hpp"

#include <functional>

namespace flp {

Subst Subst::single(const std::string& var, TermP t) {
  Subst s;
  s.map_[var] = std::move(t);
  return s;
}

const TermP* Subst::lookup(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

void Subst::bind(const std::string& var, TermP t) { map_[var] = std::move(t); }

bool Subst::idempotent() const {
  for (const auto& [v, t] : map_) {
    (void)v;
    for (const auto& [w, u] : map_) {
      (void)u;
      if (occurs(w, t)) return false;
    }
  }
  return true;
}

TermP apply_subst(const Subst& s, const TermP& t) {
  if (s.empty()) return t;
  if (t->is_var()) {
    const TermP* bound = s.lookup(t->name);
    return bound ? *bound : t;
  }
  bool changed = false;
  std::vector<TermP> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) {
    TermP a2 = apply_subst(s, a);
    changed = changed || a2 != a;
    args.push_back(std::move(a2));
  }
  if (!changed) return t;
  return Term::fn(t->name, std::move(args));
}

namespace {

// Drop bindings shadowed by 'binders', then rename any binder that occurs
// in the range of what will be substituted into 'bodies'. Returns the
// effective substitution; 'binders' and 'bodies' are updated in place.
Subst enter_binders(const Subst& s, std::vector<std::string>& binders,
                    std::vector<FormulaP>& bodies, NameSupply& ns) {
  Subst eff;
  std::set<std::string> shadow(binders.begin(), binders.end());

  std::set<std::string> body_free;
  for (const auto& b : bodies) {
    auto vs = free_vars(b);
    body_free.insert(vs.begin(), vs.end());
  }

  std::set<std::string> range_vars;
  for (const auto& [v, t] : s.entries()) {
    if (shadow.count(v) || !body_free.count(v)) continue;
    eff.bind(v, t);
    auto vs = free_vars(t);
    range_vars.insert(vs.begin(), vs.end());
  }

  Subst rename;
  for (auto& b : binders) {
    if (!range_vars.count(b)) continue;
    std::string b2 = ns.fresh(b);
    rename.bind(b, Term::var(b2));
    b = b2;
  }
  if (!rename.empty()) {
    for (auto& body : bodies) body = apply_subst(rename, body, ns);
  }
  return eff;
}

}  // namespace

FormulaP apply_subst(const Subst& s, const FormulaP& f, NameSupply& ns) {
  if (s.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::Eq: {
      TermP l = apply_subst(s, f->lhs), r = apply_subst(s, f->rhs);
      if (l == f->lhs && r == f->rhs) return f;
      return Formula::eq(std::move(l), std::move(r));
    }
    case Formula::Kind::Call: {
      bool changed = false;
      std::vector<TermP> args;
      args.reserve(f->args.size());
      for (const auto& a : f->args) {
        TermP a2 = apply_subst(s, a);
        changed = changed || a2 != a;
        args.push_back(std::move(a2));
      }
      if (!changed) return f;
      return Formula::call(f->pred, std::move(args));
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      FormulaP l = apply_subst(s, f->left, ns), r = apply_subst(s, f->right, ns);
      if (l == f->left && r == f->right) return f;
      return f->kind == Formula::Kind::And ? Formula::conj(l, r)
                                           : Formula::disj(l, r);
    }
    case Formula::Kind::Not: {
      FormulaP b = apply_subst(s, f->left, ns);
      if (b == f->left) return f;
      return Formula::neg(b);
    }
    case Formula::Kind::Exists: {
      std::vector<std::string> binders{f->var};
      std::vector<FormulaP> bodies{f->left};
      Subst eff = enter_binders(s, binders, bodies, ns);
      FormulaP body = apply_subst(eff, bodies[0], ns);
      if (binders[0] == f->var && body == f->left) return f;
      return Formula::exists(binders[0], body);
    }
    case Formula::Kind::If: {
      std::vector<std::string> binders = f->binders;
      std::vector<FormulaP> bodies{f->left, f->right};
      Subst eff = enter_binders(s, binders, bodies, ns);
      FormulaP cond = apply_subst(eff, bodies[0], ns);
      FormulaP branch = apply_subst(eff, bodies[1], ns);
      if (binders == f->binders && cond == f->left && branch == f->right)
        return f;
      return Formula::if_then(std::move(binders), cond, branch);
    }
  }
  return f;
}

BodyElt apply_subst(const Subst& s, const BodyElt& e, NameSupply& ns) {
  if (e.is_cut()) return e;
  return BodyElt::goal(apply_subst(s, e.formula, ns));
}

Clause apply_subst(const Subst& s, const Clause& c, NameSupply& ns) {
  Clause out;
  out.pred = c.pred;
  out.head.reserve(c.head.size());
  for (const auto& t : c.head) out.head.push_back(apply_subst(s, t));
  out.body.reserve(c.body.size());
  for (const auto& e : c.body) out.body.push_back(apply_subst(s, e, ns));
  return out;
}

Subst compose(const Subst& a, const Subst& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Subst out;
  for (const auto& [v, t] : a.entries()) {
    TermP u = apply_subst(b, t);
    if (u->is_var() && u->name == v) continue;  // collapsed to identity
    out.bind(v, std::move(u));
  }
  for (const auto& [v, t] : b.entries())
    if (!a.lookup(v)) out.bind(v, t);
  return out;
}

Subst restrict_to(const Subst& s, const std::vector<std::string>& vars) {
  Subst out;
  for (const auto& v : vars) {
    const TermP* t = s.lookup(v);
    if (t) out.bind(v, *t);
  }
  return out;
}

std::optional<Subst> unify_under(const Subst& s0, const TermP& a,
                                 const TermP& b) {
  Subst sigma = s0;
  std::vector<std::pair<TermP, TermP>> work{{a, b}};
  while (!work.empty()) {
    auto [s, t] = work.back();
    work.pop_back();
    s = apply_subst(sigma, s);
    t = apply_subst(sigma, t);
    if (s->is_var() && t->is_var() && s->name == t->name) continue;
    if (t->is_var()) {  // right side binds, so left-hand variables survive
      if (occurs(t->name, s)) return std::nullopt;
      sigma = compose(sigma, Subst::single(t->name, s));
      continue;
    }
    if (s->is_var()) {
      if (occurs(s->name, t)) return std::nullopt;
      sigma = compose(sigma, Subst::single(s->name, t));
      continue;
    }
    if (s->name != t->name || s->args.size() != t->args.size())
      return std::nullopt;
    for (size_t i = s->args.size(); i-- > 0;)
      work.emplace_back(s->args[i], t->args[i]);
  }
  return sigma;
}

std::optional<Subst> unify(const TermP& a, const TermP& b) {
  return unify_under(Subst(), a, b);
}

bool specializes(const Subst& a, const Subst& b) {
  std::map<std::string, TermP> witness;
  std::function<bool(const TermP&, const TermP&)> match =
      [&](const TermP& pat, const TermP& sub) -> bool {
    if (pat->is_var()) {
      auto it = witness.find(pat->name);
      if (it != witness.end()) return term_eq(it->second, sub);
      witness.emplace(pat->name, sub);
      return true;
    }
    if (sub->is_var()) return false;
    if (pat->name != sub->name || pat->args.size() != sub->args.size())
      return false;
    for (size_t i = 0; i < pat->args.size(); ++i)
      if (!match(pat->args[i], sub->args[i])) return false;
    return true;
  };

  std::set<std::string> domain;
  for (const auto& [v, t] : a.entries()) {
    (void)t;
    domain.insert(v);
  }
  for (const auto& [v, t] : b.entries()) {
    (void)t;
    domain.insert(v);
  }
  for (const auto& v : domain) {
    TermP x = Term::var(v);
    if (!match(apply_subst(b, x), apply_subst(a, x))) return false;
  }
  return true;
}

namespace {

struct AlphaCtx {
  std::map<std::string, int> left, right;
  int next = 0;
  bool pair_free = false;  // clause mode: free variables pair positionally
};

bool aeq_term(const TermP& a, const TermP& b, AlphaCtx& ctx) {
  if (a->is_var() != b->is_var()) return false;
  if (a->is_var()) {
    auto la = ctx.left.find(a->name);
    auto rb = ctx.right.find(b->name);
    bool ma = la != ctx.left.end(), mb = rb != ctx.right.end();
    if (ma != mb) return false;
    if (ma) return la->second == rb->second;
    if (!ctx.pair_free) return a->name == b->name;
    ctx.left[a->name] = ctx.next;
    ctx.right[b->name] = ctx.next;
    ++ctx.next;
    return true;
  }
  if (a->name != b->name || a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!aeq_term(a->args[i], b->args[i], ctx)) return false;
  return true;
}

class BinderScope {
public:
  BinderScope(AlphaCtx& ctx, const std::string& l, const std::string& r)
      : ctx_(ctx), l_(l), r_(r) {
    auto it = ctx.left.find(l);
    if (it != ctx.left.end()) old_l_ = it->second;
    it = ctx.right.find(r);
    if (it != ctx.right.end()) old_r_ = it->second;
    ctx.left[l] = ctx.right[r] = ctx.next++;
  }
  ~BinderScope() {
    if (old_l_)
      ctx_.left[l_] = *old_l_;
    else
      ctx_.left.erase(l_);
    if (old_r_)
      ctx_.right[r_] = *old_r_;
    else
      ctx_.right.erase(r_);
  }

private:
  AlphaCtx& ctx_;
  std::string l_, r_;
  std::optional<int> old_l_, old_r_;
};

bool aeq(const FormulaP& a, const FormulaP& b, AlphaCtx& ctx) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::Eq:
      return aeq_term(a->lhs, b->lhs, ctx) && aeq_term(a->rhs, b->rhs, ctx);
    case Formula::Kind::Call: {
      if (a->pred != b->pred || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!aeq_term(a->args[i], b->args[i], ctx)) return false;
      return true;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return aeq(a->left, b->left, ctx) && aeq(a->right, b->right, ctx);
    case Formula::Kind::Not:
      return aeq(a->left, b->left, ctx);
    case Formula::Kind::Exists: {
      BinderScope scope(ctx, a->var, b->var);
      return aeq(a->left, b->left, ctx);
    }
    case Formula::Kind::If: {
      if (a->binders.size() != b->binders.size()) return false;
      std::vector<std::unique_ptr<BinderScope>> scopes;
      for (size_t i = 0; i < a->binders.size(); ++i)
        scopes.push_back(
            std::make_unique<BinderScope>(ctx, a->binders[i], b->binders[i]));
      bool ok = aeq(a->left, b->left, ctx) && aeq(a->right, b->right, ctx);
      while (!scopes.empty()) scopes.pop_back();  // unwind inner-first
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_equiv(const FormulaP& a, const FormulaP& b) {
  AlphaCtx ctx;
  return aeq(a, b, ctx);
}

bool alpha_equiv(const Clause& a, const Clause& b) {
  if (a.pred != b.pred || a.arity() != b.arity()) return false;
  if (a.body.size() != b.body.size()) return false;
  AlphaCtx ctx;
  ctx.pair_free = true;
  for (size_t i = 0; i < a.head.size(); ++i)
    if (!aeq_term(a.head[i], b.head[i], ctx)) return false;
  for (size_t i = 0; i < a.body.size(); ++i) {
    if (a.body[i].is_cut() != b.body[i].is_cut()) return false;
    if (a.body[i].is_cut()) continue;
    if (!aeq(a.body[i].formula, b.body[i].formula, ctx)) return false;
  }
  return true;
}

bool alpha_equiv(const Program& a, const Program& b) {
  if (a.clauses.size() != b.clauses.size()) return false;
  for (size_t i = 0; i < a.clauses.size(); ++i)
    if (!alpha_equiv(a.clauses[i], b.clauses[i])) return false;
  return true;
}

namespace {

void key_term(const TermP& t, const std::map<std::string, int>& bound,
              std::string& out) {
  if (t->is_var()) {
    auto it = bound.find(t->name);
    if (it != bound.end())
      out += "b" + std::to_string(it->second);
    else
      out += "f:" + t->name;
    return;
  }
  out += t->name;
  out += "(";
  for (const auto& a : t->args) {
    key_term(a, bound, out);
    out += ",";
  }
  out += ")";
}

void key_formula(const FormulaP& f, std::map<std::string, int>& bound,
                 int& next, std::string& out) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      out += "=(";
      key_term(f->lhs, bound, out);
      out += ",";
      key_term(f->rhs, bound, out);
      out += ")";
      break;
    case Formula::Kind::Call:
      out += "c:" + f->pred + "(";
      for (const auto& a : f->args) {
        key_term(a, bound, out);
        out += ",";
      }
      out += ")";
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      out += f->kind == Formula::Kind::And ? "&(" : "|(";
      key_formula(f->left, bound, next, out);
      out += ",";
      key_formula(f->right, bound, next, out);
      out += ")";
      break;
    case Formula::Kind::Not:
      out += "~(";
      key_formula(f->left, bound, next, out);
      out += ")";
      break;
    case Formula::Kind::Exists: {
      auto it = bound.find(f->var);
      std::optional<int> old;
      if (it != bound.end()) old = it->second;
      bound[f->var] = next++;
      out += "E(";
      key_formula(f->left, bound, next, out);
      out += ")";
      if (old)
        bound[f->var] = *old;
      else
        bound.erase(f->var);
      break;
    }
    case Formula::Kind::If: {
      std::vector<std::pair<std::string, std::optional<int>>> saved;
      for (const auto& b : f->binders) {
        auto it = bound.find(b);
        saved.emplace_back(b, it != bound.end() ? std::optional<int>(it->second)
                                                : std::nullopt);
        bound[b] = next++;
      }
      out += "I" + std::to_string(f->binders.size()) + "(";
      key_formula(f->left, bound, next, out);
      out += ",";
      key_formula(f->right, bound, next, out);
      out += ")";
      for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
        if (it->second)
          bound[it->first] = *it->second;
        else
          bound.erase(it->first);
      }
      break;
    }
  }
}

}  // namespace

std::string alpha_key(const FormulaP& f) {
  std::string out;
  std::map<std::string, int> bound;
  int next = 0;
  key_formula(f, bound, next, out);
  return out;
}

}  // namespace flp
