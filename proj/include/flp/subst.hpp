#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flp/ast.hpp"

namespace flp {

// Idempotent substitution: finite map from variable names to terms whose
// range never mentions a domain variable. compose() re-applies eagerly to
// keep that invariant, so apply_subst() never needs to iterate to a fixpoint.
class Subst {
public:
  Subst() = default;

  static Subst single(const std::string& var, TermP t);

  bool empty() const { return map_.empty(); }
  size_t size() const { return map_.size(); }
  const TermP* lookup(const std::string& var) const;
  const std::map<std::string, TermP>& entries() const { return map_; }

  void bind(const std::string& var, TermP t);  // no invariant upkeep; internal
  bool idempotent() const;

private:
  std::map<std::string, TermP> map_;
};

TermP apply_subst(const Subst& s, const TermP& t);

// Capture-avoiding application. Binders that would capture a variable from
// the substitution range are renamed through the supply first.
FormulaP apply_subst(const Subst& s, const FormulaP& f, NameSupply& ns);
BodyElt apply_subst(const Subst& s, const BodyElt& e, NameSupply& ns);
Clause apply_subst(const Subst& s, const Clause& c, NameSupply& ns);

// Composition in diagram order: apply_subst(compose(a, b), t) == apply_subst(b, apply_subst(a, t)).
Subst compose(const Subst& a, const Subst& b);

Subst restrict_to(const Subst& s, const std::vector<std::string>& vars);

// Most general unifier with the occurs check, or nullopt. When two distinct
// variables meet, the right one is bound to the left, so variables of the
// running goal survive unification against renamed clause heads.
std::optional<Subst> unify(const TermP& a, const TermP& b);
std::optional<Subst> unify_under(const Subst& s, const TermP& a, const TermP& b);

// True when a = b . theta for some theta, i.e. a is at least as specific
// as b on every variable b binds.
bool specializes(const Subst& a, const Subst& b);

// Alpha-equivalence: bound variables may differ, free variables must agree
// by name.
bool alpha_equiv(const FormulaP& a, const FormulaP& b);

// Clause variables are implicitly quantified, so here free variables are
// paired positionally instead of by name.
bool alpha_equiv(const Clause& a, const Clause& b);
bool alpha_equiv(const Program& a, const Program& b);

// Stable key for deduplication: bound variables numbered by traversal
// order, free variables kept by name.
std::string alpha_key(const FormulaP& f);

}  // namespace flp
