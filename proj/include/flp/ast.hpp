#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace flp {

class Term;
using TermP = std::shared_ptr<const Term>;

// First-order terms. Constants are zero-arity function applications.
// Terms are immutable and shared; substitution returns the original
// pointer whenever nothing changed.
class Term {
public:
  enum class Kind { Var, Fn };

  static TermP var(std::string name);
  static TermP fn(std::string functor, std::vector<TermP> args = {});

  Kind kind;
  std::string name;          // variable name, or functor
  std::vector<TermP> args;   // empty for variables and constants

  bool is_var() const { return kind == Kind::Var; }
  size_t arity() const { return args.size(); }

private:
  Term(Kind k, std::string n, std::vector<TermP> a)
      : kind(k), name(std::move(n)), args(std::move(a)) {}
};

TermP zero();
TermP one();
TermP nil();
TermP cons(TermP head, TermP tail);
TermP make_list(const std::vector<TermP>& items, TermP tail = nil());

bool term_eq(const TermP& a, const TermP& b);
bool occurs(const std::string& var, const TermP& t);
bool is_ground(const TermP& t);
size_t term_size(const TermP& t);

class Formula;
using FormulaP = std::shared_ptr<const Formula>;

// Goal formulas: equations, predicate calls, conjunction, disjunction,
// negation, existential quantification, and the committed-choice form
// if[xs](cond, then) which takes the first solution of cond.
class Formula {
public:
  enum class Kind { Eq, Call, And, Or, Not, Exists, If };

  Kind kind;
  TermP lhs, rhs;                    // Eq
  std::string pred;                  // Call
  std::vector<TermP> args;           // Call
  FormulaP left, right;              // And/Or; Not/Exists use left only;
                                     // If: left = condition, right = branch
  std::string var;                   // Exists binder
  std::vector<std::string> binders;  // If binder list (may be empty)

  static FormulaP eq(TermP l, TermP r);
  static FormulaP call(std::string pred, std::vector<TermP> args);
  static FormulaP conj(FormulaP l, FormulaP r);
  static FormulaP disj(FormulaP l, FormulaP r);
  static FormulaP neg(FormulaP body);
  static FormulaP exists(std::string var, FormulaP body);
  // Right-nested chain; returns body unchanged for an empty list.
  static FormulaP exists_all(const std::vector<std::string>& vars, FormulaP body);
  static FormulaP if_then(std::vector<std::string> binders, FormulaP cond, FormulaP branch);

private:
  explicit Formula(Kind k) : kind(k) {}
};

FormulaP truth();    // 0 = 0
FormulaP falsity();  // 0 = 1

bool formula_eq(const FormulaP& a, const FormulaP& b);
size_t formula_size(const FormulaP& f);  // formula nodes plus term nodes

// One clause body element: a formula or a cut.
struct BodyElt {
  FormulaP formula;  // null means cut

  bool is_cut() const { return formula == nullptr; }
  static BodyElt cut() { return BodyElt{nullptr}; }
  static BodyElt goal(FormulaP f) { return BodyElt{std::move(f)}; }
};

struct Clause {
  std::string pred;
  std::vector<TermP> head;
  std::vector<BodyElt> body;  // empty body = fact

  size_t arity() const { return head.size(); }
  bool has_cut() const;
};

struct Program {
  std::vector<Clause> clauses;

  // Clauses for pred/arity in program order.
  std::vector<Clause> clauses_for(const std::string& pred, size_t arity) const;
  bool defines(const std::string& pred, size_t arity) const;
};

// Free variables in first-occurrence order (binder lists, answer printing
// and completion all depend on a stable order).
void collect_free_vars(const TermP& t, std::vector<std::string>& out,
                       std::set<std::string>& seen);
std::vector<std::string> free_vars(const TermP& t);
std::vector<std::string> free_vars(const FormulaP& f);
std::vector<std::string> free_vars(const Clause& c);
std::set<std::string> free_var_set(const FormulaP& f);
bool is_closed(const FormulaP& f);

// Every variable name occurring anywhere, bound or free.
void collect_all_vars(const FormulaP& f, std::set<std::string>& out);
std::set<std::string> all_vars(const Program& p);

struct FnSig {
  std::string name;
  size_t arity;
  auto operator<=>(const FnSig&) const = default;
};

void collect_functors(const TermP& t, std::set<FnSig>& out);
void collect_functors(const FormulaP& f, std::set<FnSig>& out);
std::set<FnSig> program_functors(const Program& p);

void collect_called_preds(const FormulaP& f, std::set<FnSig>& out);
std::set<FnSig> called_preds(const Program& p);

// Fresh-name supply. Generated names contain '#', which the lexer never
// produces, so they cannot collide with source-level names. Each engine
// run owns one supply so results are reproducible run by run.
class NameSupply {
public:
  std::string fresh(const std::string& hint);

private:
  long counter_ = 0;
};

}  // namespace flp
