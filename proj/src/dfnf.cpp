#include "flp/dfnf.hpp"

#include <algorithm>
#include <stdexcept>

namespace flp {

bool is_negated_disjunction(const FormulaP& f) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Call:
      return true;
    case Formula::Kind::And:
      return is_negated_disjunction(f->left) &&
             is_negated_disjunction(f->right);
    case Formula::Kind::Exists:
      return is_negated_disjunction(f->left);
    case Formula::Kind::Not:
      return is_outer_disjunction(f->left);
    case Formula::Kind::Or:
    case Formula::Kind::If:
      return false;
  }
  return false;
}

bool is_outer_disjunction(const FormulaP& f) {
  if (f->kind == Formula::Kind::Or)
    return is_outer_disjunction(f->left) && is_outer_disjunction(f->right);
  return is_negated_disjunction(f);
}

FormulaClass classify(const FormulaP& f) {
  if (is_negated_disjunction(f)) return FormulaClass::NegatedDisjunction;
  if (is_outer_disjunction(f)) return FormulaClass::OuterDisjunction;
  return FormulaClass::Neither;
}

size_t depth(const FormulaP& f) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Call:
      return 1;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::If:
      return std::max(depth(f->left), depth(f->right)) + 1;
    case Formula::Kind::Not:
    case Formula::Kind::Exists:
      return depth(f->left) + 1;
  }
  return 1;
}

size_t potential_depth(const FormulaP& f) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Call:
      return 1;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return std::max(potential_depth(f->left), potential_depth(f->right)) + 1;
    case Formula::Kind::Not:
    case Formula::Kind::Exists:
      return potential_depth(f->left) + 1;
    case Formula::Kind::If: {
      size_t b = potential_depth(f->left);
      size_t c = potential_depth(f->right);
      return f->binders.size() + 2 * b + std::max(b, c);
    }
  }
  return 1;
}

namespace {

// Which rule fires at this node, if any. The guards are mutually
// exclusive, so a node is at most one kind of redex.
const char* rule_at(const FormulaP& f) {
  switch (f->kind) {
    case Formula::Kind::And:
      if (f->left->kind == Formula::Kind::Or) return "R1";
      if (f->right->kind == Formula::Kind::Or &&
          is_negated_disjunction(f->left))
        return "R2";
      return nullptr;
    case Formula::Kind::Exists:
      if (f->left->kind == Formula::Kind::Or) return "R3";
      return nullptr;
    case Formula::Kind::If:
      if (f->left->kind == Formula::Kind::Or) return "R4";
      if (is_negated_disjunction(f->left)) return "R5";
      return nullptr;
    default:
      return nullptr;
  }
}

FormulaP contract(const FormulaP& f) {
  switch (f->kind) {
    case Formula::Kind::And:
      if (f->left->kind == Formula::Kind::Or)
        return Formula::disj(Formula::conj(f->left->left, f->right),
                             Formula::conj(f->left->right, f->right));
      return Formula::disj(Formula::conj(f->left, f->right->left),
                           Formula::conj(f->left, f->right->right));
    case Formula::Kind::Exists:
      return Formula::disj(Formula::exists(f->var, f->left->left),
                           Formula::exists(f->var, f->left->right));
    case Formula::Kind::If:
      if (f->left->kind == Formula::Kind::Or) {
        FormulaP guard =
            Formula::neg(Formula::exists_all(f->binders, f->left->left));
        return Formula::disj(
            Formula::if_then(f->binders, f->left->left, f->right),
            Formula::conj(guard,
                          Formula::if_then(f->binders, f->left->right,
                                           f->right)));
      }
      return Formula::exists_all(f->binders,
                                 Formula::conj(f->left, f->right));
    default:
      throw std::logic_error("contract called on a non-redex");
  }
}

// Paths identify redex positions: child indices from the root, where 0 is
// the only or left child and 1 the right.
using Path = std::vector<int>;

void subformulas(const FormulaP& f, std::vector<FormulaP>& out) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Call:
      return;
    case Formula::Kind::Not:
    case Formula::Kind::Exists:
      out.push_back(f->left);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::If:
      out.push_back(f->left);
      out.push_back(f->right);
      return;
  }
}

void collect_redexes(const FormulaP& f, Path& here, bool node_first,
                     bool left_first, std::vector<Path>& out) {
  if (node_first && rule_at(f)) out.push_back(here);
  std::vector<FormulaP> kids;
  subformulas(f, kids);
  for (size_t i = 0; i < kids.size(); ++i) {
    size_t k = left_first ? i : kids.size() - 1 - i;
    here.push_back(static_cast<int>(k));
    collect_redexes(kids[k], here, node_first, left_first, out);
    here.pop_back();
  }
  if (!node_first && rule_at(f)) out.push_back(here);
}

FormulaP child(const FormulaP& f, int k) {
  std::vector<FormulaP> kids;
  subformulas(f, kids);
  return kids.at(static_cast<size_t>(k));
}

FormulaP replace_child(const FormulaP& f, int k, FormulaP sub) {
  switch (f->kind) {
    case Formula::Kind::Not:
      return Formula::neg(std::move(sub));
    case Formula::Kind::Exists:
      return Formula::exists(f->var, std::move(sub));
    case Formula::Kind::And:
      return k == 0 ? Formula::conj(std::move(sub), f->right)
                    : Formula::conj(f->left, std::move(sub));
    case Formula::Kind::Or:
      return k == 0 ? Formula::disj(std::move(sub), f->right)
                    : Formula::disj(f->left, std::move(sub));
    case Formula::Kind::If:
      return k == 0 ? Formula::if_then(f->binders, std::move(sub), f->right)
                    : Formula::if_then(f->binders, f->left, std::move(sub));
    default:
      throw std::logic_error("replace_child on a leaf");
  }
}

FormulaP rewrite_at(const FormulaP& f, const Path& path, size_t i) {
  if (i == path.size()) return contract(f);
  int k = path[i];
  return replace_child(f, k, rewrite_at(child(f, k), path, i + 1));
}

}  // namespace

std::optional<RewriteStep> rewrite_step(const FormulaP& f, RedexChoice choice,
                                        std::mt19937_64* rng) {
  bool node_first = choice == RedexChoice::OutermostLeftmost ||
                    choice == RedexChoice::OutermostRightmost ||
                    choice == RedexChoice::Random;
  bool left_first = choice != RedexChoice::OutermostRightmost &&
                    choice != RedexChoice::InnermostRightmost;
  std::vector<Path> redexes;
  Path here;
  collect_redexes(f, here, node_first, left_first, redexes);
  if (redexes.empty()) return std::nullopt;
  size_t pick = 0;
  if (choice == RedexChoice::Random) {
    if (!rng) throw std::logic_error("Random redex choice needs an rng");
    pick = (*rng)() % redexes.size();
  }
  const Path& p = redexes[pick];
  FormulaP target = f;
  for (int k : p) target = child(target, k);
  RewriteStep step;
  step.rule = rule_at(target);
  step.result = rewrite_at(f, p, 0);
  return step;
}

DfnfChain dfnf_chain(const FormulaP& f, RedexChoice choice,
                     std::mt19937_64* rng) {
  DfnfChain chain;
  chain.normal_form = f;
  // Rewrites strictly grow the connective count toward a bound set by the
  // potential depth, so a runaway loop here means a rule is wrong.
  const size_t ceiling = 200000;
  while (auto step = rewrite_step(chain.normal_form, choice, rng)) {
    chain.normal_form = step->result;
    chain.steps.push_back(std::move(*step));
    if (chain.steps.size() > ceiling)
      throw std::logic_error("rewriting failed to terminate");
  }
  return chain;
}

FormulaP dfnf(const FormulaP& f) { return dfnf_chain(f).normal_form; }

}  // namespace flp
