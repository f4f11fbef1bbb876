#include "flp/completion.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "flp/subst.hpp"

namespace flp {

namespace {

size_t clause_weight(const Clause& c) {
  size_t n = 1;
  for (const auto& t : c.head) n += term_size(t);
  for (const auto& e : c.body) n += e.is_cut() ? 1 : formula_size(e.formula);
  return n;
}

size_t program_weight(const Program& p) {
  size_t n = 1;
  for (const auto& c : p.clauses) n += clause_weight(c);
  return n;
}

// Head parameter variables, unused anywhere in the program. A plain X1,
// X2, ... works unless the source already uses such names; then the prefix
// grows until the whole family is free.
std::vector<std::string> choose_pool(const Program& p, size_t max_arity) {
  std::set<std::string> used = all_vars(p);
  std::string prefix = "X";
  auto clashes = [&](const std::string& pre) {
    for (const auto& v : used) {
      if (v.size() <= pre.size() || v.compare(0, pre.size(), pre) != 0)
        continue;
      std::string tail = v.substr(pre.size());
      if (tail[0] == '0') continue;
      bool digits = true;
      for (char ch : tail)
        if (ch < '0' || ch > '9') digits = false;
      if (digits) return true;
    }
    return false;
  };
  while (clashes(prefix)) prefix += "X";
  std::vector<std::string> pool;
  for (size_t i = 1; i <= max_arity; ++i)
    pool.push_back(prefix + std::to_string(i));
  return pool;
}

std::vector<std::string> head_var_names(const Clause& c) {
  std::vector<std::string> out;
  for (const auto& t : c.head)
    if (t->is_var()) out.push_back(t->name);
  return out;
}

// Free variables of the given formulas, first occurrence first, minus the
// head parameters. These become exists/if binder lists.
std::vector<std::string> local_vars(const std::vector<FormulaP>& fs,
                                    const std::vector<std::string>& head) {
  std::set<std::string> skip(head.begin(), head.end());
  std::vector<std::string> out;
  for (const auto& f : fs) {
    for (const auto& v : free_vars(f)) {
      if (skip.insert(v).second) out.push_back(v);
    }
  }
  return out;
}

struct Passes {
  Program prog;
  std::vector<std::string> pool;
  NameSupply ns;
  size_t budget;

  void spend(const char* pass) {
    if (budget-- == 0)
      throw std::logic_error(std::string("completion pass ") + pass +
                             " failed to converge");
  }

  // Make every head exactly p(pool[0], ..., pool[n-1]). Working from the
  // rightmost offending position keeps the emitted equations in parameter
  // order once they are all prepended.
  void canonical_heads() {
    for (bool changed = true; changed;) {
      changed = false;
      for (auto& c : prog.clauses) {
        size_t k = c.head.size();
        while (k > 0) {
          const TermP& t = c.head[k - 1];
          if (t->is_var() && t->name == pool[k - 1]) {
            --k;
            continue;
          }
          break;
        }
        if (k == 0) continue;
        spend("head canonicalization");
        const TermP t = c.head[k - 1];
        bool pool_var = false;
        if (t->is_var()) {
          for (size_t i = 0; i < c.head.size(); ++i)
            if (t->name == pool[i]) pool_var = true;
        }
        if (t->is_var() && !pool_var) {
          c = apply_subst(Subst::single(t->name, Term::var(pool[k - 1])), c, ns);
        } else {
          c.head[k - 1] = Term::var(pool[k - 1]);
          c.body.insert(c.body.begin(),
                        BodyElt::goal(Formula::eq(Term::var(pool[k - 1]), t)));
        }
        changed = true;
        break;
      }
    }
  }

  // Fuse adjacent body formulas into conjunctions until at most one
  // formula sits between any two cuts. Rightmost pair first, so a chain
  // associates to the right like the parser does.
  void fuse_conjunctions() {
    for (bool changed = true; changed;) {
      changed = false;
      for (auto& c : prog.clauses) {
        size_t i = c.body.size();
        size_t pair = 0;
        bool found = false;
        while (i >= 2) {
          if (!c.body[i - 1].is_cut() && !c.body[i - 2].is_cut()) {
            pair = i - 2;
            found = true;
            break;
          }
          --i;
        }
        if (!found) continue;
        spend("conjunction fusion");
        c.body[pair] = BodyElt::goal(
            Formula::conj(c.body[pair].formula, c.body[pair + 1].formula));
        c.body.erase(c.body.begin() + pair + 1);
        changed = true;
        break;
      }
    }
  }

  void fill_empty_bodies() {
    for (auto& c : prog.clauses) {
      if (c.body.empty()) {
        spend("empty body fill");
        c.body.push_back(BodyElt::goal(truth()));
      }
    }
  }

  void drop_duplicate_cuts() {
    for (bool changed = true; changed;) {
      changed = false;
      for (auto& c : prog.clauses) {
        for (size_t i = 0; i + 1 < c.body.size(); ++i) {
          if (c.body[i].is_cut() && c.body[i + 1].is_cut()) {
            spend("duplicate cut removal");
            c.body.erase(c.body.begin() + i);
            changed = true;
            break;
          }
        }
        if (changed) break;
      }
    }
  }

  void pad_leading_cuts() {
    for (auto& c : prog.clauses) {
      if (!c.body.empty() && c.body.front().is_cut()) {
        spend("leading cut padding");
        c.body.insert(c.body.begin(), BodyElt::goal(truth()));
      }
    }
  }

  void pad_trailing_cuts() {
    for (auto& c : prog.clauses) {
      if (!c.body.empty() && c.body.back().is_cut()) {
        spend("trailing cut padding");
        c.body.push_back(BodyElt::goal(truth()));
      }
    }
  }

  std::string fresh_pred() {
    std::set<std::string> taken;
    for (const auto& c : prog.clauses) taken.insert(c.pred);
    for (const auto& sig : called_preds(prog)) taken.insert(sig.name);
    for (const auto& sig : program_functors(prog)) taken.insert(sig.name);
    for (long k = 1;; ++k) {
      std::string name = "aux" + std::to_string(k);
      if (!taken.count(name)) return name;
    }
  }

  // Reduce every clause to at most one cut by moving the part after the
  // second-to-last cut into a helper predicate.
  void split_multi_cuts() {
    for (bool changed = true; changed;) {
      changed = false;
      for (size_t ci = 0; ci < prog.clauses.size(); ++ci) {
        Clause& c = prog.clauses[ci];
        std::vector<size_t> cuts;
        for (size_t i = 0; i < c.body.size(); ++i)
          if (c.body[i].is_cut()) cuts.push_back(i);
        if (cuts.size() < 2) continue;
        spend("cut splitting");
        size_t c1 = cuts[cuts.size() - 2];
        size_t c2 = cuts.back();
        if (c2 != c1 + 2 || c2 + 2 != c.body.size() ||
            c.body[c1 + 1].is_cut() || c.body[c2 + 1].is_cut())
          throw std::logic_error("cut splitting hit a non-alternating body");
        FormulaP f = c.body[c1 + 1].formula;
        FormulaP g = c.body[c2 + 1].formula;
        std::vector<std::string> ys = local_vars({f, g}, {});
        std::string q = fresh_pred();
        std::vector<TermP> params;
        std::vector<TermP> actuals;
        for (const auto& v : ys) {
          params.push_back(Term::var(v));
          actuals.push_back(Term::var(v));
        }
        c.body.resize(c1);
        c.body.push_back(BodyElt::cut());
        c.body.push_back(BodyElt::goal(Formula::call(q, actuals)));
        Clause helper;
        helper.pred = q;
        helper.head = params;
        helper.body = {BodyElt::goal(f), BodyElt::cut(), BodyElt::goal(g)};
        prog.clauses.push_back(std::move(helper));
        changed = true;
        break;
      }
    }
  }

  // Clause indices for each predicate, keyed by first appearance.
  std::vector<std::vector<size_t>> predicate_groups() const {
    std::vector<std::vector<size_t>> groups;
    std::map<std::pair<std::string, size_t>, size_t> index;
    for (size_t i = 0; i < prog.clauses.size(); ++i) {
      auto key = std::make_pair(prog.clauses[i].pred, prog.clauses[i].arity());
      auto it = index.find(key);
      if (it == index.end()) {
        index.emplace(key, groups.size());
        groups.push_back({i});
      } else {
        groups[it->second].push_back(i);
      }
    }
    return groups;
  }

  // Close over the local variables of each predicate's final clause, with
  // exists for a plain body and if for a cut body.
  void scope_last_clauses() {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& group : predicate_groups()) {
        Clause& c = prog.clauses[group.back()];
        std::vector<std::string> head = head_var_names(c);
        if (c.body.size() == 1 && !c.body.front().is_cut()) {
          if (local_vars({c.body.front().formula}, head).empty()) continue;
        }
        spend("last clause scoping");
        if (c.body.size() == 1 && !c.body.front().is_cut()) {
          FormulaP g = c.body.front().formula;
          c.body = {BodyElt::goal(
              Formula::exists_all(local_vars({g}, head), g))};
        } else if (c.body.size() == 3 && !c.body[0].is_cut() &&
                   c.body[1].is_cut() && !c.body[2].is_cut()) {
          FormulaP f = c.body[0].formula;
          FormulaP g = c.body[2].formula;
          c.body = {BodyElt::goal(
              Formula::if_then(local_vars({f, g}, head), f, g))};
        } else {
          throw std::logic_error("last clause scoping hit an unsplit body");
        }
        changed = true;
      }
    }
  }

  // Merge each predicate's clauses pairwise from the bottom: a cut clause
  // contributes an if plus a negated guard for the fallthrough, a plain
  // clause a scoped disjunct.
  void merge_clauses() {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& group : predicate_groups()) {
        if (group.size() < 2) continue;
        spend("clause merging");
        size_t prev_i = group[group.size() - 2];
        size_t last_i = group.back();
        Clause& prev = prog.clauses[prev_i];
        Clause& last = prog.clauses[last_i];
        for (size_t k = 0; k < prev.head.size(); ++k) {
          if (!term_eq(prev.head[k], last.head[k]))
            throw std::logic_error("clause merging hit unequal heads");
        }
        if (last.body.size() != 1 || last.body.front().is_cut())
          throw std::logic_error("clause merging hit an unscoped last clause");
        FormulaP h = last.body.front().formula;
        std::vector<std::string> head = head_var_names(prev);
        FormulaP merged;
        if (prev.body.size() == 1 && !prev.body.front().is_cut()) {
          FormulaP g = prev.body.front().formula;
          merged = Formula::disj(
              Formula::exists_all(local_vars({g}, head), g), h);
        } else if (prev.body.size() == 3 && !prev.body[0].is_cut() &&
                   prev.body[1].is_cut() && !prev.body[2].is_cut()) {
          FormulaP f = prev.body[0].formula;
          FormulaP g = prev.body[2].formula;
          std::vector<std::string> ys = local_vars({f, g}, head);
          merged = Formula::disj(
              Formula::if_then(ys, f, g),
              Formula::conj(Formula::neg(Formula::exists_all(ys, f)), h));
        } else {
          throw std::logic_error("clause merging hit an unsplit body");
        }
        prev.body = {BodyElt::goal(merged)};
        prog.clauses.erase(prog.clauses.begin() +
                           static_cast<long>(last_i));
        changed = true;
        break;
      }
    }
  }
};

}  // namespace

CompletionTrace complete_trace(const Program& p) {
  Passes st;
  st.prog = p;
  size_t max_arity = 0;
  for (const auto& c : p.clauses) max_arity = std::max(max_arity, c.arity());
  st.pool = choose_pool(p, max_arity);
  st.budget = program_weight(p) * 8 + 64;

  CompletionTrace out;
  out.pool = st.pool;
  auto checkpoint = [&](int pass) { out.after_pass.emplace_back(pass, st.prog); };

  st.canonical_heads();
  checkpoint(2);
  st.fuse_conjunctions();
  checkpoint(3);
  st.fill_empty_bodies();
  checkpoint(4);
  st.drop_duplicate_cuts();
  checkpoint(5);
  st.pad_leading_cuts();
  checkpoint(6);
  st.pad_trailing_cuts();
  checkpoint(7);
  st.split_multi_cuts();
  checkpoint(8);
  st.scope_last_clauses();
  checkpoint(9);
  st.merge_clauses();
  checkpoint(10);

  out.result = st.prog;
  return out;
}

Program complete(const Program& p) { return complete_trace(p).result; }

std::vector<std::string> completed_form_violations(const Program& p) {
  std::vector<std::string> out;
  for (size_t i = 0; i < p.clauses.size(); ++i) {
    const Clause& c = p.clauses[i];
    std::string where = "clause " + std::to_string(i + 1) + " (" + c.pred +
                        "/" + std::to_string(c.arity()) + ")";
    std::set<std::string> seen;
    bool distinct_vars = true;
    for (const auto& t : c.head) {
      if (!t->is_var() || !seen.insert(t->name).second) distinct_vars = false;
    }
    if (!distinct_vars)
      out.push_back(where + ": head parameters are not distinct variables");
    if (c.body.size() != 1 || c.body.front().is_cut()) {
      out.push_back(where + ": body is not a single formula");
    } else {
      std::set<std::string> head_vars;
      for (const auto& t : c.head)
        for (const auto& v : free_vars(t)) head_vars.insert(v);
      std::string extras;
      for (const auto& v : free_vars(c.body.front().formula)) {
        if (!head_vars.count(v)) extras += (extras.empty() ? "" : ", ") + v;
      }
      if (!extras.empty())
        out.push_back(where + ": body mentions variables not in the head: " +
                      extras);
    }
  }
  std::map<std::pair<std::string, size_t>, size_t> counts;
  std::vector<std::pair<std::string, size_t>> order;
  for (const auto& c : p.clauses) {
    auto key = std::make_pair(c.pred, c.arity());
    if (counts[key]++ == 0) order.push_back(key);
  }
  for (const auto& key : order) {
    if (counts[key] > 1)
      out.push_back("predicate " + key.first + "/" +
                    std::to_string(key.second) + " is defined by " +
                    std::to_string(counts[key]) + " clauses");
  }
  return out;
}

bool is_completed_form(const Program& p) {
  return completed_form_violations(p).empty();
}

}  // namespace flp
