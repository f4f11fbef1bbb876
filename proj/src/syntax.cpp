#include "flp/syntax.hpp"

#include <cctype>
#include <functional>
#include <map>

namespace flp {

namespace {

std::string pos_text(SourcePos p) {
  return std::to_string(p.line) + ":" + std::to_string(p.col);
}

}  // namespace

ParseError::ParseError(SourcePos p, const std::string& what)
    : std::runtime_error("parse error at " + pos_text(p) + ": " + what),
      pos(p) {}

ValidationError::ValidationError(SourcePos p, const std::string& what)
    : std::runtime_error("validation error at " + pos_text(p) + ": " + what),
      pos(p) {}

namespace {

enum class Tok {
  Atom,    // lowercase identifier or digit string
  Var,     // uppercase or underscore identifier
  Neck,    // :-
  Comma,
  Semi,
  Bang,
  Eq,
  LParen,
  RParen,
  LBrack,
  RBrack,
  Bar,
  Dot,
  NotSign,  // \+
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourcePos pos{line_, col_};
      if (i_ >= src_.size()) {
        out.push_back({Tok::End, "", pos});
        return out;
      }
      char c = src_[i_];
      if (std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back({Tok::Atom, ident(), pos});
        continue;
      }
      if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back({Tok::Var, ident(), pos});
        continue;
      }
      if (c == ':' && i_ + 1 < src_.size() && src_[i_ + 1] == '-') {
        bump(2);
        out.push_back({Tok::Neck, ":-", pos});
        continue;
      }
      if (c == '\\' && i_ + 1 < src_.size() && src_[i_ + 1] == '+') {
        bump(2);
        out.push_back({Tok::NotSign, "\\+", pos});
        continue;
      }
      Tok k;
      switch (c) {
        case ',': k = Tok::Comma; break;
        case ';': k = Tok::Semi; break;
        case '!': k = Tok::Bang; break;
        case '=': k = Tok::Eq; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '[': k = Tok::LBrack; break;
        case ']': k = Tok::RBrack; break;
        case '|': k = Tok::Bar; break;
        case '.': k = Tok::Dot; break;
        default:
          throw ParseError(pos, std::string("unexpected character '") + c + "'");
      }
      bump(1);
      out.push_back({k, std::string(1, c), pos});
    }
  }

private:
  void skip_space() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '%') {
        while (i_ < src_.size() && src_[i_] != '\n') bump(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump(1);
      } else {
        return;
      }
    }
  }

  std::string ident() {
    size_t start = i_;
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
        bump(1);
      else
        break;
    }
    return src_.substr(start, i_ - start);
  }

  void bump(size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++i_;
    }
  }

  const std::string& src_;
  size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

bool all_digits(const std::string& s) {
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return !s.empty();
}

bool reserved_name(const std::string& s) {
  return s == "true" || s == "fail" || s == "exists" || s == "if";
}

class Parser {
public:
  explicit Parser(const std::string& src) : toks_(Lexer(src).run()) {}

  Program program() {
    Program p;
    while (!at(Tok::End)) p.clauses.push_back(clause());
    normalize_program(p);
    return p;
  }

  FormulaP goal() {
    FormulaP f = or_level(true);
    expect(Tok::End, "end of goal");
    return normalize_goal(f);
  }

  TermP term_only() {
    TermP t = term();
    expect(Tok::End, "end of term");
    return t;
  }

private:
  const Token& cur() const { return toks_[i_]; }
  const Token& peek() const {
    return toks_[i_ + 1 < toks_.size() ? i_ + 1 : toks_.size() - 1];
  }
  bool at(Tok k) const { return cur().kind == k; }
  Token advance() { return toks_[i_++]; }
  Token expect(Tok k, const char* what) {
    if (!at(k)) throw ParseError(cur().pos, std::string("expected ") + what);
    return advance();
  }

  Clause clause() {
    if (!at(Tok::Atom))
      throw ParseError(cur().pos, "expected clause head");
    Token head = advance();
    if (all_digits(head.text))
      throw ParseError(head.pos, "a digit string cannot be a clause head");
    if (reserved_name(head.text))
      throw ValidationError(head.pos,
                            "'" + head.text + "' is reserved and cannot head a clause");
    Clause c;
    c.pred = head.text;
    if (at(Tok::LParen)) {
      advance();
      c.head.push_back(term());
      while (at(Tok::Comma)) {
        advance();
        c.head.push_back(term());
      }
      expect(Tok::RParen, "')' after head arguments");
    }
    note_pred(c.pred, c.head.size(), head.pos);
    if (at(Tok::Dot)) {
      advance();
      return c;
    }
    expect(Tok::Neck, "':-' or '.' after clause head");
    for (;;) {
      if (at(Tok::Bang)) {
        advance();
        c.body.push_back(BodyElt::cut());
      } else {
        c.body.push_back(BodyElt::goal(or_level(false)));
      }
      if (at(Tok::Comma)) {
        advance();
        continue;
      }
      break;
    }
    expect(Tok::Dot, "'.' at end of clause");
    return c;
  }

  // Disjunction level. With comma_ok the operands are comma conjunctions
  // (goals, parenthesized formulas); without it they are single units,
  // which is how clause bodies keep the comma for separating elements.
  FormulaP or_level(bool comma_ok) {
    FormulaP left = comma_ok ? and_level() : unit();
    if (!at(Tok::Semi)) return left;
    advance();
    return Formula::disj(std::move(left), or_level(comma_ok));
  }

  FormulaP and_level() {
    FormulaP left = unit();
    if (!at(Tok::Comma)) return left;
    advance();
    return Formula::conj(std::move(left), and_level());
  }

  FormulaP unit() {
    if (at(Tok::NotSign)) {
      advance();
      return Formula::neg(unit());
    }
    return primary();
  }

  FormulaP primary() {
    if (at(Tok::Bang))
      throw ValidationError(cur().pos, "cut is only allowed at clause-body top level");
    if (at(Tok::LParen)) {
      advance();
      FormulaP f = or_level(true);
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at(Tok::Atom) && cur().text == "exists" && peek().kind == Tok::LParen) {
      advance();
      advance();
      Token v = expect(Tok::Var, "variable after 'exists('");
      expect(Tok::Comma, "',' in exists");
      FormulaP body = or_level(true);
      expect(Tok::RParen, "')' closing exists");
      return Formula::exists(v.text, std::move(body));
    }
    if (at(Tok::Atom) && cur().text == "if" && peek().kind == Tok::LParen) {
      Token kw = advance();
      advance();
      expect(Tok::LBrack, "'[' opening the binder list of if");
      std::vector<std::string> binders;
      if (!at(Tok::RBrack)) {
        binders.push_back(expect(Tok::Var, "binder variable").text);
        while (at(Tok::Comma)) {
          advance();
          binders.push_back(expect(Tok::Var, "binder variable").text);
        }
      }
      expect(Tok::RBrack, "']' closing the binder list");
      for (size_t i = 0; i < binders.size(); ++i)
        for (size_t j = i + 1; j < binders.size(); ++j)
          if (binders[i] == binders[j])
            throw ValidationError(kw.pos, "duplicate binder '" + binders[i] +
                                              "' in if");
      expect(Tok::Comma, "',' after binder list");
      // The commas separating if's arguments win over conjunction, exactly
      // as in a clause body: write if([X], (a , b), c) to conjoin.
      FormulaP cond = or_level(false);
      expect(Tok::Comma, "',' between the branches of if");
      FormulaP branch = or_level(false);
      expect(Tok::RParen, "')' closing if");
      return Formula::if_then(std::move(binders), std::move(cond),
                              std::move(branch));
    }
    SourcePos pos = cur().pos;
    TermP t = term();
    if (at(Tok::Eq)) {
      advance();
      TermP r = term();
      return Formula::eq(std::move(t), std::move(r));
    }
    if (t->is_var())
      throw ParseError(pos, "expected '=' after a variable in formula position");
    if (t->name == "true" && t->args.empty()) return truth();
    if (t->name == "fail" && t->args.empty()) return falsity();
    if (reserved_name(t->name))
      throw ValidationError(pos, "'" + t->name + "' is reserved and cannot be called");
    if (all_digits(t->name))
      throw ParseError(pos, "expected '=' after a numeric constant");
    note_pred(t->name, t->args.size(), pos);
    return Formula::call(t->name, t->args);
  }

  TermP term() {
    if (at(Tok::Var)) return Term::var(advance().text);
    if (at(Tok::LBrack)) {
      advance();
      if (at(Tok::RBrack)) {
        advance();
        return nil();
      }
      std::vector<TermP> items{term()};
      while (at(Tok::Comma)) {
        advance();
        items.push_back(term());
      }
      TermP tail = nil();
      if (at(Tok::Bar)) {
        advance();
        tail = term();
      }
      expect(Tok::RBrack, "']' closing list");
      return make_list(items, std::move(tail));
    }
    if (at(Tok::Atom)) {
      Token name = advance();
      std::vector<TermP> args;
      if (at(Tok::LParen)) {
        if (all_digits(name.text))
          throw ParseError(name.pos, "a digit string cannot take arguments");
        advance();
        args.push_back(term());
        while (at(Tok::Comma)) {
          advance();
          args.push_back(term());
        }
        expect(Tok::RParen, "')' closing arguments");
      }
      if (!args.empty() && reserved_name(name.text))
        throw ValidationError(name.pos,
                              "'" + name.text + "' is reserved and cannot be a functor");
      note_fn(name.text, args.size(), name.pos);
      return Term::fn(name.text, std::move(args));
    }
    throw ParseError(cur().pos, "expected a term");
  }

  void note_pred(const std::string& name, size_t arity, SourcePos pos) {
    auto it = pred_arity_.find(name);
    if (it == pred_arity_.end()) {
      pred_arity_[name] = arity;
      return;
    }
    if (it->second != arity)
      throw ValidationError(pos, "predicate '" + name + "' used with arity " +
                                     std::to_string(arity) + " and " +
                                     std::to_string(it->second));
  }

  void note_fn(const std::string& name, size_t arity, SourcePos pos) {
    auto it = fn_arity_.find(name);
    if (it == fn_arity_.end()) {
      fn_arity_[name] = arity;
      return;
    }
    if (it->second != arity)
      throw ValidationError(pos, "functor '" + name + "' used with arity " +
                                     std::to_string(arity) + " and " +
                                     std::to_string(it->second));
  }

  // Rename any binder that shadows an in-scope name, so downstream passes
  // never have to reason about shadowing. Fresh names use '#', which this
  // lexer cannot produce, so no collision with source names is possible.
  FormulaP unshadow(const FormulaP& f, std::set<std::string> scope) {
    switch (f->kind) {
      case Formula::Kind::Eq:
      case Formula::Kind::Call:
        return f;
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        FormulaP l = unshadow(f->left, scope), r = unshadow(f->right, scope);
        if (l == f->left && r == f->right) return f;
        return f->kind == Formula::Kind::And ? Formula::conj(l, r)
                                             : Formula::disj(l, r);
      }
      case Formula::Kind::Not: {
        FormulaP b = unshadow(f->left, scope);
        return b == f->left ? f : Formula::neg(b);
      }
      case Formula::Kind::Exists: {
        std::string v = f->var;
        FormulaP body = f->left;
        if (scope.count(v)) {
          std::string v2 = supply_.fresh(v);
          body = apply_subst(Subst::single(v, Term::var(v2)), body, supply_);
          v = v2;
        }
        scope.insert(v);
        body = unshadow(body, scope);
        if (v == f->var && body == f->left) return f;
        return Formula::exists(v, body);
      }
      case Formula::Kind::If: {
        std::vector<std::string> binders = f->binders;
        FormulaP cond = f->left, branch = f->right;
        Subst rename;
        for (auto& b : binders) {
          if (!scope.count(b)) continue;
          std::string b2 = supply_.fresh(b);
          rename.bind(b, Term::var(b2));
          b = b2;
        }
        if (!rename.empty()) {
          cond = apply_subst(rename, cond, supply_);
          branch = apply_subst(rename, branch, supply_);
        }
        for (const auto& b : binders) scope.insert(b);
        cond = unshadow(cond, scope);
        branch = unshadow(branch, scope);
        if (binders == f->binders && cond == f->left && branch == f->right)
          return f;
        return Formula::if_then(std::move(binders), cond, branch);
      }
    }
    return f;
  }

  void normalize_program(Program& p) {
    for (auto& c : p.clauses) {
      std::vector<std::string> outer = free_vars(c);
      std::set<std::string> scope(outer.begin(), outer.end());
      for (auto& e : c.body)
        if (!e.is_cut()) e.formula = unshadow(e.formula, scope);
    }
  }

  FormulaP normalize_goal(const FormulaP& f) {
    auto outer = free_vars(f);
    return unshadow(f, {outer.begin(), outer.end()});
  }

  std::vector<Token> toks_;
  size_t i_ = 0;
  std::map<std::string, size_t> pred_arity_, fn_arity_;
  NameSupply supply_;
};

}  // namespace

Program parse_program(const std::string& src) { return Parser(src).program(); }

FormulaP parse_goal(const std::string& src) { return Parser(src).goal(); }

TermP parse_term_text(const std::string& src) { return Parser(src).term_only(); }

namespace {

bool parseable_var(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isupper(static_cast<unsigned char>(name[0])) && name[0] != '_')
    return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

void print_term_rec(const TermP& t, std::string& out) {
  if (t->is_var()) {
    out += t->name;
    return;
  }
  if (t->name == "nil" && t->args.empty()) {
    out += "[]";
    return;
  }
  if (t->name == "cons" && t->args.size() == 2) {
    out += "[";
    print_term_rec(t->args[0], out);
    TermP rest = t->args[1];
    while (!rest->is_var() && rest->name == "cons" && rest->args.size() == 2) {
      out += ", ";
      print_term_rec(rest->args[0], out);
      rest = rest->args[1];
    }
    if (rest->is_var() || rest->name != "nil" || !rest->args.empty()) {
      out += " | ";
      print_term_rec(rest, out);
    }
    out += "]";
    return;
  }
  out += t->name;
  if (!t->args.empty()) {
    out += "(";
    for (size_t i = 0; i < t->args.size(); ++i) {
      if (i) out += ", ";
      print_term_rec(t->args[i], out);
    }
    out += ")";
  }
}

// Pick a parseable replacement for an internal binder name, distinct from
// everything already in use inside the artifact being printed.
std::string pick_print_name(const std::string& old,
                            std::set<std::string>& used) {
  std::string base = old.substr(0, old.find('#'));
  if (!parseable_var(base)) base = "V";
  for (int k = 0;; ++k) {
    std::string cand = k == 0 ? base : base + std::to_string(k);
    if (!used.count(cand)) {
      used.insert(cand);
      return cand;
    }
  }
}

FormulaP rename_binders_for_print(const FormulaP& f,
                                  std::set<std::string>& used,
                                  NameSupply& ns) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Call:
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      FormulaP l = rename_binders_for_print(f->left, used, ns);
      FormulaP r = rename_binders_for_print(f->right, used, ns);
      if (l == f->left && r == f->right) return f;
      return f->kind == Formula::Kind::And ? Formula::conj(l, r)
                                           : Formula::disj(l, r);
    }
    case Formula::Kind::Not: {
      FormulaP b = rename_binders_for_print(f->left, used, ns);
      return b == f->left ? f : Formula::neg(b);
    }
    case Formula::Kind::Exists: {
      std::string v = f->var;
      FormulaP body = f->left;
      if (!parseable_var(v)) {
        std::string v2 = pick_print_name(v, used);
        body = apply_subst(Subst::single(v, Term::var(v2)), body, ns);
        v = v2;
      }
      body = rename_binders_for_print(body, used, ns);
      if (v == f->var && body == f->left) return f;
      return Formula::exists(v, body);
    }
    case Formula::Kind::If: {
      std::vector<std::string> binders = f->binders;
      FormulaP cond = f->left, branch = f->right;
      Subst rename;
      for (auto& b : binders) {
        if (parseable_var(b)) continue;
        std::string b2 = pick_print_name(b, used);
        rename.bind(b, Term::var(b2));
        b = b2;
      }
      if (!rename.empty()) {
        cond = apply_subst(rename, cond, ns);
        branch = apply_subst(rename, branch, ns);
      }
      cond = rename_binders_for_print(cond, used, ns);
      branch = rename_binders_for_print(branch, used, ns);
      if (binders == f->binders && cond == f->left && branch == f->right)
        return f;
      return Formula::if_then(std::move(binders), cond, branch);
    }
  }
  return f;
}

void print_formula_rec(const FormulaP& f, std::string& out) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      if (formula_eq(f, truth())) {
        out += "true";
      } else if (formula_eq(f, falsity())) {
        out += "fail";
      } else {
        print_term_rec(f->lhs, out);
        out += " = ";
        print_term_rec(f->rhs, out);
      }
      break;
    case Formula::Kind::Call:
      out += f->pred;
      if (!f->args.empty()) {
        out += "(";
        for (size_t i = 0; i < f->args.size(); ++i) {
          if (i) out += ", ";
          print_term_rec(f->args[i], out);
        }
        out += ")";
      }
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      out += "(";
      print_formula_rec(f->left, out);
      out += f->kind == Formula::Kind::And ? " , " : " ; ";
      print_formula_rec(f->right, out);
      out += ")";
      break;
    case Formula::Kind::Not: {
      out += "\\+ ";
      bool self_delimited = f->left->kind == Formula::Kind::And ||
                            f->left->kind == Formula::Kind::Or ||
                            f->left->kind == Formula::Kind::Call ||
                            f->left->kind == Formula::Kind::Exists ||
                            f->left->kind == Formula::Kind::If ||
                            formula_eq(f->left, truth()) ||
                            formula_eq(f->left, falsity());
      if (self_delimited) {
        print_formula_rec(f->left, out);
      } else {
        out += "(";
        print_formula_rec(f->left, out);
        out += ")";
      }
      break;
    }
    case Formula::Kind::Exists:
      out += "exists(" + f->var + ", ";
      print_formula_rec(f->left, out);
      out += ")";
      break;
    case Formula::Kind::If: {
      out += "if([";
      for (size_t i = 0; i < f->binders.size(); ++i) {
        if (i) out += ", ";
        out += f->binders[i];
      }
      out += "], ";
      print_formula_rec(f->left, out);
      out += ", ";
      print_formula_rec(f->right, out);
      out += ")";
      break;
    }
  }
}

std::set<std::string> names_in_formula(const FormulaP& f) {
  std::set<std::string> out;
  collect_all_vars(f, out);
  return out;
}

}  // namespace

std::string print_term(const TermP& t) {
  std::string out;
  print_term_rec(t, out);
  return out;
}

std::string print_formula(const FormulaP& f) {
  std::set<std::string> used = names_in_formula(f);
  NameSupply ns;
  FormulaP g = rename_binders_for_print(f, used, ns);
  std::string out;
  print_formula_rec(g, out);
  return out;
}

std::string print_clause(const Clause& c) {
  std::set<std::string> used;
  for (const auto& t : c.head) {
    std::vector<std::string> vs;
    std::set<std::string> seen;
    collect_free_vars(t, vs, seen);
    used.insert(vs.begin(), vs.end());
  }
  for (const auto& e : c.body)
    if (!e.is_cut()) collect_all_vars(e.formula, used);

  std::string out = c.pred;
  if (!c.head.empty()) {
    out += "(";
    for (size_t i = 0; i < c.head.size(); ++i) {
      if (i) out += ", ";
      print_term_rec(c.head[i], out);
    }
    out += ")";
  }
  if (c.body.empty()) return out + ".";
  out += " :- ";
  NameSupply ns;
  for (size_t i = 0; i < c.body.size(); ++i) {
    if (i) out += ", ";
    if (c.body[i].is_cut()) {
      out += "!";
    } else {
      FormulaP g = rename_binders_for_print(c.body[i].formula, used, ns);
      print_formula_rec(g, out);
    }
  }
  return out + ".";
}

std::string print_program(const Program& p) {
  std::string out;
  for (const auto& c : p.clauses) {
    out += print_clause(c);
    out += "\n";
  }
  return out;
}

std::string print_answer(const Subst& s, const std::vector<std::string>& vars) {
  // Engine-made fresh variables surviving into the answer print as _G1...
  Subst cosmetic;
  int next = 1;
  std::function<void(const TermP&)> scan = [&](const TermP& t) {
    if (t->is_var()) {
      if (t->name.find('#') != std::string::npos && !cosmetic.lookup(t->name))
        cosmetic.bind(t->name, Term::var("_G" + std::to_string(next++)));
      return;
    }
    for (const auto& a : t->args) scan(a);
  };
  for (const auto& v : vars) {
    const TermP* t = s.lookup(v);
    if (t) scan(*t);
  }
  std::string out = "{";
  bool first = true;
  for (const auto& v : vars) {
    const TermP* t = s.lookup(v);
    if (!t) continue;
    if (!first) out += ", ";
    first = false;
    out += v + " -> ";
    print_term_rec(apply_subst(cosmetic, *t), out);
  }
  return out + "}";
}

}  // namespace flp
