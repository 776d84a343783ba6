#include "eldec/formula.hpp"

#include <algorithm>
#include <sstream>

namespace eldec {

Signature::Signature(std::vector<RelationDecl> relations,
                     std::vector<FunctionDecl> functions)
    : relations_(std::move(relations)), functions_(std::move(functions)) {
  // Relations and functions live in separate namespaces; the parser
  // disambiguates shared names (unary function S vs binary relation S) by
  // argument count.
  std::set<std::string> seen;
  for (const auto& r : relations_) {
    if (r.arity < 1) throw FormulaError("relation arity must be >= 1: " + r.name);
    if (!seen.insert(r.name).second)
      throw FormulaError("duplicate relation name: " + r.name);
  }
  seen.clear();
  for (const auto& f : functions_) {
    if (!seen.insert(f.name).second)
      throw FormulaError("duplicate function name: " + f.name);
  }
}

std::optional<unsigned> Signature::relation_index(std::string_view name) const {
  for (unsigned i = 0; i < relations_.size(); ++i)
    if (relations_[i].name == name) return i;
  return std::nullopt;
}

std::optional<unsigned> Signature::function_index(std::string_view name) const {
  for (unsigned i = 0; i < functions_.size(); ++i)
    if (functions_[i].name == name) return i;
  return std::nullopt;
}

bool Signature::operator==(const Signature& other) const {
  auto same_rel = [](const RelationDecl& a, const RelationDecl& b) {
    return a.name == b.name && a.arity == b.arity;
  };
  auto same_fn = [](const FunctionDecl& a, const FunctionDecl& b) {
    return a.name == b.name && a.arity == b.arity;
  };
  return std::equal(relations_.begin(), relations_.end(),
                    other.relations_.begin(), other.relations_.end(), same_rel) &&
         std::equal(functions_.begin(), functions_.end(),
                    other.functions_.begin(), other.functions_.end(), same_fn);
}

Term Term::var(std::string n) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(n);
  return t;
}

Term Term::dom_const(uint64_t i) {
  Term t;
  t.kind = Kind::DomConst;
  t.index = i;
  return t;
}

Term Term::named_const(std::string n) {
  Term t;
  t.kind = Kind::NamedConst;
  t.name = std::move(n);
  return t;
}

Term Term::app(std::string fn, std::vector<Term> a) {
  Term t;
  t.kind = Kind::App;
  t.name = std::move(fn);
  t.args = std::move(a);
  return t;
}

bool Term::operator==(const Term& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::Var:
    case Kind::NamedConst:
      return name == other.name;
    case Kind::DomConst:
      return index == other.index;
    case Kind::App:
      return name == other.name && args == other.args;
  }
  return false;
}

bool Term::operator<(const Term& other) const {
  if (kind != other.kind) return kind < other.kind;
  switch (kind) {
    case Kind::Var:
    case Kind::NamedConst:
      return name < other.name;
    case Kind::DomConst:
      return index < other.index;
    case Kind::App:
      if (name != other.name) return name < other.name;
      return args < other.args;
  }
  return false;
}

namespace {
FormulaPtr node(Formula::Kind k, std::string s, std::vector<Term> t,
                FormulaPtr l = nullptr, FormulaPtr r = nullptr) {
  return std::make_shared<Formula>(k, std::move(s), std::move(t), std::move(l),
                                   std::move(r));
}
}  // namespace

FormulaPtr mk_true() { return node(Formula::Kind::True, "", {}); }
FormulaPtr mk_false() { return node(Formula::Kind::False, "", {}); }

FormulaPtr mk_atom(std::string rel, std::vector<Term> args) {
  return node(Formula::Kind::Atom, std::move(rel), std::move(args));
}

FormulaPtr mk_eq(Term a, Term b) {
  return node(Formula::Kind::Eq, "", {std::move(a), std::move(b)});
}

FormulaPtr mk_lt(Term a, Term b) {
  return mk_atom("<", {std::move(a), std::move(b)});
}

FormulaPtr mk_not(FormulaPtr f) {
  return node(Formula::Kind::Not, "", {}, std::move(f));
}

FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) {
  return node(Formula::Kind::And, "", {}, std::move(a), std::move(b));
}

FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) {
  return node(Formula::Kind::Or, "", {}, std::move(a), std::move(b));
}

FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) {
  return node(Formula::Kind::Implies, "", {}, std::move(a), std::move(b));
}

FormulaPtr mk_forall(std::string var, FormulaPtr body) {
  return node(Formula::Kind::Forall, std::move(var), {}, std::move(body));
}

FormulaPtr mk_exists(std::string var, FormulaPtr body) {
  return node(Formula::Kind::Exists, std::move(var), {}, std::move(body));
}

FormulaPtr mk_and_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return mk_true();
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = mk_and(acc, fs[i]);
  return acc;
}

FormulaPtr mk_or_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return mk_false();
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = mk_or(acc, fs[i]);
  return acc;
}

bool equal(const Term& a, const Term& b) { return a == b; }

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->sym != b->sym || a->terms != b->terms)
    return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

std::string to_string(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
    case Term::Kind::NamedConst:
      return t.name;
    case Term::Kind::DomConst:
      return "#" + std::to_string(t.index);
    case Term::Kind::App: {
      std::string s = t.name + "(";
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ",";
        s += to_string(t.args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

namespace {

// Precedence: quantifier/implies lowest, then or, and, not/atom highest.
int prec(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return 0;
    case Formula::Kind::Implies:
      return 1;
    case Formula::Kind::Or:
      return 2;
    case Formula::Kind::And:
      return 3;
    default:
      return 4;
  }
}

void print(const FormulaPtr& f, int parent_prec, std::string& out) {
  int p = prec(f->kind);
  bool paren = p < parent_prec;
  if (paren) out += "(";
  switch (f->kind) {
    case Formula::Kind::True:
      out += "true";
      break;
    case Formula::Kind::False:
      out += "false";
      break;
    case Formula::Kind::Atom:
      if (f->sym == "<" && f->terms.size() == 2) {
        out += to_string(f->terms[0]) + " < " + to_string(f->terms[1]);
      } else {
        out += f->sym + "(";
        for (size_t i = 0; i < f->terms.size(); ++i) {
          if (i) out += ",";
          out += to_string(f->terms[i]);
        }
        out += ")";
      }
      break;
    case Formula::Kind::Eq:
      out += to_string(f->terms[0]) + " = " + to_string(f->terms[1]);
      break;
    case Formula::Kind::Not: {
      out += "~";
      const Formula& a = *f->lhs;
      bool infix = a.kind == Formula::Kind::Eq ||
                   (a.kind == Formula::Kind::Atom && a.sym == "<" &&
                    a.terms.size() == 2);
      if (infix) out += "(";
      print(f->lhs, 4, out);
      if (infix) out += ")";
      break;
    }
    case Formula::Kind::And:
      print(f->lhs, 3, out);
      out += " & ";
      print(f->rhs, 4, out);
      break;
    case Formula::Kind::Or:
      print(f->lhs, 2, out);
      out += " | ";
      print(f->rhs, 3, out);
      break;
    case Formula::Kind::Implies:
      print(f->lhs, 2, out);
      out += " -> ";
      print(f->rhs, 1, out);
      break;
    case Formula::Kind::Forall:
      out += "forall " + f->sym + ". ";
      print(f->lhs, 0, out);
      break;
    case Formula::Kind::Exists:
      out += "exists " + f->sym + ". ";
      print(f->lhs, 0, out);
      break;
  }
  if (paren) out += ")";
}

// Atoms and Eq render as prec 4 but "a < b" / "a = b" need parens inside ~.
}  // namespace

std::string to_string(const FormulaPtr& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

namespace {
void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  for (const auto& a : t.args) term_vars(a, out);
}

void collect_free(const FormulaPtr& f, std::set<std::string> bound,
                  std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::Eq: {
      std::set<std::string> vs;
      for (const auto& t : f->terms) term_vars(t, vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      break;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bound.insert(f->sym);
      collect_free(f->lhs, bound, out);
      break;
    }
    default:
      if (f->lhs) collect_free(f->lhs, bound, out);
      if (f->rhs) collect_free(f->rhs, bound, out);
  }
}
}  // namespace

std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> out;
  collect_free(f, {}, out);
  return out;
}

std::set<std::string> all_var_names(const FormulaPtr& f) {
  std::set<std::string> out;
  if (!f) return out;
  for (const auto& t : f->terms) term_vars(t, out);
  if (f->kind == Formula::Kind::Forall || f->kind == Formula::Kind::Exists)
    out.insert(f->sym);
  if (f->lhs)
    for (const auto& v : all_var_names(f->lhs)) out.insert(v);
  if (f->rhs)
    for (const auto& v : all_var_names(f->rhs)) out.insert(v);
  return out;
}

namespace {
void term_consts(const Term& t, std::set<uint64_t>& out) {
  if (t.kind == Term::Kind::DomConst) out.insert(t.index);
  for (const auto& a : t.args) term_consts(a, out);
}
}  // namespace

std::set<uint64_t> dom_consts(const FormulaPtr& f) {
  std::set<uint64_t> out;
  if (!f) return out;
  for (const auto& t : f->terms) term_consts(t, out);
  if (f->lhs)
    for (auto c : dom_consts(f->lhs)) out.insert(c);
  if (f->rhs)
    for (auto c : dom_consts(f->rhs)) out.insert(c);
  return out;
}

bool is_quantifier_free(const FormulaPtr& f) {
  if (!f) return true;
  if (f->kind == Formula::Kind::Forall || f->kind == Formula::Kind::Exists)
    return false;
  return is_quantifier_free(f->lhs) && is_quantifier_free(f->rhs);
}

unsigned quantifier_rank(const FormulaPtr& f) {
  if (!f) return 0;
  unsigned l = quantifier_rank(f->lhs);
  unsigned r = quantifier_rank(f->rhs);
  unsigned m = std::max(l, r);
  if (f->kind == Formula::Kind::Forall || f->kind == Formula::Kind::Exists)
    return m + 1;
  return m;
}

size_t node_count(const Term& t) {
  size_t n = 1;
  for (const auto& a : t.args) n += node_count(a);
  return n;
}

size_t node_count(const FormulaPtr& f) {
  if (!f) return 0;
  size_t n = 1;
  for (const auto& t : f->terms) n += node_count(t);
  return n + node_count(f->lhs) + node_count(f->rhs);
}

Term substitute_term(const Term& t,
                     const std::vector<std::pair<std::string, Term>>& subst) {
  switch (t.kind) {
    case Term::Kind::Var:
      for (const auto& [v, repl] : subst)
        if (v == t.name) return repl;
      return t;
    case Term::Kind::App: {
      Term out = t;
      for (auto& a : out.args) a = substitute_term(a, subst);
      return out;
    }
    default:
      return t;
  }
}

namespace {

std::string fresh_name(const std::set<std::string>& used, const std::string& base) {
  std::string cand = base;
  int k = 0;
  while (used.count(cand)) cand = base + "_" + std::to_string(k++);
  return cand;
}

FormulaPtr subst_impl(const FormulaPtr& f,
                      std::vector<std::pair<std::string, Term>> subst,
                      std::set<std::string>& used) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom:
    case Formula::Kind::Eq: {
      std::vector<Term> ts;
      ts.reserve(f->terms.size());
      for (const auto& t : f->terms) ts.push_back(substitute_term(t, subst));
      return node(f->kind, f->sym, std::move(ts));
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      // Drop shadowed bindings; rename if a substituted term captures sym.
      std::vector<std::pair<std::string, Term>> inner;
      bool capture = false;
      for (const auto& [v, repl] : subst) {
        if (v == f->sym) continue;
        std::set<std::string> rv;
        term_vars(repl, rv);
        if (rv.count(f->sym)) capture = true;
        inner.emplace_back(v, repl);
      }
      std::string var = f->sym;
      FormulaPtr body = f->lhs;
      if (capture) {
        var = fresh_name(used, f->sym);
        used.insert(var);
        std::vector<std::pair<std::string, Term>> ren{{f->sym, Term::var(var)}};
        body = subst_impl(body, ren, used);
      }
      if (inner.empty()) return node(f->kind, var, {}, body);
      return node(f->kind, var, {}, subst_impl(body, inner, used));
    }
    default: {
      FormulaPtr l = f->lhs ? subst_impl(f->lhs, subst, used) : nullptr;
      FormulaPtr r = f->rhs ? subst_impl(f->rhs, subst, used) : nullptr;
      return node(f->kind, f->sym, f->terms, l, r);
    }
  }
}

}  // namespace

FormulaPtr substitute(const FormulaPtr& f,
                      const std::vector<std::pair<std::string, Term>>& subst) {
  if (subst.empty()) return f;
  auto used = all_var_names(f);
  for (const auto& [v, t] : subst) {
    std::set<std::string> tv;
    term_vars(t, tv);
    for (const auto& x : tv) used.insert(x);
  }
  auto s = subst;
  return subst_impl(f, s, used);
}

namespace {
Term subst_consts_term(const Term& t,
                       const std::vector<std::pair<uint64_t, Term>>& subst) {
  switch (t.kind) {
    case Term::Kind::DomConst:
      for (const auto& [c, repl] : subst)
        if (c == t.index) return repl;
      return t;
    case Term::Kind::App: {
      Term out = t;
      for (auto& a : out.args) a = subst_consts_term(a, subst);
      return out;
    }
    default:
      return t;
  }
}
}  // namespace

FormulaPtr substitute_dom_consts(
    const FormulaPtr& f, const std::vector<std::pair<uint64_t, Term>>& subst) {
  if (subst.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom:
    case Formula::Kind::Eq: {
      std::vector<Term> ts;
      for (const auto& t : f->terms) ts.push_back(subst_consts_term(t, subst));
      return node(f->kind, f->sym, std::move(ts));
    }
    default: {
      FormulaPtr l = f->lhs ? substitute_dom_consts(f->lhs, subst) : nullptr;
      FormulaPtr r = f->rhs ? substitute_dom_consts(f->rhs, subst) : nullptr;
      return node(f->kind, f->sym, f->terms, l, r);
    }
  }
}

}  // namespace eldec
