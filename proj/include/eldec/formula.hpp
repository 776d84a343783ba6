#ifndef ELDEC_FORMULA_HPP
#define ELDEC_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eldec {

struct RelationDecl {
  std::string name;
  unsigned arity = 1;
};

struct FunctionDecl {
  std::string name;
  unsigned arity = 1;
};

/// Finite relational signature. Equality is always available and is not
/// listed among the relations. Function symbols are surface syntax only:
/// diagram-level atoms range over the relations alone (a k-ary function is
/// presented through its (k+1)-ary graph relation).
class Signature {
public:
  Signature() = default;
  Signature(std::vector<RelationDecl> relations,
            std::vector<FunctionDecl> functions = {});

  const std::vector<RelationDecl>& relations() const { return relations_; }
  const std::vector<FunctionDecl>& functions() const { return functions_; }

  std::optional<unsigned> relation_index(std::string_view name) const;
  std::optional<unsigned> function_index(std::string_view name) const;

  bool operator==(const Signature& other) const;

private:
  std::vector<RelationDecl> relations_;
  std::vector<FunctionDecl> functions_;
};

/// First-order term: variable, domain constant (#n), named constant, or
/// function application.
struct Term {
  enum class Kind { Var, DomConst, NamedConst, App };

  Kind kind = Kind::Var;
  std::string name;          // Var, NamedConst, App
  uint64_t index = 0;        // DomConst
  std::vector<Term> args;    // App

  static Term var(std::string n);
  static Term dom_const(uint64_t i);
  static Term named_const(std::string n);
  static Term app(std::string fn, std::vector<Term> a);

  bool operator==(const Term& other) const;
  bool operator<(const Term& other) const;  // structural, for canonical sets
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable formula tree. `Lt` is represented as an Atom with relation
/// name "<"; equality has its own node kind.
class Formula {
public:
  enum class Kind {
    True,
    False,
    Atom,     // sym = relation name, terms = arguments
    Eq,       // terms = {lhs, rhs}
    Not,      // lhs
    And,      // lhs, rhs
    Or,       // lhs, rhs
    Implies,  // lhs, rhs
    Forall,   // sym = variable, lhs = body
    Exists,   // sym = variable, lhs = body
  };

  Kind kind;
  std::string sym;
  std::vector<Term> terms;
  FormulaPtr lhs, rhs;

  Formula(Kind k, std::string s, std::vector<Term> t, FormulaPtr l, FormulaPtr r)
      : kind(k), sym(std::move(s)), terms(std::move(t)), lhs(std::move(l)),
        rhs(std::move(r)) {}
};

FormulaPtr mk_true();
FormulaPtr mk_false();
FormulaPtr mk_atom(std::string rel, std::vector<Term> args);
FormulaPtr mk_eq(Term a, Term b);
FormulaPtr mk_lt(Term a, Term b);
FormulaPtr mk_not(FormulaPtr f);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_forall(std::string var, FormulaPtr body);
FormulaPtr mk_exists(std::string var, FormulaPtr body);

/// n-ary helpers; empty input yields the unit (true for and, false for or).
FormulaPtr mk_and_all(const std::vector<FormulaPtr>& fs);
FormulaPtr mk_or_all(const std::vector<FormulaPtr>& fs);

bool equal(const FormulaPtr& a, const FormulaPtr& b);
bool equal(const Term& a, const Term& b);

std::string to_string(const Term& t);
std::string to_string(const FormulaPtr& f);

std::set<std::string> free_vars(const FormulaPtr& f);
std::set<std::string> all_var_names(const FormulaPtr& f);
std::set<uint64_t> dom_consts(const FormulaPtr& f);

bool is_quantifier_free(const FormulaPtr& f);
unsigned quantifier_rank(const FormulaPtr& f);
size_t node_count(const FormulaPtr& f);
size_t node_count(const Term& t);

/// Capture-avoiding substitution of terms for free variables.
FormulaPtr substitute(const FormulaPtr& f,
                      const std::vector<std::pair<std::string, Term>>& subst);

/// Replace domain constants by terms (no binding concerns on the constant
/// side; substituted terms must not capture — callers pass fresh variables).
FormulaPtr substitute_dom_consts(
    const FormulaPtr& f, const std::vector<std::pair<uint64_t, Term>>& subst);

Term substitute_term(const Term& t,
                     const std::vector<std::pair<std::string, Term>>& subst);

struct FormulaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace eldec

#endif
