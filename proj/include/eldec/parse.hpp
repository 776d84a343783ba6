#ifndef ELDEC_PARSE_HPP
#define ELDEC_PARSE_HPP

#include "eldec/formula.hpp"

namespace eldec {

/// Parse the surface syntax:
///
///   formula := "forall" var "." formula
///            | "exists" var "." formula
///            | formula "->" formula        (right-assoc, lowest)
///            | formula "|" formula
///            | formula "&" formula
///            | "~" formula
///            | "(" formula ")"
///            | atom
///   atom    := "true" | "false"
///            | rel "(" term {"," term} ")"
///            | term ("=" | "<") term
///   term    := "#" nat | name | fn "(" term {"," term} ")"
///
/// Precedence: ~ binds tightest, then &, |, ->; quantifier bodies extend as
/// far right as possible. Names are resolved against the signature: a 0-ary
/// function is a named constant, other matches of fn(...) are function
/// applications, name(...) with a relation of that arity is an atom. An
/// identifier in both roles (e.g. unary function S vs binary relation S) is
/// disambiguated by argument count and position. Unresolved bare names are
/// variables.
///
/// Throws FormulaError with a character position on malformed input.
FormulaPtr parse_formula(const Signature& sig, std::string_view text);

Term parse_term(const Signature& sig, std::string_view text);

}  // namespace eldec

#endif
