#pragma once

#include "moserlab/expr.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace moserlab::poly {

/// Parsed s-expression: an atom or a parenthesised list.
struct SNode {
    bool is_list = false;
    std::string atom;
    std::vector<SNode> items;
    int line = 0;
};

/// Parses every top-level form in text. ';' starts a comment running to end of line.
/// Throws ConfigError with the offending line on unbalanced input.
std::vector<SNode> parse_sexprs(std::string_view text);

std::string to_text(const SNode& node);

using Definitions = std::map<std::string, Expr, std::less<>>;

/// Evaluates an expression form:
///   atoms   t  s  p  p/q  <defined name>
///   (+ e...) (- e) (- e e...) (* e...) (/ e c) (^ e n)     c a rational constant
///   (abs t) (sign t) (abspow A Q)        |t|^(A*s+Q)
///   (d e) (ds e) (nonneg e) (at-one e) (subs-s e R)
Expr eval_expr(const SNode& node, const Definitions& defs = {});

/// Evaluates a form that must reduce to a rational constant.
Rational eval_rational(const SNode& node, const Definitions& defs = {});

Expr parse_expr(std::string_view text, const Definitions& defs = {});

/// Canonical text: (+ (* C (sign t) (abspow A Q)) ...) with terms in key order and
/// C written as a polynomial in s. parse_expr(serialize(e)) == e.
std::string serialize(const Expr& e);

}  // namespace moserlab::poly
