#pragma once

#include <string>

#include "pyopt/ast.hpp"

namespace pyopt {

// Canonical source text: 4-space indents, single spaces around binary
// operators, if/while guards parenthesized. parse(print_program(p)) is
// structurally equal to p. The empty program prints as "pass".
std::string print_program(const Program& p);

std::string print_expr(const Expr& e);
std::string print_expr(const ExprPtr& e);

// One-line header form of a statement ("while (n > 1):", "x = y + 1").
std::string stmt_header(const Stmt& s);

// Shortest round-trip float formatting in CPython repr style
// (fixed for decimal exponents in [-4, 16), scientific otherwise,
// integral values keep a trailing ".0").
std::string format_float(double v);

// Literal rendered as source text (strings are quoted and escaped).
std::string format_literal(const Literal& v);

}  // namespace pyopt
