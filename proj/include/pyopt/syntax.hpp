#pragma once

#include <set>
#include <string>

#include "pyopt/ast.hpp"

namespace pyopt {

// Builtin callables understood by the interpreter.
bool is_builtin(const Ident& name);
// Builtins the constant-folding analysis may evaluate on constant arguments.
bool is_foldable_builtin(const Ident& name);
// Methods that mutate their receiver in place.
bool is_mutating_method(const Ident& name);

using IdentSet = std::set<Ident>;

// Every identifier read or written in the node, including loop variables,
// parameters and subscript bases. Function, builtin and method names are
// excluded.
IdentSet vars_of(const Expr& e);
IdentSet vars_of(const Stmt& s);
IdentSet vars_of(const std::vector<Stmt>& body);
IdentSet vars_of(const Program& p);

// Rebinding targets: assignment targets, loop variables, parameters.
// Subscript writes and mutating method calls are not rebindings.
IdentSet assigned_vars(const Stmt& s);
IdentSet assigned_vars(const std::vector<Stmt>& body);

// assigned_vars plus bases of subscript writes and mutating method calls.
IdentSet written_vars(const Stmt& s);
IdentSet written_vars(const std::vector<Stmt>& body);

// Replaces every free occurrence of x by y. Throws RedefinedInScope when the
// node rebinds x or y (or mentions either under a nested function scope).
ExprPtr substitute(const ExprPtr& e, const Ident& x, const Ident& y);
Stmt substitute(const Stmt& s, const Ident& x, const Ident& y);
std::vector<Stmt> substitute(const std::vector<Stmt>& body, const Ident& x, const Ident& y);

// No input(), no user-function calls, no mutating method calls.
bool is_pure_expr(const Expr& e);
bool is_pure_expr(const ExprPtr& e);

// A statement with no observable effect: no I/O, no user calls, no mutation.
// Rebinding its own targets does not count as an effect.
bool is_effect_free_stmt(const Stmt& s);
bool is_effect_free_stmts(const std::vector<Stmt>& body);

bool contains_input_call(const ExprPtr& e);

// Turns a literal into source-shaped AST (negative numerics become UnOp Neg).
ExprPtr literal_to_expr(const Literal& v);

}  // namespace pyopt
