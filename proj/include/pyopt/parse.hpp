#pragma once

#include <string>

#include "pyopt/ast.hpp"
#include "pyopt/errors.hpp"

namespace pyopt {

// Parses a source file in the Python subset. Statement ids are assigned
// in pre-order. Throws SyntaxError / UnsupportedConstruct.
Program parse(const std::string& source);

// Parses a single expression (used by tests and trace replay).
ExprPtr parse_expression(const std::string& source);

}  // namespace pyopt
