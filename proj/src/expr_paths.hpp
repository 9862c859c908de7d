#pragma once

#include <functional>
#include <vector>

#include "pyopt/ast.hpp"

namespace pyopt {

// Child slots: BinE 0=lhs 1=rhs; UnE 0; CallE arg i; MethodE 0=base 1+i=args;
// SubscriptE 0=base 1=index; SliceE 0=base 1=lo 2=hi 3=step; ListE item i.
using ExprVisitor = std::function<void(const ExprPtr&, const std::vector<int>& path)>;

void walk_expr(const ExprPtr& e, const ExprVisitor& fn);

// Returns a copy of e with the node at `path` replaced; null when the path
// does not resolve.
ExprPtr replace_at(const ExprPtr& e, const std::vector<int>& path, const ExprPtr& replacement);

ExprPtr child_at(const ExprPtr& e, int slot);

}  // namespace pyopt
