#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace pyopt {

using Ident = std::string;

// Literal scalar carried by Const expressions and abstract constants.
// Equality is type-sensitive: 1, 1.0 and True are three different literals.
struct Literal {
    enum class Type { Int, Bool, Float, Str };
    Type type = Type::Int;
    long long i = 0;
    bool b = false;
    double f = 0.0;
    std::string s;

    static Literal make_int(long long v) { return {Type::Int, v, false, 0.0, {}}; }
    static Literal make_bool(bool v) { return {Type::Bool, 0, v, 0.0, {}}; }
    static Literal make_float(double v) { return {Type::Float, 0, false, v, {}}; }
    static Literal make_str(std::string v) {
        Literal l;
        l.type = Type::Str;
        l.s = std::move(v);
        return l;
    }
    bool truthy() const;
    friend bool operator==(const Literal& a, const Literal& b);
};

enum class BinOp {
    Add, Sub, Mul, FloorDiv, TrueDiv, Mod, Pow,
    Eq, Ne, Lt, Le, Gt, Ge,
    And, Or,
};

enum class UnOp { Neg, Not };

const char* binop_text(BinOp op);
const char* unop_text(UnOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct ConstE { Literal value; };
struct VarE { Ident name; };
struct BinE { BinOp op; ExprPtr lhs, rhs; };
struct UnE { UnOp op; ExprPtr operand; };
// Callee is a bare identifier (builtin or user function).
struct CallE { Ident callee; std::vector<ExprPtr> args; };
struct MethodE { ExprPtr base; Ident method; std::vector<ExprPtr> args; };
struct SubscriptE { ExprPtr base, index; };
// Any of lo/hi/step may be null (absent bound).
struct SliceE { ExprPtr base, lo, hi, step; };
struct ListE { std::vector<ExprPtr> items; };
struct DictE {};  // the subset admits only the empty dict literal

struct Expr {
    std::variant<ConstE, VarE, BinE, UnE, CallE, MethodE, SubscriptE, SliceE, ListE, DictE> node;

    template <class T>
    const T* as() const { return std::get_if<T>(&node); }
};

ExprPtr make_expr(Expr e);
ExprPtr make_const(Literal v);
ExprPtr make_var(Ident name);
ExprPtr make_bin(BinOp op, ExprPtr lhs, ExprPtr rhs);

bool expr_equal(const Expr& a, const Expr& b);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

enum class StmtKind {
    Assign,          // target = value
    SubscriptAssign, // target[index] = value
    If,              // value is the guard; body = then, orelse = else
    While,           // value is the guard
    For,             // target is the loop variable, value the iterable
    FunDef,          // target is the name
    Return,          // value may be null
    ExprStmt,        // value is a CallE or MethodE
    Pass,
};

struct Stmt {
    int id = -1;     // dense pre-order index, assigned by Program::renumber
    StmtKind kind = StmtKind::Pass;
    Ident target;
    std::vector<Ident> params;
    ExprPtr value;
    ExprPtr index;
    std::vector<Stmt> body;
    std::vector<Stmt> orelse;
};

bool stmt_equal(const Stmt& a, const Stmt& b);  // ignores ids

struct Program {
    std::vector<Stmt> body;

    // Reassigns dense pre-order statement ids (0..N-1) and returns the count.
    int renumber();
    int stmt_count() const;
    const Stmt* find(int id) const;
};

bool program_equal(const Program& a, const Program& b);

// Pre-order walk over all statements (including nested bodies).
void for_each_stmt(const std::vector<Stmt>& body,
                   const std::function<void(const Stmt&, int depth)>& fn, int depth = 0);

}  // namespace pyopt
