#include "pyopt/ast.hpp"

namespace pyopt {

bool Literal::truthy() const {
    switch (type) {
        case Type::Int: return i != 0;
        case Type::Bool: return b;
        case Type::Float: return f != 0.0;
        case Type::Str: return !s.empty();
    }
    return false;
}

bool operator==(const Literal& a, const Literal& b) {
    if (a.type != b.type) return false;
    switch (a.type) {
        case Literal::Type::Int: return a.i == b.i;
        case Literal::Type::Bool: return a.b == b.b;
        case Literal::Type::Float: return a.f == b.f;
        case Literal::Type::Str: return a.s == b.s;
    }
    return false;
}

const char* binop_text(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::FloorDiv: return "//";
        case BinOp::TrueDiv: return "/";
        case BinOp::Mod: return "%";
        case BinOp::Pow: return "**";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::And: return "and";
        case BinOp::Or: return "or";
    }
    return "?";
}

const char* unop_text(UnOp op) { return op == UnOp::Neg ? "-" : "not"; }

ExprPtr make_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
ExprPtr make_const(Literal v) { return make_expr(Expr{ConstE{std::move(v)}}); }
ExprPtr make_var(Ident name) { return make_expr(Expr{VarE{std::move(name)}}); }
ExprPtr make_bin(BinOp op, ExprPtr lhs, ExprPtr rhs) {
    return make_expr(Expr{BinE{op, std::move(lhs), std::move(rhs)}});
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return expr_equal(*a, *b);
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    struct Eq {
        const Expr& other;
        bool operator()(const ConstE& x) const { return x.value == std::get<ConstE>(other.node).value; }
        bool operator()(const VarE& x) const { return x.name == std::get<VarE>(other.node).name; }
        bool operator()(const BinE& x) const {
            const auto& y = std::get<BinE>(other.node);
            return x.op == y.op && expr_equal(x.lhs, y.lhs) && expr_equal(x.rhs, y.rhs);
        }
        bool operator()(const UnE& x) const {
            const auto& y = std::get<UnE>(other.node);
            return x.op == y.op && expr_equal(x.operand, y.operand);
        }
        bool operator()(const CallE& x) const {
            const auto& y = std::get<CallE>(other.node);
            if (x.callee != y.callee || x.args.size() != y.args.size()) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
                if (!expr_equal(x.args[i], y.args[i])) return false;
            return true;
        }
        bool operator()(const MethodE& x) const {
            const auto& y = std::get<MethodE>(other.node);
            if (x.method != y.method || x.args.size() != y.args.size()) return false;
            if (!expr_equal(x.base, y.base)) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
                if (!expr_equal(x.args[i], y.args[i])) return false;
            return true;
        }
        bool operator()(const SubscriptE& x) const {
            const auto& y = std::get<SubscriptE>(other.node);
            return expr_equal(x.base, y.base) && expr_equal(x.index, y.index);
        }
        bool operator()(const SliceE& x) const {
            const auto& y = std::get<SliceE>(other.node);
            return expr_equal(x.base, y.base) && expr_equal(x.lo, y.lo) &&
                   expr_equal(x.hi, y.hi) && expr_equal(x.step, y.step);
        }
        bool operator()(const ListE& x) const {
            const auto& y = std::get<ListE>(other.node);
            if (x.items.size() != y.items.size()) return false;
            for (size_t i = 0; i < x.items.size(); ++i)
                if (!expr_equal(x.items[i], y.items[i])) return false;
            return true;
        }
        bool operator()(const DictE&) const { return true; }
    };
    return std::visit(Eq{b}, a.node);
}

static bool seq_equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!stmt_equal(a[i], b[i])) return false;
    return true;
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
    if (a.kind != b.kind || a.target != b.target || a.params != b.params) return false;
    if (!expr_equal(a.value, b.value) || !expr_equal(a.index, b.index)) return false;
    return seq_equal(a.body, b.body) && seq_equal(a.orelse, b.orelse);
}

bool program_equal(const Program& a, const Program& b) { return seq_equal(a.body, b.body); }

static void renumber_seq(std::vector<Stmt>& body, int& next) {
    for (auto& s : body) {
        s.id = next++;
        renumber_seq(s.body, next);
        renumber_seq(s.orelse, next);
    }
}

int Program::renumber() {
    int next = 0;
    renumber_seq(body, next);
    return next;
}

int Program::stmt_count() const {
    int n = 0;
    for_each_stmt(body, [&](const Stmt&, int) { ++n; });
    return n;
}

static const Stmt* find_in(const std::vector<Stmt>& body, int id) {
    for (const auto& s : body) {
        if (s.id == id) return &s;
        if (const Stmt* r = find_in(s.body, id)) return r;
        if (const Stmt* r = find_in(s.orelse, id)) return r;
    }
    return nullptr;
}

const Stmt* Program::find(int id) const { return find_in(body, id); }

void for_each_stmt(const std::vector<Stmt>& body,
                   const std::function<void(const Stmt&, int)>& fn, int depth) {
    for (const auto& s : body) {
        fn(s, depth);
        for_each_stmt(s.body, fn, depth + 1);
        for_each_stmt(s.orelse, fn, depth + 1);
    }
}

}  // namespace pyopt
