#include "pyopt/syntax.hpp"

#include <cmath>

#include "pyopt/errors.hpp"

namespace pyopt {

bool is_builtin(const Ident& name) {
    static const IdentSet names = {"print", "input", "int", "float", "str",
                                   "len", "range", "abs", "min", "max"};
    return names.count(name) > 0;
}

bool is_foldable_builtin(const Ident& name) {
    static const IdentSet names = {"len", "abs", "min", "max", "int", "float", "range"};
    return names.count(name) > 0;
}

bool is_mutating_method(const Ident& name) {
    static const IdentSet names = {"append", "pop", "insert", "remove", "extend",
                                   "sort", "reverse", "clear", "update"};
    return names.count(name) > 0;
}

namespace {

void collect_expr_vars(const ExprPtr& e, IdentSet& out) {
    if (!e) return;
    struct V {
        IdentSet& out;
        void operator()(const ConstE&) const {}
        void operator()(const VarE& v) const { out.insert(v.name); }
        void operator()(const BinE& b) const {
            collect_expr_vars(b.lhs, out);
            collect_expr_vars(b.rhs, out);
        }
        void operator()(const UnE& u) const { collect_expr_vars(u.operand, out); }
        void operator()(const CallE& c) const {
            for (const auto& a : c.args) collect_expr_vars(a, out);
        }
        void operator()(const MethodE& m) const {
            collect_expr_vars(m.base, out);
            for (const auto& a : m.args) collect_expr_vars(a, out);
        }
        void operator()(const SubscriptE& s) const {
            collect_expr_vars(s.base, out);
            collect_expr_vars(s.index, out);
        }
        void operator()(const SliceE& s) const {
            collect_expr_vars(s.base, out);
            collect_expr_vars(s.lo, out);
            collect_expr_vars(s.hi, out);
            collect_expr_vars(s.step, out);
        }
        void operator()(const ListE& l) const {
            for (const auto& i : l.items) collect_expr_vars(i, out);
        }
        void operator()(const DictE&) const {}
    };
    std::visit(V{out}, e->node);
}

void collect_stmt_vars(const Stmt& s, IdentSet& out) {
    switch (s.kind) {
        case StmtKind::Assign:
            out.insert(s.target);
            collect_expr_vars(s.value, out);
            break;
        case StmtKind::SubscriptAssign:
            out.insert(s.target);
            collect_expr_vars(s.index, out);
            collect_expr_vars(s.value, out);
            break;
        case StmtKind::ExprStmt:
        case StmtKind::Return:
            collect_expr_vars(s.value, out);
            break;
        case StmtKind::Pass:
            break;
        case StmtKind::If:
        case StmtKind::While:
            collect_expr_vars(s.value, out);
            for (const auto& c : s.body) collect_stmt_vars(c, out);
            for (const auto& c : s.orelse) collect_stmt_vars(c, out);
            break;
        case StmtKind::For:
            out.insert(s.target);
            collect_expr_vars(s.value, out);
            for (const auto& c : s.body) collect_stmt_vars(c, out);
            break;
        case StmtKind::FunDef:
            for (const auto& p : s.params) out.insert(p);
            for (const auto& c : s.body) collect_stmt_vars(c, out);
            break;
    }
}

void collect_assigned(const Stmt& s, bool include_mutation, IdentSet& out);

void collect_assigned_expr(const ExprPtr& e, IdentSet& out) {
    if (!e) return;
    if (const auto* m = e->as<MethodE>()) {
        if (is_mutating_method(m->method)) {
            if (const auto* base = m->base->as<VarE>()) out.insert(base->name);
        }
        collect_assigned_expr(m->base, out);
        for (const auto& a : m->args) collect_assigned_expr(a, out);
        return;
    }
    if (const auto* b = e->as<BinE>()) {
        collect_assigned_expr(b->lhs, out);
        collect_assigned_expr(b->rhs, out);
    } else if (const auto* u = e->as<UnE>()) {
        collect_assigned_expr(u->operand, out);
    } else if (const auto* c = e->as<CallE>()) {
        for (const auto& a : c->args) collect_assigned_expr(a, out);
    } else if (const auto* sub = e->as<SubscriptE>()) {
        collect_assigned_expr(sub->base, out);
        collect_assigned_expr(sub->index, out);
    } else if (const auto* sl = e->as<SliceE>()) {
        collect_assigned_expr(sl->base, out);
        collect_assigned_expr(sl->lo, out);
        collect_assigned_expr(sl->hi, out);
        collect_assigned_expr(sl->step, out);
    } else if (const auto* l = e->as<ListE>()) {
        for (const auto& i : l->items) collect_assigned_expr(i, out);
    }
}

void collect_assigned(const Stmt& s, bool include_mutation, IdentSet& out) {
    switch (s.kind) {
        case StmtKind::Assign:
            out.insert(s.target);
            if (include_mutation) collect_assigned_expr(s.value, out);
            break;
        case StmtKind::SubscriptAssign:
            if (include_mutation) {
                out.insert(s.target);
                collect_assigned_expr(s.index, out);
                collect_assigned_expr(s.value, out);
            }
            break;
        case StmtKind::ExprStmt:
            if (include_mutation) collect_assigned_expr(s.value, out);
            break;
        case StmtKind::Return:
            if (include_mutation) collect_assigned_expr(s.value, out);
            break;
        case StmtKind::Pass:
            break;
        case StmtKind::If:
        case StmtKind::While:
            if (include_mutation) collect_assigned_expr(s.value, out);
            for (const auto& c : s.body) collect_assigned(c, include_mutation, out);
            for (const auto& c : s.orelse) collect_assigned(c, include_mutation, out);
            break;
        case StmtKind::For:
            out.insert(s.target);
            if (include_mutation) collect_assigned_expr(s.value, out);
            for (const auto& c : s.body) collect_assigned(c, include_mutation, out);
            break;
        case StmtKind::FunDef:
            for (const auto& p : s.params) out.insert(p);
            for (const auto& c : s.body) collect_assigned(c, include_mutation, out);
            break;
    }
}

}  // namespace

IdentSet vars_of(const Expr& e) {
    IdentSet out;
    collect_expr_vars(std::make_shared<const Expr>(e), out);
    return out;
}

IdentSet vars_of(const Stmt& s) {
    IdentSet out;
    collect_stmt_vars(s, out);
    return out;
}

IdentSet vars_of(const std::vector<Stmt>& body) {
    IdentSet out;
    for (const auto& s : body) collect_stmt_vars(s, out);
    return out;
}

IdentSet vars_of(const Program& p) { return vars_of(p.body); }

IdentSet assigned_vars(const Stmt& s) {
    IdentSet out;
    collect_assigned(s, false, out);
    return out;
}

IdentSet assigned_vars(const std::vector<Stmt>& body) {
    IdentSet out;
    for (const auto& s : body) collect_assigned(s, false, out);
    return out;
}

IdentSet written_vars(const Stmt& s) {
    IdentSet out;
    collect_assigned(s, true, out);
    return out;
}

IdentSet written_vars(const std::vector<Stmt>& body) {
    IdentSet out;
    for (const auto& s : body) collect_assigned(s, true, out);
    return out;
}

namespace {

ExprPtr subst_expr(const ExprPtr& e, const Ident& x, const Ident& y) {
    if (!e) return e;
    struct V {
        const Ident& x;
        const Ident& y;
        ExprPtr operator()(const ConstE&) const { return nullptr; }
        ExprPtr operator()(const VarE& v) const {
            if (v.name == x) return make_var(y);
            return nullptr;
        }
        ExprPtr operator()(const BinE& b) const {
            ExprPtr l = subst_expr(b.lhs, x, y), r = subst_expr(b.rhs, x, y);
            if (!l && !r) return nullptr;
            return make_bin(b.op, l ? l : b.lhs, r ? r : b.rhs);
        }
        ExprPtr operator()(const UnE& u) const {
            ExprPtr o = subst_expr(u.operand, x, y);
            if (!o) return nullptr;
            return make_expr(Expr{UnE{u.op, o}});
        }
        ExprPtr operator()(const CallE& c) const {
            std::vector<ExprPtr> args;
            bool changed = false;
            for (const auto& a : c.args) {
                ExprPtr n = subst_expr(a, x, y);
                changed |= n != nullptr;
                args.push_back(n ? n : a);
            }
            if (!changed) return nullptr;
            return make_expr(Expr{CallE{c.callee, std::move(args)}});
        }
        ExprPtr operator()(const MethodE& m) const {
            ExprPtr base = subst_expr(m.base, x, y);
            std::vector<ExprPtr> args;
            bool changed = base != nullptr;
            for (const auto& a : m.args) {
                ExprPtr n = subst_expr(a, x, y);
                changed |= n != nullptr;
                args.push_back(n ? n : a);
            }
            if (!changed) return nullptr;
            return make_expr(Expr{MethodE{base ? base : m.base, m.method, std::move(args)}});
        }
        ExprPtr operator()(const SubscriptE& s) const {
            ExprPtr b = subst_expr(s.base, x, y), i = subst_expr(s.index, x, y);
            if (!b && !i) return nullptr;
            return make_expr(Expr{SubscriptE{b ? b : s.base, i ? i : s.index}});
        }
        ExprPtr operator()(const SliceE& s) const {
            ExprPtr b = subst_expr(s.base, x, y), lo = subst_expr(s.lo, x, y),
                    hi = subst_expr(s.hi, x, y), st = subst_expr(s.step, x, y);
            if (!b && !lo && !hi && !st) return nullptr;
            return make_expr(Expr{SliceE{b ? b : s.base, lo ? lo : s.lo,
                                         hi ? hi : s.hi, st ? st : s.step}});
        }
        ExprPtr operator()(const ListE& l) const {
            std::vector<ExprPtr> items;
            bool changed = false;
            for (const auto& i : l.items) {
                ExprPtr n = subst_expr(i, x, y);
                changed |= n != nullptr;
                items.push_back(n ? n : i);
            }
            if (!changed) return nullptr;
            return make_expr(Expr{ListE{std::move(items)}});
        }
        ExprPtr operator()(const DictE&) const { return nullptr; }
    };
    ExprPtr replaced = std::visit(V{x, y}, e->node);
    return replaced ? replaced : e;
}

void check_substitutable(const Stmt& s, const Ident& x, const Ident& y) {
    switch (s.kind) {
        case StmtKind::Assign:
            if (s.target == x || s.target == y) throw RedefinedInScope(s.target);
            break;
        case StmtKind::For:
            if (s.target == x || s.target == y) throw RedefinedInScope(s.target);
            for (const auto& c : s.body) check_substitutable(c, x, y);
            break;
        case StmtKind::FunDef: {
            // A nested scope that mentions either name cannot be renamed from
            // the outside.
            IdentSet inner = vars_of(s.body);
            for (const auto& p : s.params) inner.insert(p);
            if (inner.count(x) || inner.count(y)) throw RedefinedInScope(s.target);
            break;
        }
        case StmtKind::If:
        case StmtKind::While:
            for (const auto& c : s.body) check_substitutable(c, x, y);
            for (const auto& c : s.orelse) check_substitutable(c, x, y);
            break;
        default:
            break;
    }
}

Stmt subst_stmt(const Stmt& s, const Ident& x, const Ident& y) {
    Stmt out = s;
    switch (s.kind) {
        case StmtKind::Assign:
        case StmtKind::Return:
        case StmtKind::ExprStmt:
            out.value = subst_expr(s.value, x, y);
            break;
        case StmtKind::SubscriptAssign:
            if (out.target == x) out.target = y;
            out.index = subst_expr(s.index, x, y);
            out.value = subst_expr(s.value, x, y);
            break;
        case StmtKind::Pass:
            break;
        case StmtKind::If:
        case StmtKind::While:
            out.value = subst_expr(s.value, x, y);
            out.body = substitute(s.body, x, y);
            out.orelse = substitute(s.orelse, x, y);
            break;
        case StmtKind::For:
            out.value = subst_expr(s.value, x, y);
            out.body = substitute(s.body, x, y);
            break;
        case StmtKind::FunDef:
            // check_substitutable guarantees the names do not occur inside.
            break;
    }
    return out;
}

}  // namespace

ExprPtr substitute(const ExprPtr& e, const Ident& x, const Ident& y) {
    if (x == y) return e;
    return subst_expr(e, x, y);
}

Stmt substitute(const Stmt& s, const Ident& x, const Ident& y) {
    if (x == y) return s;
    check_substitutable(s, x, y);
    return subst_stmt(s, x, y);
}

std::vector<Stmt> substitute(const std::vector<Stmt>& body, const Ident& x, const Ident& y) {
    if (x == y) return body;
    for (const auto& s : body) check_substitutable(s, x, y);
    std::vector<Stmt> out;
    out.reserve(body.size());
    for (const auto& s : body) out.push_back(subst_stmt(s, x, y));
    return out;
}

namespace {

bool pure_expr(const ExprPtr& e) {
    if (!e) return true;
    struct V {
        bool operator()(const ConstE&) const { return true; }
        bool operator()(const VarE&) const { return true; }
        bool operator()(const BinE& b) const { return pure_expr(b.lhs) && pure_expr(b.rhs); }
        bool operator()(const UnE& u) const { return pure_expr(u.operand); }
        bool operator()(const CallE& c) const {
            if (c.callee == "input") return false;
            if (!is_builtin(c.callee)) return false;
            if (c.callee == "print") return false;
            for (const auto& a : c.args)
                if (!pure_expr(a)) return false;
            return true;
        }
        bool operator()(const MethodE& m) const {
            if (is_mutating_method(m.method)) return false;
            if (!pure_expr(m.base)) return false;
            for (const auto& a : m.args)
                if (!pure_expr(a)) return false;
            return true;
        }
        bool operator()(const SubscriptE& s) const {
            return pure_expr(s.base) && pure_expr(s.index);
        }
        bool operator()(const SliceE& s) const {
            return pure_expr(s.base) && pure_expr(s.lo) && pure_expr(s.hi) && pure_expr(s.step);
        }
        bool operator()(const ListE& l) const {
            for (const auto& i : l.items)
                if (!pure_expr(i)) return false;
            return true;
        }
        bool operator()(const DictE&) const { return true; }
    };
    return std::visit(V{}, e->node);
}

}  // namespace

bool is_pure_expr(const ExprPtr& e) { return pure_expr(e); }
bool is_pure_expr(const Expr& e) { return pure_expr(std::make_shared<const Expr>(e)); }

bool is_effect_free_stmt(const Stmt& s) {
    switch (s.kind) {
        case StmtKind::Assign:
            return is_pure_expr(s.value);
        case StmtKind::SubscriptAssign:
            return false;
        case StmtKind::ExprStmt:
            return false;
        case StmtKind::Return:
            return is_pure_expr(s.value);
        case StmtKind::Pass:
            return true;
        case StmtKind::If:
        case StmtKind::While:
            return is_pure_expr(s.value) && is_effect_free_stmts(s.body) &&
                   is_effect_free_stmts(s.orelse);
        case StmtKind::For:
            return is_pure_expr(s.value) && is_effect_free_stmts(s.body);
        case StmtKind::FunDef:
            // Defining is effect-free; calling is not.
            return true;
    }
    return false;
}

bool is_effect_free_stmts(const std::vector<Stmt>& body) {
    for (const auto& s : body)
        if (!is_effect_free_stmt(s)) return false;
    return true;
}

bool contains_input_call(const ExprPtr& e) {
    if (!e) return false;
    struct V {
        bool operator()(const ConstE&) const { return false; }
        bool operator()(const VarE&) const { return false; }
        bool operator()(const BinE& b) const {
            return contains_input_call(b.lhs) || contains_input_call(b.rhs);
        }
        bool operator()(const UnE& u) const { return contains_input_call(u.operand); }
        bool operator()(const CallE& c) const {
            if (c.callee == "input") return true;
            for (const auto& a : c.args)
                if (contains_input_call(a)) return true;
            return false;
        }
        bool operator()(const MethodE& m) const {
            if (contains_input_call(m.base)) return true;
            for (const auto& a : m.args)
                if (contains_input_call(a)) return true;
            return false;
        }
        bool operator()(const SubscriptE& s) const {
            return contains_input_call(s.base) || contains_input_call(s.index);
        }
        bool operator()(const SliceE& s) const {
            return contains_input_call(s.base) || contains_input_call(s.lo) ||
                   contains_input_call(s.hi) || contains_input_call(s.step);
        }
        bool operator()(const ListE& l) const {
            for (const auto& i : l.items)
                if (contains_input_call(i)) return true;
            return false;
        }
        bool operator()(const DictE&) const { return false; }
    };
    return std::visit(V{}, e->node);
}

ExprPtr literal_to_expr(const Literal& v) {
    if (v.type == Literal::Type::Int && v.i < 0)
        return make_expr(Expr{UnE{UnOp::Neg, make_const(Literal::make_int(-v.i))}});
    if (v.type == Literal::Type::Float && std::signbit(v.f))
        return make_expr(Expr{UnE{UnOp::Neg, make_const(Literal::make_float(-v.f))}});
    return make_const(v);
}

}  // namespace pyopt
