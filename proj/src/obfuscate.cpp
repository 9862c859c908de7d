#include <algorithm>
#include <random>

#include "pyopt/perturb.hpp"
#include "pyopt/syntax.hpp"

namespace pyopt {

namespace {

// Identifiers in first-occurrence order over a statement list, one scope deep
// (function bodies are separate scopes).
void occurrence_order_expr(const ExprPtr& e, std::vector<Ident>& out, IdentSet& seen);

void add_name(const Ident& name, std::vector<Ident>& out, IdentSet& seen) {
    if (seen.insert(name).second) out.push_back(name);
}

void occurrence_order_expr(const ExprPtr& e, std::vector<Ident>& out, IdentSet& seen) {
    if (!e) return;
    if (const auto* v = e->as<VarE>()) { add_name(v->name, out, seen); return; }
    if (const auto* b = e->as<BinE>()) {
        occurrence_order_expr(b->lhs, out, seen);
        occurrence_order_expr(b->rhs, out, seen);
    } else if (const auto* u = e->as<UnE>()) {
        occurrence_order_expr(u->operand, out, seen);
    } else if (const auto* c = e->as<CallE>()) {
        for (const auto& a : c->args) occurrence_order_expr(a, out, seen);
    } else if (const auto* m = e->as<MethodE>()) {
        occurrence_order_expr(m->base, out, seen);
        for (const auto& a : m->args) occurrence_order_expr(a, out, seen);
    } else if (const auto* s = e->as<SubscriptE>()) {
        occurrence_order_expr(s->base, out, seen);
        occurrence_order_expr(s->index, out, seen);
    } else if (const auto* s = e->as<SliceE>()) {
        occurrence_order_expr(s->base, out, seen);
        occurrence_order_expr(s->lo, out, seen);
        occurrence_order_expr(s->hi, out, seen);
        occurrence_order_expr(s->step, out, seen);
    } else if (const auto* l = e->as<ListE>()) {
        for (const auto& i : l->items) occurrence_order_expr(i, out, seen);
    }
}

void occurrence_order_stmts(const std::vector<Stmt>& body, std::vector<Ident>& out,
                            IdentSet& seen) {
    for (const auto& s : body) {
        switch (s.kind) {
            case StmtKind::Assign:
                add_name(s.target, out, seen);
                occurrence_order_expr(s.value, out, seen);
                break;
            case StmtKind::SubscriptAssign:
                add_name(s.target, out, seen);
                occurrence_order_expr(s.index, out, seen);
                occurrence_order_expr(s.value, out, seen);
                break;
            case StmtKind::ExprStmt:
            case StmtKind::Return:
                occurrence_order_expr(s.value, out, seen);
                break;
            case StmtKind::Pass:
                break;
            case StmtKind::If:
            case StmtKind::While:
                occurrence_order_expr(s.value, out, seen);
                occurrence_order_stmts(s.body, out, seen);
                occurrence_order_stmts(s.orelse, out, seen);
                break;
            case StmtKind::For:
                add_name(s.target, out, seen);
                occurrence_order_expr(s.value, out, seen);
                occurrence_order_stmts(s.body, out, seen);
                break;
            case StmtKind::FunDef:
                break;  // separate scope
        }
    }
}

std::vector<Ident> label_pool(uint64_t seed, size_t needed) {
    std::vector<Ident> letters;
    for (char c = 'a'; c <= 'z'; ++c) letters.emplace_back(1, c);
    std::mt19937_64 rng(seed);
    for (size_t i = letters.size(); i > 1; --i) std::swap(letters[i - 1], letters[rng() % i]);
    for (int k = 1; letters.size() < needed; ++k) letters.push_back("v" + std::to_string(k));
    return letters;
}

ExprPtr rename_expr(const ExprPtr& e, const std::map<Ident, Ident>& vars,
                    const std::map<Ident, Ident>& funcs);

std::vector<ExprPtr> rename_args(const std::vector<ExprPtr>& args,
                                 const std::map<Ident, Ident>& vars,
                                 const std::map<Ident, Ident>& funcs) {
    std::vector<ExprPtr> out;
    out.reserve(args.size());
    for (const auto& a : args) out.push_back(rename_expr(a, vars, funcs));
    return out;
}

Ident rename_var(const Ident& name, const std::map<Ident, Ident>& vars) {
    auto it = vars.find(name);
    return it == vars.end() ? name : it->second;
}

ExprPtr rename_expr(const ExprPtr& e, const std::map<Ident, Ident>& vars,
                    const std::map<Ident, Ident>& funcs) {
    if (!e) return e;
    struct V {
        const std::map<Ident, Ident>& vars;
        const std::map<Ident, Ident>& funcs;
        ExprPtr operator()(const ConstE& c) const { return make_const(c.value); }
        ExprPtr operator()(const VarE& v) const { return make_var(rename_var(v.name, vars)); }
        ExprPtr operator()(const BinE& b) const {
            return make_bin(b.op, rename_expr(b.lhs, vars, funcs), rename_expr(b.rhs, vars, funcs));
        }
        ExprPtr operator()(const UnE& u) const {
            return make_expr(Expr{UnE{u.op, rename_expr(u.operand, vars, funcs)}});
        }
        ExprPtr operator()(const CallE& c) const {
            Ident callee = c.callee;
            auto it = funcs.find(callee);
            if (it != funcs.end()) callee = it->second;
            return make_expr(Expr{CallE{callee, rename_args(c.args, vars, funcs)}});
        }
        ExprPtr operator()(const MethodE& m) const {
            return make_expr(Expr{MethodE{rename_expr(m.base, vars, funcs), m.method,
                                          rename_args(m.args, vars, funcs)}});
        }
        ExprPtr operator()(const SubscriptE& s) const {
            return make_expr(Expr{SubscriptE{rename_expr(s.base, vars, funcs),
                                             rename_expr(s.index, vars, funcs)}});
        }
        ExprPtr operator()(const SliceE& s) const {
            return make_expr(Expr{SliceE{
                rename_expr(s.base, vars, funcs), rename_expr(s.lo, vars, funcs),
                rename_expr(s.hi, vars, funcs), rename_expr(s.step, vars, funcs)}});
        }
        ExprPtr operator()(const ListE& l) const {
            ListE out;
            out.items = rename_args(l.items, vars, funcs);
            return make_expr(Expr{out});
        }
        ExprPtr operator()(const DictE&) const { return make_expr(Expr{DictE{}}); }
    };
    return std::visit(V{vars, funcs}, e->node);
}

struct Renamer {
    const std::map<Ident, Ident>& funcs;
    const std::map<std::string, std::map<Ident, Ident>>& scopes;

    const std::map<Ident, Ident>& scope_for(const Ident& name) const {
        static const std::map<Ident, Ident> empty;
        auto it = scopes.find(name);
        return it == scopes.end() ? empty : it->second;
    }

    std::vector<Stmt> rename_body(const std::vector<Stmt>& body,
                                  const std::map<Ident, Ident>& vars) const {
        std::vector<Stmt> out;
        out.reserve(body.size());
        for (const auto& s : body) out.push_back(rename_stmt(s, vars));
        return out;
    }

    Stmt rename_stmt(const Stmt& s, const std::map<Ident, Ident>& vars) const {
        Stmt out = s;
        switch (s.kind) {
            case StmtKind::Assign:
            case StmtKind::SubscriptAssign:
                out.target = rename_var(s.target, vars);
                out.index = rename_expr(s.index, vars, funcs);
                out.value = rename_expr(s.value, vars, funcs);
                break;
            case StmtKind::ExprStmt:
            case StmtKind::Return:
                out.value = rename_expr(s.value, vars, funcs);
                break;
            case StmtKind::Pass:
                break;
            case StmtKind::If:
            case StmtKind::While:
                out.value = rename_expr(s.value, vars, funcs);
                out.body = rename_body(s.body, vars);
                out.orelse = rename_body(s.orelse, vars);
                break;
            case StmtKind::For:
                out.target = rename_var(s.target, vars);
                out.value = rename_expr(s.value, vars, funcs);
                out.body = rename_body(s.body, vars);
                break;
            case StmtKind::FunDef: {
                const std::map<Ident, Ident>& local = scope_for(s.target);
                auto fit = funcs.find(s.target);
                if (fit != funcs.end()) out.target = fit->second;
                out.params.clear();
                for (const auto& prm : s.params) out.params.push_back(rename_var(prm, local));
                out.body = rename_body(s.body, local);
                break;
            }
        }
        return out;
    }
};

}  // namespace

Program rename_identifiers(const Program& p, const std::map<Ident, Ident>& functions,
                           const std::map<std::string, std::map<Ident, Ident>>& scopes) {
    Renamer renamer{functions, scopes};
    Program out;
    static const std::map<Ident, Ident> empty;
    auto it = scopes.find("");
    out.body = renamer.rename_body(p.body, it == scopes.end() ? empty : it->second);
    out.renumber();
    return out;
}

Obfuscation obfuscate_with_map(const Program& p, uint64_t seed) {
    Obfuscation result;
    int fn = 0;
    for_each_stmt(p.body, [&](const Stmt& s, int) {
        if (s.kind == StmtKind::FunDef && !result.functions.count(s.target))
            result.functions[s.target] = "f" + std::to_string(++fn);
    });

    int scope_counter = 0;
    auto assign_labels = [&](const std::vector<Ident>& order) {
        std::vector<Ident> pool =
            label_pool(seed + static_cast<uint64_t>(scope_counter++), order.size());
        std::map<Ident, Ident> out;
        for (size_t i = 0; i < order.size(); ++i) out[order[i]] = pool[i];
        return out;
    };

    std::vector<Ident> script_order;
    IdentSet seen;
    occurrence_order_stmts(p.body, script_order, seen);
    result.names[""] = assign_labels(script_order);
    for_each_stmt(p.body, [&](const Stmt& s, int) {
        if (s.kind != StmtKind::FunDef) return;
        std::vector<Ident> order;
        IdentSet inner_seen;
        for (const auto& prm : s.params) add_name(prm, order, inner_seen);
        occurrence_order_stmts(s.body, order, inner_seen);
        result.names[s.target] = assign_labels(order);
    });

    result.program = rename_identifiers(p, result.functions, result.names);
    return result;
}

Program obfuscate(const Program& p, uint64_t seed) {
    return obfuscate_with_map(p, seed).program;
}

}  // namespace pyopt
