#include "pyopt/bugs.hpp"

#include <random>

#include "expr_paths.hpp"
#include "pyopt/errors.hpp"
#include "pyopt/printer.hpp"
#include "pyopt/syntax.hpp"

namespace pyopt {

namespace {

struct Mutation {
    std::string kind;
    int stmt_id;
    int position;  // 0 = value, 1 = index
    std::vector<int> path;
    ExprPtr replacement;
    std::string before, after;
};

ExprPtr plus_one(const ExprPtr& e, long long delta) {
    if (delta >= 0) return make_bin(BinOp::Add, e, make_const(Literal::make_int(delta)));
    return make_bin(BinOp::Sub, e, make_const(Literal::make_int(-delta)));
}

BinOp flipped(BinOp op) {
    switch (op) {
        case BinOp::Lt: return BinOp::Le;
        case BinOp::Le: return BinOp::Lt;
        case BinOp::Gt: return BinOp::Ge;
        case BinOp::Ge: return BinOp::Gt;
        case BinOp::Eq: return BinOp::Ne;
        case BinOp::Ne: return BinOp::Eq;
        default: return op;
    }
}

bool is_comparison(BinOp op) {
    switch (op) {
        case BinOp::Lt: case BinOp::Le: case BinOp::Gt:
        case BinOp::Ge: case BinOp::Eq: case BinOp::Ne:
            return true;
        default:
            return false;
    }
}

bool is_noncommutative(BinOp op) {
    switch (op) {
        case BinOp::Sub: case BinOp::FloorDiv: case BinOp::TrueDiv:
        case BinOp::Mod: case BinOp::Pow:
            return true;
        default:
            return false;
    }
}

void collect_expr_mutations(const Stmt& s, int position, const ExprPtr& root,
                            const IdentSet& scope_vars, uint64_t salt,
                            std::vector<Mutation>& out) {
    if (!root) return;
    walk_expr(root, [&](const ExprPtr& e, const std::vector<int>& path) {
        if (const auto* b = e->as<BinE>()) {
            if (is_comparison(b->op)) {
                ExprPtr repl = make_bin(flipped(b->op), b->lhs, b->rhs);
                out.push_back({"comparison-flip", s.id, position, path, repl,
                               print_expr(e), print_expr(repl)});
            }
            if (is_noncommutative(b->op)) {
                ExprPtr repl = make_bin(b->op, b->rhs, b->lhs);
                out.push_back({"swapped-operands", s.id, position, path, repl,
                               print_expr(e), print_expr(repl)});
            }
        } else if (const auto* c = e->as<CallE>()) {
            if (c->callee == "range" && !c->args.empty()) {
                size_t last = c->args.size() - 1;
                long long delta = (salt + path.size()) % 2 == 0 ? 1 : -1;
                CallE n = *c;
                n.args[last] = plus_one(c->args[last], delta);
                ExprPtr repl = make_expr(Expr{n});
                out.push_back({"off-by-one-bound", s.id, position, path, repl,
                               print_expr(e), print_expr(repl)});
            }
        } else if (const auto* sub = e->as<SubscriptE>()) {
            long long delta = (salt + path.size()) % 2 == 0 ? 1 : -1;
            ExprPtr repl = make_expr(Expr{SubscriptE{sub->base, plus_one(sub->index, delta)}});
            out.push_back({"index-shift", s.id, position, path, repl,
                           print_expr(e), print_expr(repl)});
        } else if (const auto* v = e->as<VarE>()) {
            for (const auto& other : scope_vars) {
                if (other == v->name) continue;
                ExprPtr repl = make_var(other);
                out.push_back({"wrong-variable", s.id, position, path, repl,
                               v->name, other});
                break;  // one alternative per occurrence keeps the pool compact
            }
        } else if (const auto* k = e->as<ConstE>()) {
            if (k->value.type == Literal::Type::Int) {
                long long delta = (salt + path.size()) % 2 == 0 ? 1 : -1;
                ExprPtr repl = make_const(Literal::make_int(k->value.i + delta));
                out.push_back({"constant-tweak", s.id, position, path, repl,
                               print_expr(e), print_expr(repl)});
            }
        }
    });
}

std::vector<Mutation> collect_mutations(const Program& p, uint64_t seed) {
    std::vector<Mutation> out;
    // Scope variables for wrong-variable picks: per function, or script-level.
    std::function<void(const std::vector<Stmt>&, const IdentSet&)> walk =
        [&](const std::vector<Stmt>& body, const IdentSet& scope) {
            for (const auto& s : body) {
                if (s.kind == StmtKind::FunDef) {
                    IdentSet inner = vars_of(s.body);
                    for (const auto& prm : s.params) inner.insert(prm);
                    walk(s.body, inner);
                    continue;
                }
                switch (s.kind) {
                    case StmtKind::Assign:
                    case StmtKind::ExprStmt:
                    case StmtKind::Return:
                    case StmtKind::If:
                    case StmtKind::While:
                    case StmtKind::For:
                        collect_expr_mutations(s, 0, s.value, scope, seed, out);
                        break;
                    case StmtKind::SubscriptAssign:
                        collect_expr_mutations(s, 0, s.value, scope, seed, out);
                        collect_expr_mutations(s, 1, s.index, scope, seed, out);
                        break;
                    default:
                        break;
                }
                walk(s.body, scope);
                walk(s.orelse, scope);
            }
        };
    IdentSet script_scope;
    for (const auto& s : p.body)
        if (s.kind != StmtKind::FunDef)
            for (const auto& v : vars_of(s)) script_scope.insert(v);
    walk(p.body, script_scope);
    return out;
}

std::optional<Program> apply_mutation(const Program& p, const Mutation& m) {
    Program next = p;
    Stmt* target = nullptr;
    std::function<Stmt*(std::vector<Stmt>&)> find = [&](std::vector<Stmt>& body) -> Stmt* {
        for (auto& s : body) {
            if (s.id == m.stmt_id) return &s;
            if (Stmt* r = find(s.body)) return r;
            if (Stmt* r = find(s.orelse)) return r;
        }
        return nullptr;
    };
    target = find(next.body);
    if (!target) return std::nullopt;
    ExprPtr root = m.position == 1 ? target->index : target->value;
    ExprPtr replaced = replace_at(root, m.path, m.replacement);
    if (!replaced) return std::nullopt;
    if (m.position == 1)
        target->index = replaced;
    else
        target->value = replaced;
    next.renumber();
    return next;
}

}  // namespace

std::pair<Program, BugDescriptor> inject_bug(const Program& p, uint64_t seed,
                                             const TestManifest& m) {
    Program base = p;
    base.renumber();
    std::vector<Mutation> pool = collect_mutations(base, seed);
    if (pool.empty()) throw NoKillableMutant("no mutation sites in program");
    std::mt19937_64 rng(seed);
    for (size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng() % i]);

    size_t attempts = std::min<size_t>(pool.size(), 50);
    for (size_t i = 0; i < attempts; ++i) {
        const Mutation& mut = pool[i];
        auto mutant = apply_mutation(base, mut);
        if (!mutant) continue;
        if (program_equal(*mutant, base)) continue;
        Verdict v = equivalent(base, *mutant, m);
        if (v.equivalent == Equivalence::No) {
            BugDescriptor d;
            d.kind = mut.kind;
            d.stmt_id = mut.stmt_id;
            d.before = mut.before;
            d.after = mut.after;
            d.witness_index = *v.witness;
            return {*mutant, d};
        }
    }
    throw NoKillableMutant("no killable mutant after " + std::to_string(attempts) +
                           " attempts; manifest may be too weak");
}

}  // namespace pyopt
