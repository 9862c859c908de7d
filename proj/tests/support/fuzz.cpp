#include "fuzz.hpp"

#include <random>

#include "pyopt/syntax.hpp"

namespace pyopt::fuzz {

namespace {

using Rng = std::mt19937_64;

struct Gen {
    Rng rng;
    std::vector<Ident> bound;      // definitely-assigned int variables
    std::vector<Ident> lists;      // definitely-assigned non-empty lists
    int name_counter = 0;
    int loop_depth = 0;

    explicit Gen(uint64_t seed) : rng(seed) {}

    size_t pick(size_t n) { return static_cast<size_t>(rng() % n); }
    long long small_int() { return static_cast<long long>(rng() % 9) - 3; }

    Ident fresh() { return "x" + std::to_string(++name_counter); }

    ExprPtr var_ref() { return make_var(bound[pick(bound.size())]); }

    // Integer expression, divisions guarded to nonzero divisors.
    ExprPtr int_expr(int depth) {
        if (depth <= 0 || pick(3) == 0) {
            if (!bound.empty() && pick(3) != 0) return var_ref();
            return literal_to_expr(Literal::make_int(small_int()));
        }
        switch (pick(6)) {
            case 0: return make_bin(BinOp::Add, int_expr(depth - 1), int_expr(depth - 1));
            case 1: return make_bin(BinOp::Sub, int_expr(depth - 1), int_expr(depth - 1));
            case 2: return make_bin(BinOp::Mul, int_expr(depth - 1), int_expr(depth - 1));
            case 3: {
                // e // (f % 5 + 1): divisor in 1..5
                ExprPtr divisor = make_bin(
                    BinOp::Add,
                    make_bin(BinOp::Mod, int_expr(depth - 1), make_const(Literal::make_int(5))),
                    make_const(Literal::make_int(1)));
                return make_bin(BinOp::FloorDiv, int_expr(depth - 1), divisor);
            }
            case 4: {
                ExprPtr divisor = make_bin(
                    BinOp::Mod,
                    make_bin(BinOp::Mul, int_expr(depth - 1), make_const(Literal::make_int(2))),
                    make_const(Literal::make_int(7)));
                return make_bin(BinOp::Mod, int_expr(depth - 1),
                                make_bin(BinOp::Add,
                                         make_bin(BinOp::Mul, divisor, divisor),
                                         make_const(Literal::make_int(1))));
            }
            default: {
                ExprPtr cond = bool_expr(depth - 1);
                return make_bin(BinOp::Add,
                                make_bin(BinOp::Mul, cond, int_expr(depth - 1)),
                                int_expr(depth - 1));
            }
        }
    }

    ExprPtr bool_expr(int depth) {
        BinOp cmp[] = {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge, BinOp::Eq, BinOp::Ne};
        ExprPtr base = make_bin(cmp[pick(6)], int_expr(depth), int_expr(depth));
        if (depth > 0 && pick(4) == 0)
            return make_bin(pick(2) ? BinOp::And : BinOp::Or, base, bool_expr(depth - 1));
        return base;
    }

    // Keeps loop-body arithmetic bounded.
    ExprPtr clamped(ExprPtr e) {
        return make_bin(BinOp::Mod, e, make_const(Literal::make_int(97)));
    }

    Stmt assign(const Ident& x, ExprPtr e) {
        Stmt s;
        s.kind = StmtKind::Assign;
        s.target = x;
        s.value = std::move(e);
        return s;
    }

    Stmt gen_stmt(int depth) {
        size_t roll = pick(10);
        if (roll < 3 || bound.size() < 2) {
            // plain arithmetic definition (clamped inside loops)
            Ident x = pick(3) == 0 && !bound.empty() ? bound[pick(bound.size())] : fresh();
            ExprPtr e = int_expr(2);
            if (loop_depth > 0) e = clamped(e);
            Stmt s = assign(x, e);
            note_bound(x);
            return s;
        }
        if (roll < 5) {
            // a copy: the raw material of copy propagation
            Ident x = pick(2) == 0 ? fresh() : bound[pick(bound.size())];
            Stmt s = assign(x, var_ref());
            note_bound(x);
            return s;
        }
        if (roll < 6 && !lists.empty()) {
            // list read or aliased write through an index guarded by len
            const Ident& l = lists[pick(lists.size())];
            ExprPtr idx = make_bin(BinOp::Mod, int_expr(1),
                                   make_expr(Expr{CallE{"len", {make_var(l)}}}));
            if (pick(2) == 0) {
                Stmt s;
                s.kind = StmtKind::SubscriptAssign;
                s.target = l;
                s.index = idx;
                s.value = loop_depth > 0 ? clamped(int_expr(1)) : int_expr(1);
                return s;
            }
            Ident x = fresh();
            Stmt s = assign(x, make_expr(Expr{SubscriptE{make_var(l), idx}}));
            note_bound(x);
            return s;
        }
        if (roll < 7) {
            Stmt s;
            s.kind = StmtKind::ExprStmt;
            s.value = make_expr(Expr{CallE{"print", {int_expr(1)}}});
            return s;
        }
        if (roll < 8 && depth > 0) return gen_if(depth);
        if (roll < 9 && depth > 0 && loop_depth < 2) return gen_while(depth);
        if (depth > 0 && loop_depth < 2) return gen_for(depth);
        Stmt s = assign(fresh(), int_expr(1));
        note_bound(s.target);
        return s;
    }

    void note_bound(const Ident& x) {
        for (const auto& b : bound)
            if (b == x) return;
        bound.push_back(x);
    }

    std::vector<Stmt> gen_block(int depth, size_t count) {
        std::vector<Stmt> out;
        for (size_t i = 0; i < count; ++i) out.push_back(gen_stmt(depth));
        return out;
    }

    Stmt gen_if(int depth) {
        Stmt s;
        s.kind = StmtKind::If;
        s.value = bool_expr(1);
        // Definite assignment: only names bound before the branch stay usable.
        auto saved_bound = bound;
        auto saved_lists = lists;
        s.body = gen_block(depth - 1, 1 + pick(2));
        bound = saved_bound;
        lists = saved_lists;
        if (pick(2) == 0) {
            s.orelse = gen_block(depth - 1, 1 + pick(2));
            bound = saved_bound;
            lists = saved_lists;
        }
        return s;
    }

    Stmt gen_while(int depth) {
        Ident counter = fresh();
        Stmt init = assign(counter, make_const(Literal::make_int(0)));
        note_bound(counter);
        Stmt loop;
        loop.kind = StmtKind::While;
        loop.value = make_bin(BinOp::Lt, make_var(counter),
                              make_const(Literal::make_int(2 + static_cast<long long>(pick(5)))));
        ++loop_depth;
        auto saved_bound = bound;
        auto saved_lists = lists;
        loop.body = gen_block(depth - 1, 1 + pick(2));
        bound = saved_bound;
        lists = saved_lists;
        --loop_depth;
        loop.body.push_back(assign(counter, make_bin(BinOp::Add, make_var(counter),
                                                     make_const(Literal::make_int(1)))));
        Stmt wrapper;
        wrapper.kind = StmtKind::If;
        wrapper.value = make_const(Literal::make_bool(true));
        wrapper.body.push_back(init);
        wrapper.body.push_back(loop);
        return wrapper;
    }

    Stmt gen_for(int depth) {
        Stmt s;
        s.kind = StmtKind::For;
        s.target = fresh();
        s.value = make_expr(
            Expr{CallE{"range", {make_const(Literal::make_int(1 + static_cast<long long>(pick(5))))}}});
        ++loop_depth;
        auto saved_bound = bound;
        auto saved_lists = lists;
        note_bound(s.target);
        s.body = gen_block(depth - 1, 1 + pick(2));
        bound = saved_bound;
        lists = saved_lists;
        --loop_depth;
        return s;
    }

    Program generate() {
        Program p;
        Stmt def;
        def.kind = StmtKind::FunDef;
        def.target = "f";
        def.params = {"a", "b", "c"};
        bound = {"a", "b", "c"};

        // Seed a non-empty list so indexed statements are always guarded.
        if (pick(2) == 0) {
            Stmt mk;
            mk.kind = StmtKind::Assign;
            mk.target = "data";
            std::vector<ExprPtr> items;
            size_t n = 1 + pick(3);
            for (size_t i = 0; i < n; ++i)
                items.push_back(literal_to_expr(Literal::make_int(small_int())));
            mk.value = make_expr(Expr{ListE{std::move(items)}});
            def.body.push_back(mk);
            lists.push_back("data");
        }

        size_t count = 4 + pick(6);
        for (size_t i = 0; i < count; ++i) def.body.push_back(gen_stmt(2));

        // Return a mix of everything still bound so differences surface.
        ExprPtr acc = make_const(Literal::make_int(0));
        long long w = 1;
        for (const auto& x : bound) {
            acc = make_bin(BinOp::Add, acc,
                           make_bin(BinOp::Mul, make_const(Literal::make_int(w)), make_var(x)));
            w = w * 3 % 101 + 1;
        }
        if (!lists.empty())
            acc = make_bin(BinOp::Add, acc,
                           make_expr(Expr{CallE{"len", {make_var(lists[0])}}}));
        Stmt ret;
        ret.kind = StmtKind::Return;
        ret.value = acc;
        def.body.push_back(ret);
        if (!lists.empty()) {
            Stmt show;
            show.kind = StmtKind::ExprStmt;
            show.value = make_expr(Expr{CallE{"print", {make_var(lists[0])}}});
            def.body.insert(def.body.end() - 1, show);
        }
        p.body.push_back(def);
        p.renumber();
        return p;
    }
};

}  // namespace

FuzzProgram generate(uint64_t seed) {
    Gen gen(seed);
    FuzzProgram out;
    out.program = gen.generate();
    out.manifest.entry = "f";
    out.manifest.fuel = 200'000;
    for (long long a : {0, 1, 3, 5})
        for (long long b : {0, 2, 4})
            for (long long c : {1, 3}) {
                TestCase tc;
                tc.args = {Value::of(a), Value::of(b), Value::of(c)};
                out.manifest.cases.push_back(tc);
            }
    return out;
}

}  // namespace pyopt::fuzz
