#include "pyopt/perturb.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>

#include "expr_paths.hpp"
#include "pyopt/cf_analysis.hpp"
#include "pyopt/errors.hpp"
#include "pyopt/parse.hpp"
#include "pyopt/printer.hpp"
#include "pyopt/syntax.hpp"

namespace pyopt {

namespace {

using Rng = std::mt19937_64;

size_t pick(Rng& rng, size_t n) { return static_cast<size_t>(rng() % n); }

Ident fresh_temp(const Program& p, int& counter) {
    IdentSet used = vars_of(p);
    while (true) {
        Ident name = "t" + std::to_string(++counter);
        if (!used.count(name)) return name;
    }
}

struct BlockSite {
    std::vector<Stmt>* block;
    size_t index;
};

void collect_blocks(std::vector<Stmt>& body, std::vector<std::vector<Stmt>*>& out) {
    out.push_back(&body);
    for (auto& s : body) {
        if (!s.body.empty()) collect_blocks(s.body, out);
        if (!s.orelse.empty()) collect_blocks(s.orelse, out);
    }
}

// Variables definitely bound before `index` in `block` (straight-line within
// the block plus parameters when the block is a function body).
IdentSet bound_before(const Program& p, const std::vector<Stmt>& block, size_t index) {
    IdentSet bound;
    std::function<const Stmt*(const std::vector<Stmt>&)> owner_of =
        [&](const std::vector<Stmt>& body) -> const Stmt* {
        for (const auto& s : body) {
            if (&s.body == &block || &s.orelse == &block) return &s;
            if (const Stmt* r = owner_of(s.body)) return r;
            if (const Stmt* r = owner_of(s.orelse)) return r;
        }
        return nullptr;
    };
    if (const Stmt* owner = owner_of(p.body)) {
        if (owner->kind == StmtKind::FunDef)
            for (const auto& prm : owner->params) bound.insert(prm);
        if (owner->kind == StmtKind::For) bound.insert(owner->target);
    }
    for (size_t k = 0; k < index && k < block.size(); ++k)
        for (const auto& a : assigned_vars(block[k])) bound.insert(a);
    return bound;
}

// ---- inverse copy propagation -----------------------------------------

// Routes later pure reads of v through a fresh temporary: inserts "t = v" and
// substitutes v -> t in following statements until v (or anything that makes
// the substitution unsafe) intervenes.
bool step_route(Program& p, Rng& rng, int& temp_counter, std::string* note) {
    std::vector<std::vector<Stmt>*> blocks;
    collect_blocks(p.body, blocks);
    struct Cand {
        std::vector<Stmt>* block;
        size_t at;
        Ident var;
        size_t reach;  // how many following statements can be rewritten
    };
    std::vector<Cand> cands;
    for (auto* block : blocks) {
        for (size_t i = 0; i < block->size(); ++i) {
            for (const auto& v : bound_before(p, *block, i)) {
                size_t reach = 0;
                bool any_use = false;
                for (size_t j = i; j < block->size(); ++j) {
                    const Stmt& s = (*block)[j];
                    if (assigned_vars(s).count(v)) break;
                    bool uses = vars_of(s).count(v) > 0;
                    if (uses) {
                        // A compound statement is rewritten wholesale; the
                        // substitution must be legal inside it.
                        try {
                            substitute(s, v, "__route_probe__");
                        } catch (const RedefinedInScope&) {
                            break;
                        }
                    }
                    any_use |= uses;
                    reach = j - i + 1;
                }
                if (any_use && reach > 0) cands.push_back({block, i, v, reach});
            }
        }
    }
    if (cands.empty()) return false;
    const Cand& c = cands[pick(rng, cands.size())];
    Ident t = fresh_temp(p, temp_counter);
    std::vector<Stmt> rewritten;
    for (size_t j = c.at; j < c.at + c.reach; ++j) {
        Stmt s = (*c.block)[j];
        if (vars_of(s).count(c.var)) s = substitute(s, c.var, t);
        rewritten.push_back(std::move(s));
    }
    for (size_t j = 0; j < rewritten.size(); ++j) (*c.block)[c.at + j] = rewritten[j];
    Stmt copy;
    copy.kind = StmtKind::Assign;
    copy.target = t;
    copy.value = make_var(c.var);
    c.block->insert(c.block->begin() + static_cast<long>(c.at), copy);
    if (note) *note = "route " + c.var + " through " + t;
    p.renumber();
    return true;
}

// Splits "x = e" into "t = e; x = t".
bool step_split(Program& p, Rng& rng, int& temp_counter, std::string* note) {
    std::vector<std::vector<Stmt>*> blocks;
    collect_blocks(p.body, blocks);
    std::vector<BlockSite> cands;
    for (auto* block : blocks)
        for (size_t i = 0; i < block->size(); ++i) {
            const Stmt& s = (*block)[i];
            if (s.kind != StmtKind::Assign) continue;
            if (s.value->as<VarE>()) continue;  // already a copy
            cands.push_back({block, i});
        }
    if (cands.empty()) return false;
    BlockSite site = cands[pick(rng, cands.size())];
    Ident t = fresh_temp(p, temp_counter);
    Stmt& orig = (*site.block)[site.index];
    Stmt head;
    head.kind = StmtKind::Assign;
    head.target = t;
    head.value = orig.value;
    Ident x = orig.target;
    orig.value = make_var(t);
    site.block->insert(site.block->begin() + static_cast<long>(site.index), head);
    if (note) *note = "split " + x + " = ... through " + t;
    p.renumber();
    return true;
}

// Pushes a copy of a guard variable into a loop: "t = y" before the loop,
// y -> t in the guard, "t = y" at the body end.
bool step_loop_copy(Program& p, Rng& rng, int& temp_counter, std::string* note) {
    std::vector<std::vector<Stmt>*> blocks;
    collect_blocks(p.body, blocks);
    struct Cand {
        std::vector<Stmt>* block;
        size_t index;
        Ident var;
    };
    std::vector<Cand> cands;
    for (auto* block : blocks)
        for (size_t i = 0; i < block->size(); ++i) {
            Stmt& s = (*block)[i];
            if (s.kind != StmtKind::While && s.kind != StmtKind::For) continue;
            for (const auto& v : vars_of(*s.value)) {
                if (s.kind == StmtKind::For && v == s.target) continue;
                cands.push_back({block, i, v});
            }
        }
    if (cands.empty()) return false;
    const Cand& c = cands[pick(rng, cands.size())];
    Ident t = fresh_temp(p, temp_counter);
    Stmt& loop = (*c.block)[c.index];
    loop.value = substitute(loop.value, c.var, t);
    Stmt tail;
    tail.kind = StmtKind::Assign;
    tail.target = t;
    tail.value = make_var(c.var);
    loop.body.push_back(tail);
    Stmt head = tail;
    c.block->insert(c.block->begin() + static_cast<long>(c.index), head);
    if (note) *note = "loop-copy " + c.var + " as " + t;
    p.renumber();
    return true;
}

// ---- inverse constant folding ------------------------------------------

struct LiteralSite {
    int stmt_id;
    int position;  // 0 = value, 1 = index
    std::vector<int> path;
    long long k;
};

const AbstractMemory* memory_for(const Stmt& s, const CfAnnotationMap& ann, int position) {
    auto it = ann.entries.find(s.id);
    if (it == ann.entries.end()) return nullptr;
    if (s.kind == StmtKind::While && position == 0) return &it->second.post;
    return &it->second.pre;
}

std::vector<LiteralSite> literal_sites(const Program& p, const CfAnnotationMap&) {
    std::vector<LiteralSite> out;
    for_each_stmt(p.body, [&](const Stmt& s, int) {
        auto scan = [&](const ExprPtr& root, int position) {
            if (!root) return;
            walk_expr(root, [&](const ExprPtr& e, const std::vector<int>& path) {
                const auto* c = e->as<ConstE>();
                if (!c || c->value.type != Literal::Type::Int) return;
                if (std::llabs(c->value.i) > 1000) return;
                out.push_back({s.id, position, path, c->value.i});
            });
        };
        switch (s.kind) {
            case StmtKind::Assign:
            case StmtKind::Return:
            case StmtKind::ExprStmt:
            case StmtKind::If:
            case StmtKind::While:
            case StmtKind::For:
                scan(s.value, 0);
                break;
            case StmtKind::SubscriptAssign:
                scan(s.value, 0);
                scan(s.index, 1);
                break;
            default:
                break;
        }
    });
    return out;
}

ExprPtr position_expr(const Stmt& s, int position) { return position == 1 ? s.index : s.value; }

void set_position(Stmt& s, int position, const ExprPtr& e) {
    if (position == 1)
        s.index = e;
    else
        s.value = e;
}

// k rendered as a*t + b over a constant-valued variable t.
ExprPtr unfold_over(const Ident& t, long long v, long long k, Rng& rng) {
    long long a = 1 + static_cast<long long>(rng() % 3);  // 1..3
    long long b = k - a * v;
    ExprPtr expr = a == 1 ? make_var(t)
                          : make_bin(BinOp::Mul, make_const(Literal::make_int(a)), make_var(t));
    if (b > 0) expr = make_bin(BinOp::Add, expr, make_const(Literal::make_int(b)));
    if (b < 0) expr = make_bin(BinOp::Sub, expr, make_const(Literal::make_int(-b)));
    return expr;
}

// Replaces an integer literal by an equivalent expression over a
// constant-valued variable, introducing a fresh definition when none exists.
bool step_unfold(Program& p, Rng& rng, int& temp_counter, std::string* note) {
    CfAnnotationMap ann = infer_cf(p);
    std::vector<LiteralSite> sites = literal_sites(p, ann);
    if (sites.empty()) return false;
    for (size_t attempt = 0; attempt < 8 && !sites.empty(); ++attempt) {
        size_t idx = pick(rng, sites.size());
        LiteralSite site = sites[idx];
        sites.erase(sites.begin() + static_cast<long>(idx));
        Program scratch = p;
        Stmt* s = nullptr;
        std::vector<Stmt>* block = nullptr;
        size_t index = 0;
        std::vector<std::vector<Stmt>*> blocks;
        collect_blocks(scratch.body, blocks);
        for (auto* b : blocks)
            for (size_t i = 0; i < b->size(); ++i)
                if ((*b)[i].id == site.stmt_id) {
                    s = &(*b)[i];
                    block = b;
                    index = i;
                }
        if (!s) continue;
        const AbstractMemory* mem = memory_for(*s, ann, site.position);
        if (!mem) continue;

        // Prefer an existing constant int variable; otherwise define one.
        std::vector<std::pair<Ident, long long>> consts;
        for (const auto& [x, v] : mem->bindings)
            if (v.is_const() && v.value.type == Literal::Type::Int && std::llabs(v.value.i) <= 1000)
                consts.emplace_back(x, v.value.i);
        Ident t;
        long long tv = 0;
        bool need_def = consts.empty();
        if (need_def) {
            // Inserting before a loop header is fine; inserting "inside" the
            // guard position of a while that re-evaluates is fine too since
            // the definition is constant.
            t = fresh_temp(scratch, temp_counter);
            tv = 1 + static_cast<long long>(rng() % 5);
        } else {
            auto& chosen = consts[pick(rng, consts.size())];
            t = chosen.first;
            tv = chosen.second;
        }
        ExprPtr unfolded = unfold_over(t, tv, site.k, rng);
        ExprPtr root = position_expr(*s, site.position);
        ExprPtr replaced = replace_at(root, site.path, unfolded);
        if (!replaced) continue;
        set_position(*s, site.position, replaced);
        if (need_def) {
            Stmt def;
            def.kind = StmtKind::Assign;
            def.target = t;
            def.value = make_const(Literal::make_int(tv));
            block->insert(block->begin() + static_cast<long>(index), def);
        }
        scratch.renumber();
        p = std::move(scratch);
        if (note)
            *note = "unfold " + std::to_string(site.k) + " over " + t + "=" + std::to_string(tv);
        return true;
    }
    return false;
}

// Moves a pure assignment earlier past transparent statements.
bool step_hoist(Program& p, Rng& rng, int&, std::string* note) {
    std::vector<std::vector<Stmt>*> blocks;
    collect_blocks(p.body, blocks);
    struct Cand {
        std::vector<Stmt>* block;
        size_t from, to;
    };
    std::vector<Cand> cands;
    for (auto* block : blocks) {
        for (size_t j = 1; j < block->size(); ++j) {
            const Stmt& s = (*block)[j];
            if (s.kind != StmtKind::Assign || !is_pure_expr(s.value)) continue;
            IdentSet evars = vars_of(*s.value);
            size_t to = j;
            for (size_t i = j; i-- > 0;) {
                const Stmt& earlier = (*block)[i];
                if (!is_effect_free_stmt(earlier)) break;
                if (vars_of(earlier).count(s.target)) break;
                IdentSet written = written_vars(earlier);
                bool clash = false;
                for (const auto& w : written)
                    if (evars.count(w) || w == s.target) { clash = true; break; }
                if (clash) break;
                to = i;
            }
            if (to < j) cands.push_back({block, j, to});
        }
    }
    if (cands.empty()) return false;
    const Cand& c = cands[pick(rng, cands.size())];
    Stmt moved = (*c.block)[c.from];
    c.block->erase(c.block->begin() + static_cast<long>(c.from));
    c.block->insert(c.block->begin() + static_cast<long>(c.to), moved);
    if (note) *note = "hoist " + stmt_header(moved);
    p.renumber();
    return true;
}

// Wraps a statement run in a provably-taken branch.
bool step_wrap(Program& p, Rng& rng, int&, std::string* note) {
    std::vector<std::vector<Stmt>*> blocks;
    collect_blocks(p.body, blocks);
    std::vector<BlockSite> cands;
    for (auto* block : blocks)
        for (size_t i = 0; i < block->size(); ++i) {
            if ((*block)[i].kind == StmtKind::FunDef) continue;
            cands.push_back({block, i});
        }
    if (cands.empty()) return false;
    BlockSite site = cands[pick(rng, cands.size())];
    size_t span = 1;
    if (site.index + 1 < site.block->size() &&
        (*site.block)[site.index + 1].kind != StmtKind::FunDef && rng() % 2 == 0)
        span = 2;
    static const char* guards[] = {"True", "1 < 2", "0 == 0", "2 > 1"};
    ExprPtr guard = parse_expression(guards[rng() % 4]);
    Stmt wrapper;
    wrapper.kind = StmtKind::If;
    wrapper.value = guard;
    wrapper.body.assign(site.block->begin() + static_cast<long>(site.index),
                        site.block->begin() + static_cast<long>(site.index + span));
    site.block->erase(site.block->begin() + static_cast<long>(site.index),
                      site.block->begin() + static_cast<long>(site.index + span));
    site.block->insert(site.block->begin() + static_cast<long>(site.index), wrapper);
    if (note) *note = "wrap " + std::to_string(span) + " stmt(s) in a taken branch";
    p.renumber();
    return true;
}

using StepFn = bool (*)(Program&, Rng&, int&, std::string*);

Program run_steps(const Program& p, uint64_t seed, const std::vector<StepFn>& steps,
                  const char* what, std::vector<std::string>* trace) {
    Program cur = p;
    cur.renumber();
    Rng rng(seed);
    int temp_counter = 0;
    size_t target = 2 + pick(rng, 5);  // 2..6
    size_t applied = 0;
    for (size_t i = 0; i < target * 4 && applied < target; ++i) {
        StepFn fn = steps[pick(rng, steps.size())];
        std::string note;
        if (fn(cur, rng, temp_counter, &note)) {
            ++applied;
            if (trace) trace->push_back(note);
        }
    }
    if (applied == 0) throw NoOpportunity(std::string(what) + ": no legal inverse-rewrite site");
    return cur;
}

}  // namespace

Program perturb_cp(const Program& p, uint64_t seed) {
    return run_steps(p, seed, {step_route, step_split, step_loop_copy}, "perturb_cp", nullptr);
}

Program perturb_cf(const Program& p, uint64_t seed) {
    return run_steps(p, seed, {step_unfold, step_unfold, step_hoist, step_wrap}, "perturb_cf",
                     nullptr);
}

Program perturb_both(const Program& p, uint64_t seed) {
    Program mid;
    bool cf_ok = true;
    try {
        mid = perturb_cf(p, seed ^ 0x9e3779b97f4a7c15ULL);
    } catch (const NoOpportunity&) {
        mid = p;
        cf_ok = false;
    }
    try {
        return perturb_cp(mid, seed);
    } catch (const NoOpportunity&) {
        if (!cf_ok) throw;
        return mid;
    }
}

}  // namespace pyopt
