#include "pyopt/rewrite.hpp"

#include <optional>
#include <set>

#include "pyopt/errors.hpp"
#include "pyopt/parse.hpp"
#include "pyopt/printer.hpp"
#include "pyopt/syntax.hpp"

namespace pyopt {

const char* rule_name(RuleId r) {
    switch (r) {
        case RuleId::CP1: return "CP1";
        case RuleId::CP2: return "CP2";
        case RuleId::CP3: return "CP3";
        case RuleId::CP4: return "CP4";
        case RuleId::CP5: return "CP5";
        case RuleId::CF1: return "CF1";
        case RuleId::CF2: return "CF2";
        case RuleId::CF3a: return "CF3a";
        case RuleId::CF3b: return "CF3b";
        case RuleId::CF4IfT: return "CF4-if-t";
        case RuleId::CF4IfF: return "CF4-if-f";
        case RuleId::CF4While: return "CF4-while";
        case RuleId::CF4For: return "CF4-for";
        case RuleId::GC: return "GC";
    }
    return "?";
}

std::string Trace::to_text() const {
    std::string out;
    for (size_t i = 0; i < steps.size(); ++i) {
        const RewriteStep& s = steps[i];
        out += "step " + std::to_string(i + 1) + ": " + rule_name(s.rule) + " at stmt " +
               std::to_string(s.site.stmt_id) + ": «" + s.before + "» => «" +
               s.after + "»\n";
    }
    return out;
}

namespace {

// ----- block navigation ------------------------------------------------

struct BlockRef {
    std::vector<Stmt>* block = nullptr;
    size_t index = 0;
};

bool find_in_block(std::vector<Stmt>& body, int id, BlockRef& out) {
    for (size_t i = 0; i < body.size(); ++i) {
        if (body[i].id == id) {
            out = {&body, i};
            return true;
        }
        if (find_in_block(body[i].body, id, out)) return true;
        if (find_in_block(body[i].orelse, id, out)) return true;
    }
    return false;
}

BlockRef locate(Program& p, int id) {
    BlockRef ref;
    if (!find_in_block(p.body, id, ref)) throw std::logic_error("statement id not found");
    return ref;
}

void ensure_nonempty(std::vector<Stmt>& block, bool top_level) {
    if (block.empty() && !top_level) {
        Stmt pass;
        pass.kind = StmtKind::Pass;
        block.push_back(pass);
    }
}

bool is_copy_stmt(const Stmt& s, Ident* x, Ident* y) {
    if (s.kind != StmtKind::Assign) return false;
    const auto* v = s.value->as<VarE>();
    if (!v || v->name == s.target) return false;
    if (x) *x = s.target;
    if (y) *y = v->name;
    return true;
}

Stmt make_copy_stmt(const Ident& x, const Ident& y) {
    Stmt s;
    s.kind = StmtKind::Assign;
    s.target = x;
    s.value = make_var(y);
    return s;
}

std::string seq_fragment(const std::vector<Stmt>& stmts, size_t from, size_t to) {
    std::string out;
    for (size_t i = from; i < to && i < stmts.size(); ++i) {
        if (!out.empty()) out += " ; ";
        out += stmt_header(stmts[i]);
    }
    return out;
}

// ----- copy propagation -------------------------------------------------

struct CpCandidate {
    RuleId rule;
    int stmt_id;
    int aux_id = -1;
};

// Pre-order statement visit that exposes the containing block.
void visit_blocks(std::vector<Stmt>& body, const std::function<void(std::vector<Stmt>&)>& fn) {
    fn(body);
    for (auto& s : body) {
        if (!s.body.empty()) visit_blocks(s.body, fn);
        if (!s.orelse.empty()) visit_blocks(s.orelse, fn);
    }
}

std::vector<CpCandidate> cp_candidates(Program& p, const CpAnnotationMap& ann, RuleId rule) {
    std::vector<CpCandidate> out;
    switch (rule) {
        case RuleId::CP1:
            for_each_stmt(p.body, [&](const Stmt& s, int) {
                Ident x, y;
                if (is_copy_stmt(s, &x, &y) && ann.at(s.id).pre.contains(x, y))
                    out.push_back({rule, s.id});
            });
            break;
        case RuleId::CP3:
            visit_blocks(p.body, [&](std::vector<Stmt>& block) {
                for (size_t i = 0; i < block.size(); ++i) {
                    if (block[i].kind != StmtKind::Assign) continue;
                    const Ident& y = block[i].target;
                    for (size_t j = i + 1; j < block.size(); ++j) {
                        Ident x, yy;
                        if (!is_copy_stmt(block[j], &x, &yy) || yy != y || x == y) continue;
                        if (!ann.at(block[i].id).pre.contains(x, y)) continue;
                        std::vector<Stmt> between(block.begin() + i + 1, block.begin() + j);
                        IdentSet used = vars_of(between);
                        if (used.count(x)) continue;
                        if (assigned_vars(between).count(y)) continue;
                        out.push_back({rule, block[i].id, block[j].id});
                    }
                }
            });
            break;
        case RuleId::CP4:
        case RuleId::CP5: {
            StmtKind want = rule == RuleId::CP4 ? StmtKind::While : StmtKind::For;
            for_each_stmt(p.body, [&](const Stmt& s, int) {
                if (s.kind != want || s.body.empty()) return;
                Ident x, y;
                if (!is_copy_stmt(s.body.back(), &x, &y)) return;
                if (!ann.at(s.id).pre.contains(x, y)) return;
                std::vector<Stmt> rest(s.body.begin(), s.body.end() - 1);
                IdentSet used = vars_of(rest);
                if (rule == RuleId::CP5) used.erase(s.target);
                if (used.count(x)) return;
                out.push_back({rule, s.id, s.body.back().id});
            });
            break;
        }
        case RuleId::CP2:
            // Two licensed shapes:
            //  - substituting commute: x is read (never rebound) in S and x~y
            //    holds at every annotation of S's proof;
            //  - sink onto an identical copy: x does not occur in S and the
            //    statement after S is "x = y" again, which re-copies x before
            //    any read can see the moved assignment.
            visit_blocks(p.body, [&](std::vector<Stmt>& block) {
                for (size_t i = 0; i + 1 < block.size(); ++i) {
                    Ident x, y;
                    if (!is_copy_stmt(block[i], &x, &y)) continue;
                    const Stmt& next = block[i + 1];
                    IdentSet used = vars_of(next);
                    if (!used.count(x)) {
                        if (i + 2 >= block.size()) continue;
                        Ident x2, y2;
                        if (!is_copy_stmt(block[i + 2], &x2, &y2)) continue;
                        if (x2 != x || y2 != y) continue;
                        out.push_back({rule, block[i].id, next.id});
                        continue;
                    }
                    IdentSet rebound = assigned_vars(next);
                    if (rebound.count(x) || rebound.count(y)) continue;
                    const CopySet& entry = ann.at(block[i].id).post;
                    CpAnnotationMap local = infer_cp_seq({next}, entry);
                    CpAnnotationMap scratch;
                    std::vector<CopySet> proof;
                    judge_cp(entry, next, local, scratch, &proof);
                    bool licensed = true;
                    for (const CopySet& c : proof) {
                        if (!c.contains(x, y)) {
                            licensed = false;
                            break;
                        }
                    }
                    if (licensed) out.push_back({rule, block[i].id, next.id});
                }
            });
            break;
        default:
            break;
    }
    return out;
}

std::optional<Program> apply_cp_candidate(const Program& p, const CpCandidate& c,
                                          RewriteStep& step) {
    Program next = p;
    BlockRef ref = locate(next, c.stmt_id);
    std::vector<Stmt>& block = *ref.block;
    size_t i = ref.index;
    bool top = ref.block == &next.body;
    step.rule = c.rule;
    step.site = {c.stmt_id, c.aux_id};
    try {
        switch (c.rule) {
            case RuleId::CP1: {
                step.before = stmt_header(block[i]);
                step.after = "";
                block.erase(block.begin() + static_cast<long>(i));
                ensure_nonempty(block, top);
                break;
            }
            case RuleId::CP2: {
                Ident x, y;
                is_copy_stmt(block[i], &x, &y);
                step.before = seq_fragment(block, i, i + 2);
                Stmt moved = vars_of(block[i + 1]).count(x) ? substitute(block[i + 1], x, y)
                                                            : block[i + 1];
                Stmt copy = block[i];
                block[i] = moved;
                block[i + 1] = copy;
                step.after = seq_fragment(block, i, i + 2);
                break;
            }
            case RuleId::CP3: {
                BlockRef jref = locate(next, c.aux_id);
                size_t j = jref.index;
                Ident y = block[i].target;
                Ident x = block[j].target;
                step.before = seq_fragment(block, i, j + 1);
                std::vector<Stmt> between(block.begin() + i + 1, block.begin() + j);
                between = substitute(between, y, x);
                block[i].target = x;
                for (size_t k = 0; k < between.size(); ++k) block[i + 1 + k] = between[k];
                block[j] = make_copy_stmt(y, x);
                step.after = seq_fragment(block, i, j + 1);
                break;
            }
            case RuleId::CP4:
            case RuleId::CP5: {
                Ident x, y;
                is_copy_stmt(block[i].body.back(), &x, &y);
                step.before =
                    stmt_header(block[i]) + " [... ; " + stmt_header(block[i].body.back()) + "]";
                block[i].value = substitute(block[i].value, x, y);
                block[i].body.pop_back();
                ensure_nonempty(block[i].body, false);
                step.after = stmt_header(block[i]) + " [...] ; " + x + " = " + y;
                block.insert(block.begin() + static_cast<long>(i) + 1, make_copy_stmt(x, y));
                break;
            }
            default:
                return std::nullopt;
        }
    } catch (const RedefinedInScope&) {
        return std::nullopt;
    }
    next.renumber();
    return next;
}

// ----- constant folding -------------------------------------------------

struct SpineTerm {
    bool positive;
    ExprPtr expr;
};

void flatten_additive(const ExprPtr& e, bool positive, std::vector<SpineTerm>& terms) {
    if (const auto* b = e->as<BinE>()) {
        if (b->op == BinOp::Add) {
            flatten_additive(b->lhs, positive, terms);
            flatten_additive(b->rhs, positive, terms);
            return;
        }
        if (b->op == BinOp::Sub) {
            flatten_additive(b->lhs, positive, terms);
            flatten_additive(b->rhs, !positive, terms);
            return;
        }
    }
    terms.push_back({positive, e});
}

std::optional<long long> const_int_of(const ExprPtr& e) {
    if (const auto* c = e->as<ConstE>()) {
        if (c->value.type == Literal::Type::Int) return c->value.i;
        return std::nullopt;
    }
    if (const auto* u = e->as<UnE>()) {
        if (u->op == UnOp::Neg) {
            if (const auto* c = u->operand->as<ConstE>()) {
                if (c->value.type == Literal::Type::Int) return -c->value.i;
            }
        }
    }
    return std::nullopt;
}

// Merges the integer constant terms of a +/- spine when every other term is
// statically int-valued. Returns null when no merge applies.
ExprPtr merge_additive_constants(const ExprPtr& e, const AbstractMemory& mem) {
    const auto* b = e->as<BinE>();
    if (!b || (b->op != BinOp::Add && b->op != BinOp::Sub)) return nullptr;
    std::vector<SpineTerm> terms;
    flatten_additive(e, true, terms);
    long long net = 0;
    int const_count = 0;
    std::vector<SpineTerm> rest;
    for (const auto& t : terms) {
        if (auto k = const_int_of(t.expr)) {
            ++const_count;
            long long signed_k = t.positive ? *k : -*k;
            if (__builtin_add_overflow(net, signed_k, &net)) return nullptr;
            continue;
        }
        if (!abstract_int_typed(t.expr, mem)) return nullptr;
        rest.push_back(t);
    }
    if (const_count < 2 || rest.empty()) return nullptr;
    ExprPtr acc = rest[0].positive
                      ? rest[0].expr
                      : make_expr(Expr{UnE{UnOp::Neg, rest[0].expr}});
    for (size_t i = 1; i < rest.size(); ++i)
        acc = make_bin(rest[i].positive ? BinOp::Add : BinOp::Sub, acc, rest[i].expr);
    if (net > 0) acc = make_bin(BinOp::Add, acc, make_const(Literal::make_int(net)));
    if (net < 0) acc = make_bin(BinOp::Sub, acc, make_const(Literal::make_int(-net)));
    return acc;
}

ExprPtr fold_children(const ExprPtr& e, const AbstractMemory& mem);

ExprPtr fold_expr(const ExprPtr& e, const AbstractMemory& mem) {
    AbstractValue v = abstract_eval(e, mem);
    if (v.is_const()) {
        ExprPtr lit = literal_to_expr(v.value);
        if (!expr_equal(lit, e)) return lit;
        return e;
    }
    ExprPtr folded = fold_children(e, mem);
    if (ExprPtr merged = merge_additive_constants(folded, mem)) return merged;
    return folded;
}

ExprPtr fold_children(const ExprPtr& e, const AbstractMemory& mem) {
    struct V {
        const AbstractMemory& mem;
        const ExprPtr& self;
        ExprPtr operator()(const ConstE&) const { return self; }
        ExprPtr operator()(const VarE&) const { return self; }
        ExprPtr operator()(const BinE& b) const {
            return make_bin(b.op, fold_expr(b.lhs, mem), fold_expr(b.rhs, mem));
        }
        ExprPtr operator()(const UnE& u) const {
            return make_expr(Expr{UnE{u.op, fold_expr(u.operand, mem)}});
        }
        ExprPtr operator()(const CallE& c) const {
            std::vector<ExprPtr> args;
            args.reserve(c.args.size());
            for (const auto& a : c.args) args.push_back(fold_expr(a, mem));
            return make_expr(Expr{CallE{c.callee, std::move(args)}});
        }
        ExprPtr operator()(const MethodE& m) const {
            std::vector<ExprPtr> args;
            args.reserve(m.args.size());
            for (const auto& a : m.args) args.push_back(fold_expr(a, mem));
            return make_expr(Expr{MethodE{fold_expr(m.base, mem), m.method, std::move(args)}});
        }
        ExprPtr operator()(const SubscriptE& s) const {
            return make_expr(Expr{SubscriptE{fold_expr(s.base, mem), fold_expr(s.index, mem)}});
        }
        ExprPtr operator()(const SliceE& s) const {
            return make_expr(Expr{SliceE{fold_expr(s.base, mem),
                                         s.lo ? fold_expr(s.lo, mem) : nullptr,
                                         s.hi ? fold_expr(s.hi, mem) : nullptr,
                                         s.step ? fold_expr(s.step, mem) : nullptr}});
        }
        ExprPtr operator()(const ListE& l) const {
            std::vector<ExprPtr> items;
            items.reserve(l.items.size());
            for (const auto& i : l.items) items.push_back(fold_expr(i, mem));
            return make_expr(Expr{ListE{std::move(items)}});
        }
        ExprPtr operator()(const DictE&) const { return self; }
    };
    return std::visit(V{mem, e}, e->node);
}

struct FoldSite {
    int stmt_id;
    int position;  // 0 = value, 1 = index
    ExprPtr before, after;
};

// Guards of while/for loops are evaluated on every iteration, so they fold
// against the loop invariant; everything else folds against the incoming
// memory.
const AbstractMemory& fold_memory(const Stmt& s, const CfEntry& entry, int position) {
    if (s.kind == StmtKind::While && position == 0) return entry.post;
    return entry.pre;
}

std::vector<FoldSite> fold_sites(const Program& p, const CfAnnotationMap& ann) {
    std::vector<FoldSite> out;
    for_each_stmt(p.body, [&](const Stmt& s, int) {
        const CfEntry& entry = ann.at(s.id);
        auto try_position = [&](const ExprPtr& e, int position) {
            if (!e) return;
            ExprPtr folded = fold_expr(e, fold_memory(s, entry, position));
            if (!expr_equal(folded, e)) out.push_back({s.id, position, e, folded});
        };
        switch (s.kind) {
            case StmtKind::Assign:
            case StmtKind::Return:
            case StmtKind::ExprStmt:
            case StmtKind::If:
            case StmtKind::While:
            case StmtKind::For:
                try_position(s.value, 0);
                break;
            case StmtKind::SubscriptAssign:
                try_position(s.value, 0);
                try_position(s.index, 1);
                break;
            default:
                break;
        }
    });
    return out;
}

struct CfCandidate {
    RuleId rule;
    int stmt_id;
    int aux_id = -1;
};

std::vector<CfCandidate> cf4_candidates(const Program& p, const CfAnnotationMap& ann) {
    std::vector<CfCandidate> out;
    for_each_stmt(p.body, [&](const Stmt& s, int) {
        const CfEntry& entry = ann.at(s.id);
        if (s.kind == StmtKind::If) {
            AbstractValue g = abstract_eval(s.value, entry.pre);
            if (g.is_const())
                out.push_back({g.value.truthy() ? RuleId::CF4IfT : RuleId::CF4IfF, s.id});
        } else if (s.kind == StmtKind::While) {
            AbstractValue g = abstract_eval(s.value, entry.pre);
            if (g.is_const() && !g.value.truthy()) out.push_back({RuleId::CF4While, s.id});
        } else if (s.kind == StmtKind::For) {
            auto len = iterable_length(s.value, entry.pre);
            if (len && *len <= 0) out.push_back({RuleId::CF4For, s.id});
        }
    });
    return out;
}

std::vector<CfCandidate> cf2_candidates(const Program& p, const CfAnnotationMap& ann) {
    std::vector<CfCandidate> out;
    for_each_stmt(p.body, [&](const Stmt& s, int) {
        if (s.kind != StmtKind::Assign) return;
        if (!is_pure_expr(s.value)) return;
        const CfEntry& entry = ann.at(s.id);
        AbstractValue v = abstract_eval(s.value, entry.pre);
        if (!v.is_const()) return;
        const AbstractValue* held = entry.pre.lookup(s.target);
        if (held && held->is_const() && held->value == v.value) out.push_back({RuleId::CF2, s.id});
    });
    return out;
}

std::vector<CfCandidate> cf3b_candidates(Program& p) {
    std::vector<CfCandidate> out;
    visit_blocks(p.body, [&](std::vector<Stmt>& block) {
        for (size_t i = 0; i + 1 < block.size(); ++i) {
            if (block[i].kind != StmtKind::Assign || block[i + 1].kind != StmtKind::Assign)
                continue;
            if (block[i].target != block[i + 1].target) continue;
            if (vars_of(*block[i + 1].value).count(block[i].target)) continue;
            if (!is_pure_expr(block[i].value)) continue;
            out.push_back({RuleId::CF3b, block[i].id, block[i + 1].id});
        }
    });
    return out;
}

std::vector<CfCandidate> cf3a_candidates(Program& p) {
    std::vector<CfCandidate> out;
    visit_blocks(p.body, [&](std::vector<Stmt>& block) {
        for (size_t i = 0; i < block.size(); ++i) {
            if (block[i].kind != StmtKind::Assign) continue;
            const Ident& x = block[i].target;
            if (!is_pure_expr(block[i].value)) continue;
            IdentSet expr_vars = vars_of(*block[i].value);
            for (size_t j = i + 2; j < block.size(); ++j) {
                // S = block[i+1..j-1] must stay transparent for the move.
                const Stmt& between = block[j - 1];
                if (!is_effect_free_stmt(between)) break;
                if (vars_of(between).count(x)) break;
                IdentSet written = written_vars(between);
                bool clash = false;
                for (const auto& w : written)
                    if (expr_vars.count(w)) { clash = true; break; }
                if (clash) break;
                if (block[j].kind == StmtKind::Assign && block[j].target == x) {
                    out.push_back({RuleId::CF3a, block[i].id, block[j].id});
                    break;
                }
            }
        }
    });
    return out;
}

std::optional<Program> apply_cf_candidate(const Program& p, const CfCandidate& c,
                                          RewriteStep& step) {
    Program next = p;
    BlockRef ref = locate(next, c.stmt_id);
    std::vector<Stmt>& block = *ref.block;
    size_t i = ref.index;
    bool top = ref.block == &next.body;
    step.rule = c.rule;
    step.site = {c.stmt_id, c.aux_id};
    switch (c.rule) {
        case RuleId::CF2: {
            step.before = stmt_header(block[i]);
            step.after = "";
            block.erase(block.begin() + static_cast<long>(i));
            ensure_nonempty(block, top);
            break;
        }
        case RuleId::CF3b: {
            step.before = seq_fragment(block, i, i + 2);
            step.after = stmt_header(block[i + 1]);
            block.erase(block.begin() + static_cast<long>(i));
            break;
        }
        case RuleId::CF3a: {
            BlockRef jref = locate(next, c.aux_id);
            size_t j = jref.index;
            step.before = seq_fragment(block, i, j + 1);
            Stmt moved = block[i];
            block.erase(block.begin() + static_cast<long>(i));
            block.insert(block.begin() + static_cast<long>(j) - 1, moved);
            step.after = seq_fragment(block, i, j + 1);
            break;
        }
        case RuleId::CF4IfT:
        case RuleId::CF4IfF: {
            step.before = stmt_header(block[i]);
            std::vector<Stmt> branch =
                c.rule == RuleId::CF4IfT ? block[i].body : block[i].orelse;
            step.after = branch.empty() ? "" : seq_fragment(branch, 0, branch.size());
            block.erase(block.begin() + static_cast<long>(i));
            block.insert(block.begin() + static_cast<long>(i), branch.begin(), branch.end());
            ensure_nonempty(block, top);
            break;
        }
        case RuleId::CF4While:
        case RuleId::CF4For: {
            step.before = stmt_header(block[i]);
            step.after = "";
            block.erase(block.begin() + static_cast<long>(i));
            ensure_nonempty(block, top);
            break;
        }
        default:
            return std::nullopt;
    }
    next.renumber();
    return next;
}

Stmt* find_mutable(Program& p, int id) {
    BlockRef ref = locate(p, id);
    return &(*ref.block)[ref.index];
}

void set_position_expr(Stmt& s, int position, const ExprPtr& e) {
    if (position == 1)
        s.index = e;
    else
        s.value = e;
}

}  // namespace

std::pair<Program, Trace> apply_cp(const Program& p) {
    Program cur = p;
    cur.renumber();
    Trace trace;
    std::set<std::string> seen = {print_program(cur)};
    const RuleId order[] = {RuleId::CP1, RuleId::CP3, RuleId::CP4, RuleId::CP5, RuleId::CP2};
    for (int guard = 0; guard < 10'000; ++guard) {
        CpAnnotationMap ann = infer_cp(cur);
        bool advanced = false;
        for (RuleId rule : order) {
            for (const CpCandidate& c : cp_candidates(cur, ann, rule)) {
                RewriteStep step;
                auto next = apply_cp_candidate(cur, c, step);
                if (!next) continue;
                std::string key = print_program(*next);
                if (seen.count(key)) continue;
                cur = std::move(*next);
                seen.insert(key);
                trace.steps.push_back(std::move(step));
                advanced = true;
                break;
            }
            if (advanced) break;
        }
        if (!advanced) return {cur, trace};
    }
    throw NormalizationDiverged();
}

std::pair<Program, Trace> apply_cf(const Program& p) {
    Program cur = p;
    cur.renumber();
    Trace trace;
    std::set<std::string> seen = {print_program(cur)};
    for (int guard = 0; guard < 10'000; ++guard) {
        CfAnnotationMap ann = infer_cf(cur);
        bool advanced = false;

        auto try_candidates = [&](const std::vector<CfCandidate>& cands) {
            for (const CfCandidate& c : cands) {
                RewriteStep step;
                auto next = apply_cf_candidate(cur, c, step);
                if (!next) continue;
                std::string key = print_program(*next);
                if (seen.count(key)) continue;
                cur = std::move(*next);
                seen.insert(key);
                trace.steps.push_back(std::move(step));
                advanced = true;
                return;
            }
        };

        try_candidates(cf4_candidates(cur, ann));
        if (!advanced) try_candidates(cf2_candidates(cur, ann));
        if (!advanced) {
            // Rule 1 folds every foldable position in one pass.
            std::vector<FoldSite> sites = fold_sites(cur, ann);
            if (!sites.empty()) {
                for (const FoldSite& site : sites) {
                    RewriteStep step;
                    step.rule = RuleId::CF1;
                    step.site = {site.stmt_id, site.position};
                    step.before = print_expr(site.before);
                    step.after = print_expr(site.after);
                    set_position_expr(*find_mutable(cur, site.stmt_id), site.position, site.after);
                    trace.steps.push_back(std::move(step));
                }
                cur.renumber();
                seen.insert(print_program(cur));
                advanced = true;
            }
        }
        if (!advanced) try_candidates(cf3b_candidates(cur));
        if (!advanced) try_candidates(cf3a_candidates(cur));
        if (!advanced) return {cur, trace};
    }
    throw NormalizationDiverged();
}

std::pair<Program, Trace> garbage_collect(const Program& p) {
    Program cur = p;
    cur.renumber();
    Trace trace;
    for (int guard = 0; guard < 10'000; ++guard) {
        std::map<int, IdentSet> live = compute_live_out(cur);
        int victim = -1;
        for_each_stmt(cur.body, [&](const Stmt& s, int) {
            if (victim >= 0 || s.kind != StmtKind::Assign) return;
            if (!is_pure_expr(s.value)) return;
            if (live.at(s.id).count(s.target)) return;
            victim = s.id;
        });
        if (victim < 0) return {cur, trace};
        BlockRef ref = locate(cur, victim);
        RewriteStep step;
        step.rule = RuleId::GC;
        step.site = {victim, -1};
        step.before = stmt_header((*ref.block)[ref.index]);
        step.after = "";
        ref.block->erase(ref.block->begin() + static_cast<long>(ref.index));
        ensure_nonempty(*ref.block, ref.block == &cur.body);
        cur.renumber();
        trace.steps.push_back(std::move(step));
    }
    throw NormalizationDiverged();
}

std::pair<Program, Trace> normalize(const Program& p) {
    Program cur = p;
    cur.renumber();
    Trace trace;
    for (int round = 0; round < 64; ++round) {
        Program before = cur;
        auto [after_cf, cf_trace] = apply_cf(cur);
        auto [after_cp, cp_trace] = apply_cp(after_cf);
        auto [after_gc, gc_trace] = garbage_collect(after_cp);
        trace.steps.insert(trace.steps.end(), cf_trace.steps.begin(), cf_trace.steps.end());
        trace.steps.insert(trace.steps.end(), cp_trace.steps.begin(), cp_trace.steps.end());
        trace.steps.insert(trace.steps.end(), gc_trace.steps.begin(), gc_trace.steps.end());
        cur = after_gc;
        if (program_equal(before, cur)) return {cur, trace};
    }
    throw NormalizationDiverged();
}

Program replay(const Program& p, const Trace& trace) {
    Program cur = p;
    cur.renumber();
    for (const RewriteStep& step : trace.steps) {
        switch (step.rule) {
            case RuleId::CP1:
            case RuleId::CF2:
            case RuleId::GC: {
                BlockRef ref = locate(cur, step.site.stmt_id);
                ref.block->erase(ref.block->begin() + static_cast<long>(ref.index));
                ensure_nonempty(*ref.block, ref.block == &cur.body);
                break;
            }
            case RuleId::CP2: {
                CpCandidate c{RuleId::CP2, step.site.stmt_id, step.site.aux_id};
                RewriteStep scratch;
                auto next = apply_cp_candidate(cur, c, scratch);
                if (!next) throw std::logic_error("replay: CP2 no longer applies");
                cur = std::move(*next);
                continue;
            }
            case RuleId::CP3:
            case RuleId::CP4:
            case RuleId::CP5: {
                CpCandidate c{step.rule, step.site.stmt_id, step.site.aux_id};
                RewriteStep scratch;
                auto next = apply_cp_candidate(cur, c, scratch);
                if (!next) throw std::logic_error("replay: rule no longer applies");
                cur = std::move(*next);
                continue;
            }
            case RuleId::CF1: {
                Stmt* s = find_mutable(cur, step.site.stmt_id);
                set_position_expr(*s, step.site.aux_id, parse_expression(step.after));
                break;
            }
            case RuleId::CF3a:
            case RuleId::CF3b:
            case RuleId::CF4IfT:
            case RuleId::CF4IfF:
            case RuleId::CF4While:
            case RuleId::CF4For: {
                CfCandidate c{step.rule, step.site.stmt_id, step.site.aux_id};
                RewriteStep scratch;
                auto next = apply_cf_candidate(cur, c, scratch);
                if (!next) throw std::logic_error("replay: rule no longer applies");
                cur = std::move(*next);
                continue;
            }
        }
        cur.renumber();
    }
    return cur;
}

}  // namespace pyopt
