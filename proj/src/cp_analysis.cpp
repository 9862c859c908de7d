#include "pyopt/cp_analysis.hpp"

#include "pyopt/printer.hpp"
#include "pyopt/syntax.hpp"

namespace pyopt {

bool operator==(const CpAnnotationMap& a, const CpAnnotationMap& b) {
    if (a.entries.size() != b.entries.size()) return false;
    for (const auto& [id, e] : a.entries) {
        auto it = b.entries.find(id);
        if (it == b.entries.end()) return false;
        if (!(e.pre == it->second.pre) || !(e.post == it->second.post)) return false;
    }
    return true;
}

namespace {

// Variables whose copy pairs are broken by in-place mutation inside `e`
// (bases of mutating method calls).
void mutation_kills(const ExprPtr& e, IdentSet& out) {
    if (!e) return;
    if (const auto* m = e->as<MethodE>()) {
        if (is_mutating_method(m->method))
            for (const auto& v : vars_of(*m->base)) out.insert(v);
        mutation_kills(m->base, out);
        for (const auto& a : m->args) mutation_kills(a, out);
        return;
    }
    if (const auto* b = e->as<BinE>()) {
        mutation_kills(b->lhs, out);
        mutation_kills(b->rhs, out);
    } else if (const auto* u = e->as<UnE>()) {
        mutation_kills(u->operand, out);
    } else if (const auto* c = e->as<CallE>()) {
        for (const auto& a : c->args) mutation_kills(a, out);
    } else if (const auto* s = e->as<SubscriptE>()) {
        mutation_kills(s->base, out);
        mutation_kills(s->index, out);
    } else if (const auto* s = e->as<SliceE>()) {
        mutation_kills(s->base, out);
        mutation_kills(s->lo, out);
        mutation_kills(s->hi, out);
        mutation_kills(s->step, out);
    } else if (const auto* l = e->as<ListE>()) {
        for (const auto& i : l->items) mutation_kills(i, out);
    }
}

CopySet kill_mutated(CopySet p, const ExprPtr& e) {
    IdentSet killed;
    mutation_kills(e, killed);
    for (const auto& v : killed) p = p.remove(v);
    return p;
}

struct Judge {
    const CpAnnotationMap& prev;
    CpAnnotationMap& out;
    std::vector<CopySet>* proof;

    void note(const CopySet& s) {
        if (proof) proof->push_back(s);
    }

    CopySet body_approximant(const std::vector<Stmt>& body) const {
        if (body.empty()) return CopySet();
        auto it = prev.entries.find(body.back().id);
        return it == prev.entries.end() ? CopySet() : it->second.post;
    }

    CopySet seq(CopySet pre, const std::vector<Stmt>& body) {
        for (const auto& s : body) pre = stmt(pre, s);
        return pre;
    }

    CopySet stmt(const CopySet& pre, const Stmt& s) {
        note(pre);
        CopySet post = transfer(pre, s);
        note(post);
        auto& entry = out.entries[s.id];
        entry.pre = pre;
        entry.post = post;
        return post;
    }

    CopySet transfer(const CopySet& pre, const Stmt& s) {
        switch (s.kind) {
            case StmtKind::Assign: {
                if (const auto* v = s.value->as<VarE>()) {
                    if (v->name == s.target) return pre;  // Ids
                    return pre.remove(s.target).with_pair(s.target, v->name);
                }
                return kill_mutated(pre.remove(s.target), s.value);
            }
            case StmtKind::SubscriptAssign:
                return kill_mutated(kill_mutated(pre.remove(s.target), s.index), s.value);
            case StmtKind::ExprStmt:
            case StmtKind::Return:
                return kill_mutated(pre, s.value);
            case StmtKind::Pass:
                return pre;
            case StmtKind::If: {
                CopySet t = seq(pre, s.body);
                CopySet e = s.orelse.empty() ? pre : seq(pre, s.orelse);
                return t.intersect(e);
            }
            case StmtKind::While: {
                CopySet entry = pre.intersect(body_approximant(s.body));
                seq(entry, s.body);
                return entry;
            }
            case StmtKind::For: {
                CopySet entry = pre.intersect(body_approximant(s.body)).remove(s.target);
                seq(entry, s.body);
                return entry;
            }
            case StmtKind::FunDef:
                seq(CopySet(), s.body);
                return pre;
        }
        return pre;
    }
};

}  // namespace

CopySet judge_cp(const CopySet& pre, const Stmt& s, const CpAnnotationMap& prev,
                 CpAnnotationMap& out, std::vector<CopySet>* proof) {
    Judge j{prev, out, proof};
    return j.stmt(pre, s);
}

CopySet judge_cp_seq(const CopySet& pre, const std::vector<Stmt>& body,
                     const CpAnnotationMap& prev, CpAnnotationMap& out,
                     std::vector<CopySet>* proof) {
    Judge j{prev, out, proof};
    return j.seq(pre, body);
}

namespace {

CpAnnotationMap fix_seq(const std::vector<Stmt>& body, const CopySet& entry, int var_count,
                        int stmt_count, const CpRoundObserver& observer) {
    CpAnnotationMap prev;
    int limit = var_count * var_count + stmt_count + 4;
    for (int round = 1; round <= limit; ++round) {
        CpAnnotationMap next;
        judge_cp_seq(entry, body, prev, next);
        if (observer) observer(round, prev, next);
        if (next == prev) return next;
        prev = std::move(next);
    }
    throw IterationLimitExceeded("copy-propagation fixpoint exceeded " +
                                 std::to_string(limit) + " rounds");
}

}  // namespace

CpAnnotationMap infer_cp(const Program& p, const CpRoundObserver& observer) {
    return fix_seq(p.body, CopySet(), static_cast<int>(vars_of(p).size()), p.stmt_count(),
                   observer);
}

CpAnnotationMap infer_cp_seq(const std::vector<Stmt>& body, const CopySet& entry) {
    int vars = static_cast<int>(vars_of(body).size());
    int count = 0;
    for_each_stmt(body, [&](const Stmt&, int) { ++count; });
    return fix_seq(body, entry, vars, count, nullptr);
}

std::string dump_cp(const Program& p, const CpAnnotationMap& ann) {
    std::string out;
    for_each_stmt(p.body, [&](const Stmt& s, int depth) {
        const CpEntry& e = ann.at(s.id);
        bool loop = s.kind == StmtKind::While || s.kind == StmtKind::For;
        const CopySet& shown_pre = loop ? e.post : e.pre;
        out += std::string(static_cast<size_t>(depth) * 4, ' ');
        out += "«" + stmt_header(s) + "» ⊨ pre={" + shown_pre.to_string() +
               "} post={" + e.post.to_string() + "}\n";
    });
    return out;
}

}  // namespace pyopt
