#include "pyopt/rewrite.hpp"
#include "pyopt/syntax.hpp"

namespace pyopt {

namespace {

IdentSet set_union(const IdentSet& a, const IdentSet& b) {
    IdentSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

IdentSet reads_of(const ExprPtr& e) {
    if (!e) return {};
    return vars_of(*e);
}

struct Liveness {
    std::map<int, IdentSet>& live_out;

    IdentSet seq(const std::vector<Stmt>& body, IdentSet out) {
        for (auto it = body.rbegin(); it != body.rend(); ++it) out = stmt(*it, out);
        return out;
    }

    IdentSet stmt(const Stmt& s, const IdentSet& out) {
        live_out[s.id] = out;
        switch (s.kind) {
            case StmtKind::Assign: {
                IdentSet in = out;
                in.erase(s.target);
                return set_union(in, reads_of(s.value));
            }
            case StmtKind::SubscriptAssign: {
                IdentSet in = set_union(out, reads_of(s.index));
                in = set_union(in, reads_of(s.value));
                in.insert(s.target);
                return in;
            }
            case StmtKind::ExprStmt:
                return set_union(out, reads_of(s.value));
            case StmtKind::Return:
                return reads_of(s.value);
            case StmtKind::Pass:
                return out;
            case StmtKind::If: {
                IdentSet in = set_union(seq(s.body, out), seq(s.orelse, out));
                return set_union(in, reads_of(s.value));
            }
            case StmtKind::While: {
                IdentSet loop = set_union(out, reads_of(s.value));
                while (true) {
                    IdentSet next = set_union(set_union(out, reads_of(s.value)), seq(s.body, loop));
                    if (next == loop) break;
                    loop = std::move(next);
                }
                // Final pass so recorded body live-outs match the fixpoint.
                seq(s.body, loop);
                return loop;
            }
            case StmtKind::For: {
                IdentSet loop = set_union(out, reads_of(s.value));
                while (true) {
                    IdentSet next = set_union(set_union(out, reads_of(s.value)), seq(s.body, loop));
                    if (next == loop) break;
                    loop = std::move(next);
                }
                seq(s.body, loop);
                return loop;
            }
            case StmtKind::FunDef:
                seq(s.body, IdentSet());
                return out;
        }
        return out;
    }
};

}  // namespace

std::map<int, IdentSet> compute_live_out(const Program& p) {
    std::map<int, IdentSet> out;
    Liveness lv{out};
    lv.seq(p.body, IdentSet());
    return out;
}

}  // namespace pyopt
