#include "pyopt/cf_analysis.hpp"

#include <algorithm>

#include "pyopt/interp.hpp"
#include "pyopt/printer.hpp"
#include "pyopt/syntax.hpp"

namespace pyopt {

std::string AbstractValue::to_string() const {
    switch (kind) {
        case Kind::Const: return format_literal(value);
        case Kind::Top: return "⊤";
        case Kind::Err: return "?";
    }
    return "?";
}

static bool literal_is_plain_int(const Literal& v) { return v.type == Literal::Type::Int; }

AbstractValue join_value(const AbstractValue& a, const AbstractValue& b) {
    if (a.is_err() || b.is_err()) return AbstractValue::err();
    if (a == b) return a;
    bool int_hint = (a.is_const() ? literal_is_plain_int(a.value) : a.int_hint) &&
                    (b.is_const() ? literal_is_plain_int(b.value) : b.int_hint);
    return AbstractValue::top(int_hint);
}

AbstractMemory join_memory(const AbstractMemory& a, const AbstractMemory& b) {
    AbstractMemory out = a;
    for (const auto& [x, v] : b.bindings) {
        auto it = out.bindings.find(x);
        if (it == out.bindings.end())
            out.bindings[x] = v;
        else
            it->second = join_value(it->second, v);
    }
    return out;
}

std::string AbstractMemory::to_string() const {
    std::string out;
    for (const auto& [x, v] : bindings) {
        if (!out.empty()) out += ", ";
        out += x + ":" + v.to_string();
    }
    return out;
}

namespace {

// Syntactic reasons an expression cannot be evaluated on constants.
bool has_opaque_call(const ExprPtr& e) {
    if (!e) return false;
    struct V {
        bool operator()(const ConstE&) const { return false; }
        bool operator()(const VarE&) const { return false; }
        bool operator()(const BinE& b) const { return has_opaque_call(b.lhs) || has_opaque_call(b.rhs); }
        bool operator()(const UnE& u) const { return has_opaque_call(u.operand); }
        bool operator()(const CallE& c) const {
            if (!is_foldable_builtin(c.callee)) return true;
            for (const auto& a : c.args)
                if (has_opaque_call(a)) return true;
            return false;
        }
        bool operator()(const MethodE&) const { return true; }
        bool operator()(const SubscriptE& s) const {
            return has_opaque_call(s.base) || has_opaque_call(s.index);
        }
        bool operator()(const SliceE& s) const {
            return has_opaque_call(s.base) || has_opaque_call(s.lo) || has_opaque_call(s.hi) ||
                   has_opaque_call(s.step);
        }
        bool operator()(const ListE& l) const {
            for (const auto& i : l.items)
                if (has_opaque_call(i)) return true;
            return false;
        }
        bool operator()(const DictE&) const { return false; }
    };
    return std::visit(V{}, e->node);
}

Value literal_to_value(const Literal& v) {
    switch (v.type) {
        case Literal::Type::Int: return Value::of(v.i);
        case Literal::Type::Bool: return Value::of(v.b);
        case Literal::Type::Float: return Value::of(v.f);
        case Literal::Type::Str: return Value::of(v.s);
    }
    return Value::none();
}

std::optional<Literal> value_to_literal(const Value& v) {
    if (v.is_int()) return Literal::make_int(v.as_int());
    if (v.is_bool()) return Literal::make_bool(v.as_bool());
    if (v.is_float()) return Literal::make_float(v.as_float());
    if (v.is_str()) return Literal::make_str(v.as_str());
    return std::nullopt;
}

}  // namespace

AbstractValue abstract_eval(const ExprPtr& e, const AbstractMemory& mem) {
    IdentSet vars = vars_of(*e);
    bool any_top = false;
    for (const auto& x : vars) {
        const AbstractValue* v = mem.lookup(x);
        if (!v || v->is_err()) return AbstractValue::err();
        if (v->is_top()) any_top = true;
    }
    if (any_top || has_opaque_call(e))
        return AbstractValue::top(abstract_int_typed(e, mem));

    std::map<Ident, Value> env;
    for (const auto& x : vars) env[x] = literal_to_value(mem.lookup(x)->value);
    EvalResult r = eval_pure_expr(e, env);
    if (!r.ok) return AbstractValue::err();
    if (auto lit = value_to_literal(r.value)) return AbstractValue::constant(*lit);
    return AbstractValue::top(false);
}

bool abstract_int_typed(const ExprPtr& e, const AbstractMemory& mem) {
    if (!e) return false;
    struct V {
        const AbstractMemory& mem;
        bool operator()(const ConstE& c) const { return literal_is_plain_int(c.value); }
        bool operator()(const VarE& v) const {
            const AbstractValue* av = mem.lookup(v.name);
            if (!av) return false;
            if (av->is_const()) return literal_is_plain_int(av->value);
            return av->is_top() && av->int_hint;
        }
        bool operator()(const BinE& b) const {
            switch (b.op) {
                case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
                case BinOp::FloorDiv: case BinOp::Mod: case BinOp::Pow:
                    return abstract_int_typed(b.lhs, mem) && abstract_int_typed(b.rhs, mem);
                default:
                    return false;
            }
        }
        bool operator()(const UnE& u) const {
            return u.op == UnOp::Neg && abstract_int_typed(u.operand, mem);
        }
        bool operator()(const CallE& c) const {
            if (c.callee == "int" || c.callee == "len") return true;
            if (c.callee == "abs" || c.callee == "min" || c.callee == "max") {
                for (const auto& a : c.args)
                    if (!abstract_int_typed(a, mem)) return false;
                return !c.args.empty();
            }
            return false;
        }
        bool operator()(const MethodE&) const { return false; }
        bool operator()(const SubscriptE&) const { return false; }
        bool operator()(const SliceE&) const { return false; }
        bool operator()(const ListE&) const { return false; }
        bool operator()(const DictE&) const { return false; }
    };
    return std::visit(V{mem}, e->node);
}

std::optional<long long> iterable_length(const ExprPtr& e, const AbstractMemory& mem) {
    if (const auto* l = e->as<ListE>()) return static_cast<long long>(l->items.size());
    const auto* c = e->as<CallE>();
    if (!c || c->callee != "range" || c->args.empty() || c->args.size() > 3) return std::nullopt;
    std::vector<long long> vals;
    for (const auto& a : c->args) {
        AbstractValue v = abstract_eval(a, mem);
        if (!v.is_const() || v.value.type != Literal::Type::Int) return std::nullopt;
        vals.push_back(v.value.i);
    }
    long long start = 0, stop = 0, step = 1;
    if (vals.size() == 1) stop = vals[0];
    else if (vals.size() == 2) { start = vals[0]; stop = vals[1]; }
    else { start = vals[0]; stop = vals[1]; step = vals[2]; }
    if (step == 0) return std::nullopt;
    long long n = 0;
    if (step > 0 && stop > start) n = (stop - start + step - 1) / step;
    if (step < 0 && stop < start) n = (start - stop + (-step) - 1) / (-step);
    return n;
}

namespace {

void demote_mutated(AbstractMemory& mem, const ExprPtr& e) {
    if (!e) return;
    if (const auto* m = e->as<MethodE>()) {
        if (is_mutating_method(m->method)) {
            for (const auto& x : vars_of(*m->base))
                if (mem.lookup(x)) mem.bindings[x] = AbstractValue::top(false);
        }
        demote_mutated(mem, m->base);
        for (const auto& a : m->args) demote_mutated(mem, a);
        return;
    }
    if (const auto* b = e->as<BinE>()) {
        demote_mutated(mem, b->lhs);
        demote_mutated(mem, b->rhs);
    } else if (const auto* u = e->as<UnE>()) {
        demote_mutated(mem, u->operand);
    } else if (const auto* c = e->as<CallE>()) {
        for (const auto& a : c->args) demote_mutated(mem, a);
    } else if (const auto* s = e->as<SubscriptE>()) {
        demote_mutated(mem, s->base);
        demote_mutated(mem, s->index);
    } else if (const auto* s = e->as<SliceE>()) {
        demote_mutated(mem, s->base);
        demote_mutated(mem, s->lo);
        demote_mutated(mem, s->hi);
        demote_mutated(mem, s->step);
    } else if (const auto* l = e->as<ListE>()) {
        for (const auto& i : l->items) demote_mutated(mem, i);
    }
}

struct Judge {
    const CfAnnotationMap& prev;
    CfAnnotationMap& out;

    AbstractMemory body_approximant(const std::vector<Stmt>& body) const {
        if (body.empty()) return AbstractMemory();
        auto it = prev.entries.find(body.back().id);
        return it == prev.entries.end() ? AbstractMemory() : it->second.post;
    }

    AbstractMemory seq(AbstractMemory pre, const std::vector<Stmt>& body) {
        for (const auto& s : body) pre = stmt(pre, s);
        return pre;
    }

    AbstractMemory stmt(const AbstractMemory& pre, const Stmt& s) {
        AbstractMemory post = transfer(pre, s);
        auto& entry = out.entries[s.id];
        entry.pre = pre;
        entry.post = post;
        return post;
    }

    AbstractMemory transfer(const AbstractMemory& pre, const Stmt& s) {
        switch (s.kind) {
            case StmtKind::Assign: {
                AbstractValue v = abstract_eval(s.value, pre);
                AbstractMemory post = pre;
                demote_mutated(post, s.value);
                post.bindings[s.target] = v;
                return post;
            }
            case StmtKind::SubscriptAssign: {
                AbstractMemory post = pre;
                demote_mutated(post, s.index);
                demote_mutated(post, s.value);
                if (post.lookup(s.target)) post.bindings[s.target] = AbstractValue::top(false);
                return post;
            }
            case StmtKind::ExprStmt:
            case StmtKind::Return: {
                AbstractMemory post = pre;
                demote_mutated(post, s.value);
                return post;
            }
            case StmtKind::Pass:
                return pre;
            case StmtKind::If: {
                AbstractValue g = abstract_eval(s.value, pre);
                AbstractMemory t = seq(pre, s.body);
                AbstractMemory e = s.orelse.empty() ? pre : seq(pre, s.orelse);
                if (g.is_const()) return g.value.truthy() ? t : e;
                return join_memory(t, e);
            }
            case StmtKind::While: {
                AbstractMemory entry = join_memory(pre, body_approximant(s.body));
                seq(entry, s.body);
                AbstractValue g = abstract_eval(s.value, pre);
                if (g.is_const() && !g.value.truthy()) return pre;
                return entry;
            }
            case StmtKind::For: {
                AbstractMemory entry = join_memory(pre, body_approximant(s.body));
                bool int_var = false;
                if (const auto* c = s.value->as<CallE>()) int_var = c->callee == "range";
                AbstractValue iv = AbstractValue::top(int_var);
                if (const AbstractValue* old = entry.lookup(s.target))
                    iv = join_value(*old, iv);
                entry.bindings[s.target] = iv;
                seq(entry, s.body);
                auto len = iterable_length(s.value, pre);
                if (len && *len <= 0) return pre;
                return entry;
            }
            case StmtKind::FunDef: {
                AbstractMemory entry;
                for (const auto& p : s.params) entry.bindings[p] = AbstractValue::top(false);
                for (const auto& x : vars_of(s.body)) entry.bindings[x] = AbstractValue::top(false);
                seq(entry, s.body);
                return pre;
            }
        }
        return pre;
    }
};

CfAnnotationMap fix_seq(const std::vector<Stmt>& body, int var_count, int stmt_count,
                        const CfRoundObserver& observer) {
    CfAnnotationMap prev;
    int limit = var_count * var_count + stmt_count + 8;
    for (int round = 1; round <= limit; ++round) {
        CfAnnotationMap next;
        Judge j{prev, next};
        j.seq(AbstractMemory(), body);
        if (observer) observer(round, prev, next);
        if (next == prev) return next;
        prev = std::move(next);
    }
    throw IterationLimitExceeded("constant-folding fixpoint exceeded " +
                                 std::to_string(limit) + " rounds");
}

}  // namespace

AbstractMemory judge_cf(const AbstractMemory& pre, const Stmt& s, const CfAnnotationMap& prev,
                        CfAnnotationMap& out) {
    Judge j{prev, out};
    return j.stmt(pre, s);
}

AbstractMemory judge_cf_seq(const AbstractMemory& pre, const std::vector<Stmt>& body,
                            const CfAnnotationMap& prev, CfAnnotationMap& out) {
    Judge j{prev, out};
    return j.seq(pre, body);
}

CfAnnotationMap infer_cf(const Program& p, const CfRoundObserver& observer) {
    return fix_seq(p.body, static_cast<int>(vars_of(p).size()), p.stmt_count(), observer);
}

std::string dump_cf(const Program& p, const CfAnnotationMap& ann) {
    std::string out;
    for_each_stmt(p.body, [&](const Stmt& s, int depth) {
        const CfEntry& e = ann.at(s.id);
        bool loop = s.kind == StmtKind::While || s.kind == StmtKind::For;
        const AbstractMemory& shown_pre = loop ? e.post : e.pre;
        out += std::string(static_cast<size_t>(depth) * 4, ' ');
        out += "«" + stmt_header(s) + "» ⊨ pre={" + shown_pre.to_string() +
               "} post={" + e.post.to_string() + "}\n";
    });
    return out;
}

}  // namespace pyopt
