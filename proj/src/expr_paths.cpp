#include "expr_paths.hpp"

namespace pyopt {

namespace {

void walk_rec(const ExprPtr& e, std::vector<int>& path, const ExprVisitor& fn) {
    if (!e) return;
    fn(e, path);
    auto child = [&](const ExprPtr& c, int slot) {
        if (!c) return;
        path.push_back(slot);
        walk_rec(c, path, fn);
        path.pop_back();
    };
    if (const auto* b = e->as<BinE>()) {
        child(b->lhs, 0);
        child(b->rhs, 1);
    } else if (const auto* u = e->as<UnE>()) {
        child(u->operand, 0);
    } else if (const auto* c = e->as<CallE>()) {
        for (size_t i = 0; i < c->args.size(); ++i) child(c->args[i], static_cast<int>(i));
    } else if (const auto* m = e->as<MethodE>()) {
        child(m->base, 0);
        for (size_t i = 0; i < m->args.size(); ++i) child(m->args[i], static_cast<int>(i) + 1);
    } else if (const auto* s = e->as<SubscriptE>()) {
        child(s->base, 0);
        child(s->index, 1);
    } else if (const auto* s = e->as<SliceE>()) {
        child(s->base, 0);
        child(s->lo, 1);
        child(s->hi, 2);
        child(s->step, 3);
    } else if (const auto* l = e->as<ListE>()) {
        for (size_t i = 0; i < l->items.size(); ++i) child(l->items[i], static_cast<int>(i));
    }
}

}  // namespace

void walk_expr(const ExprPtr& e, const ExprVisitor& fn) {
    std::vector<int> path;
    walk_rec(e, path, fn);
}

ExprPtr child_at(const ExprPtr& e, int slot) {
    if (!e) return nullptr;
    if (const auto* b = e->as<BinE>()) return slot == 0 ? b->lhs : slot == 1 ? b->rhs : nullptr;
    if (const auto* u = e->as<UnE>()) return slot == 0 ? u->operand : nullptr;
    if (const auto* c = e->as<CallE>())
        return slot >= 0 && slot < static_cast<int>(c->args.size()) ? c->args[slot] : nullptr;
    if (const auto* m = e->as<MethodE>()) {
        if (slot == 0) return m->base;
        int i = slot - 1;
        return i >= 0 && i < static_cast<int>(m->args.size()) ? m->args[i] : nullptr;
    }
    if (const auto* s = e->as<SubscriptE>()) return slot == 0 ? s->base : slot == 1 ? s->index : nullptr;
    if (const auto* s = e->as<SliceE>()) {
        switch (slot) {
            case 0: return s->base;
            case 1: return s->lo;
            case 2: return s->hi;
            case 3: return s->step;
        }
        return nullptr;
    }
    if (const auto* l = e->as<ListE>())
        return slot >= 0 && slot < static_cast<int>(l->items.size()) ? l->items[slot] : nullptr;
    return nullptr;
}

namespace {

ExprPtr rebuild(const ExprPtr& e, int slot, const ExprPtr& new_child) {
    if (const auto* b = e->as<BinE>()) {
        BinE n = *b;
        (slot == 0 ? n.lhs : n.rhs) = new_child;
        return make_expr(Expr{n});
    }
    if (const auto* u = e->as<UnE>()) {
        UnE n = *u;
        n.operand = new_child;
        return make_expr(Expr{n});
    }
    if (const auto* c = e->as<CallE>()) {
        CallE n = *c;
        n.args[static_cast<size_t>(slot)] = new_child;
        return make_expr(Expr{n});
    }
    if (const auto* m = e->as<MethodE>()) {
        MethodE n = *m;
        if (slot == 0)
            n.base = new_child;
        else
            n.args[static_cast<size_t>(slot - 1)] = new_child;
        return make_expr(Expr{n});
    }
    if (const auto* s = e->as<SubscriptE>()) {
        SubscriptE n = *s;
        (slot == 0 ? n.base : n.index) = new_child;
        return make_expr(Expr{n});
    }
    if (const auto* s = e->as<SliceE>()) {
        SliceE n = *s;
        switch (slot) {
            case 0: n.base = new_child; break;
            case 1: n.lo = new_child; break;
            case 2: n.hi = new_child; break;
            case 3: n.step = new_child; break;
        }
        return make_expr(Expr{n});
    }
    if (const auto* l = e->as<ListE>()) {
        ListE n = *l;
        n.items[static_cast<size_t>(slot)] = new_child;
        return make_expr(Expr{n});
    }
    return nullptr;
}

}  // namespace

ExprPtr replace_at(const ExprPtr& e, const std::vector<int>& path, const ExprPtr& replacement) {
    if (path.empty()) return replacement;
    std::function<ExprPtr(const ExprPtr&, size_t)> go = [&](const ExprPtr& node,
                                                            size_t depth) -> ExprPtr {
        if (!node) return nullptr;
        if (depth == path.size()) return replacement;
        ExprPtr cur = child_at(node, path[depth]);
        if (!cur) return nullptr;
        ExprPtr nc = go(cur, depth + 1);
        if (!nc) return nullptr;
        return rebuild(node, path[depth], nc);
    };
    return go(e, 0);
}

}  // namespace pyopt
