#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "pyopt/ast.hpp"
#include "pyopt/errors.hpp"

namespace pyopt {

// Per-variable lattice value: a known constant, ⊤ (unknown), or ? (error).
// Top carries an internal int-ness hint used only by the rewriter's
// arithmetic normalization; it never shows in dumps.
struct AbstractValue {
    enum class Kind { Const, Top, Err };
    Kind kind = Kind::Top;
    Literal value;       // Const only
    bool int_hint = false;  // Top only: the runtime value is a genuine int

    static AbstractValue constant(Literal v) { return {Kind::Const, std::move(v), false}; }
    static AbstractValue top(bool int_hint = false) { return {Kind::Top, {}, int_hint}; }
    static AbstractValue err() { return {Kind::Err, {}, false}; }

    bool is_const() const { return kind == Kind::Const; }
    bool is_top() const { return kind == Kind::Top; }
    bool is_err() const { return kind == Kind::Err; }

    friend bool operator==(const AbstractValue& a, const AbstractValue& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::Const) return a.value == b.value;
        if (a.kind == Kind::Top) return a.int_hint == b.int_hint;
        return true;
    }

    std::string to_string() const;  // "1", "⊤", "?"
};

// m1 if equal; ? if either side is ?; ⊤ otherwise.
AbstractValue join_value(const AbstractValue& a, const AbstractValue& b);

// Finite map identifier -> AbstractValue; absence means "no value".
struct AbstractMemory {
    std::map<Ident, AbstractValue> bindings;

    const AbstractValue* lookup(const Ident& x) const {
        auto it = bindings.find(x);
        return it == bindings.end() ? nullptr : &it->second;
    }
    AbstractMemory without(const Ident& x) const {
        AbstractMemory out = *this;
        out.bindings.erase(x);
        return out;
    }
    AbstractMemory with(const Ident& x, AbstractValue v) const {
        AbstractMemory out = *this;
        out.bindings[x] = std::move(v);
        return out;
    }

    friend bool operator==(const AbstractMemory& a, const AbstractMemory& b) {
        return a.bindings == b.bindings;
    }

    std::string to_string() const;  // "m:1, n:⊤, tmp:?" sorted by identifier
};

// Pointwise join on shared identifiers; one-sided bindings are kept.
AbstractMemory join_memory(const AbstractMemory& a, const AbstractMemory& b);

// ? if any variable of e is unbound or ?; ⊤ if any variable is ⊤ or e contains
// input(), a user call, or a non-whitelisted builtin; otherwise the concrete
// value (evaluation faults yield ?, non-scalar results yield ⊤).
AbstractValue abstract_eval(const ExprPtr& e, const AbstractMemory& mem);

// True when e is statically known to evaluate to a genuine int (bools do not
// count).
bool abstract_int_typed(const ExprPtr& e, const AbstractMemory& mem);

// Known length of a for-iterable (range over constants, list literal).
std::optional<long long> iterable_length(const ExprPtr& e, const AbstractMemory& mem);

struct CfEntry {
    AbstractMemory pre, post;
};

struct CfAnnotationMap {
    std::map<int, CfEntry> entries;

    const CfEntry& at(int id) const { return entries.at(id); }
    friend bool operator==(const CfAnnotationMap& a, const CfAnnotationMap& b) {
        return a.entries.size() == b.entries.size() &&
               std::equal(a.entries.begin(), a.entries.end(), b.entries.begin(),
                          [](const auto& x, const auto& y) {
                              return x.first == y.first && x.second.pre == y.second.pre &&
                                     x.second.post == y.second.post;
                          });
    }
};

using CfRoundObserver =
    std::function<void(int round, const CfAnnotationMap& prev, const CfAnnotationMap& next)>;

AbstractMemory judge_cf(const AbstractMemory& pre, const Stmt& s, const CfAnnotationMap& prev,
                        CfAnnotationMap& out);
AbstractMemory judge_cf_seq(const AbstractMemory& pre, const std::vector<Stmt>& body,
                            const CfAnnotationMap& prev, CfAnnotationMap& out);

CfAnnotationMap infer_cf(const Program& p, const CfRoundObserver& observer = nullptr);

std::string dump_cf(const Program& p, const CfAnnotationMap& ann);

}  // namespace pyopt
