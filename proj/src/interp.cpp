#include "pyopt/interp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "pyopt/syntax.hpp"

namespace pyopt {

const char* err_kind_name(ErrKind k) {
    switch (k) {
        case ErrKind::None: return "none";
        case ErrKind::DivByZero: return "div-by-zero";
        case ErrKind::UnboundVariable: return "unbound-variable";
        case ErrKind::IndexOutOfRange: return "index-out-of-range";
        case ErrKind::TapeExhausted: return "tape-exhausted";
        case ErrKind::TypeError: return "type-error";
        case ErrKind::Overflow: return "overflow";
    }
    return "?";
}

namespace {

struct RuntimeFault {
    ErrKind kind;
};
struct FuelOut {};

[[noreturn]] void fault(ErrKind kind) { throw RuntimeFault{kind}; }

long long as_index(const Value& v) {
    if (v.is_int()) return v.as_int();
    if (v.is_bool()) return v.as_bool() ? 1 : 0;
    fault(ErrKind::TypeError);
}

long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) fault(ErrKind::Overflow);
    return r;
}
long long checked_sub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r)) fault(ErrKind::Overflow);
    return r;
}
long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) fault(ErrKind::Overflow);
    return r;
}

long long floor_div_ll(long long a, long long b) {
    if (b == 0) fault(ErrKind::DivByZero);
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long long mod_ll(long long a, long long b) {
    if (b == 0) fault(ErrKind::DivByZero);
    long long r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) r += b;
    return r;
}

class Engine {
public:
    Engine(const Program& p, const RunRequest& req, const std::set<Probe>* probes, ProbeLog* log)
        : program_(p), req_(req), probes_(probes), log_(log), fuel_(req.fuel) {}

    Value eval_in(const ExprPtr& e, const std::map<Ident, Value>& env) {
        Env frame(env.begin(), env.end());
        return eval(e, frame);
    }

    Outcome execute() {
        Outcome out;
        try {
            Value ret;
            run_block(program_.body, script_env_, &ret);
            if (!req_.entry.empty()) {
                auto it = functions_.find(req_.entry);
                if (it == functions_.end()) fault(ErrKind::UnboundVariable);
                out.result = call_function(*it->second, req_.args);
            }
            out.status = RunStatus::Normal;
        } catch (const RuntimeFault& f) {
            out.status = RunStatus::RuntimeError;
            out.error = f.kind;
        } catch (const FuelOut&) {
            out.status = RunStatus::FuelExhausted;
        }
        out.stdout_lines = std::move(stdout_);
        return out;
    }

private:
    using Env = std::map<Ident, Value>;

    void burn(long long n = 1) {
        fuel_ -= n;
        if (fuel_ < 0) throw FuelOut{};
    }

    void probe(const Stmt& s, Env& env, bool at_exit) {
        if (!probes_) return;
        auto lo = probes_->lower_bound(Probe{s.id, "", at_exit});
        for (auto it = lo; it != probes_->end() && it->stmt_id == s.id; ++it) {
            if (it->at_exit != at_exit) continue;
            ProbeHit hit;
            hit.probe = *it;
            auto found = env.find(it->var);
            hit.bound = found != env.end();
            if (hit.bound) hit.value = found->second;
            log_->hits.push_back(hit);
        }
    }

    // Returns true if a return was executed; *ret holds the value.
    bool run_block(const std::vector<Stmt>& body, Env& env, Value* ret) {
        for (const auto& s : body)
            if (run_stmt(s, env, ret)) return true;
        return false;
    }

    bool run_stmt(const Stmt& s, Env& env, Value* ret) {
        burn();
        probe(s, env, false);
        bool returned = false;
        switch (s.kind) {
            case StmtKind::Assign:
                env[s.target] = eval(s.value, env);
                break;
            case StmtKind::SubscriptAssign: {
                auto it = env.find(s.target);
                if (it == env.end()) fault(ErrKind::UnboundVariable);
                Value idx = eval(s.index, env);
                Value val = eval(s.value, env);
                subscript_store(it->second, idx, val);
                break;
            }
            case StmtKind::ExprStmt:
                eval(s.value, env);
                break;
            case StmtKind::Return:
                *ret = s.value ? eval(s.value, env) : Value::none();
                returned = true;
                break;
            case StmtKind::Pass:
                break;
            case StmtKind::If:
                if (eval(s.value, env).truthy())
                    returned = run_block(s.body, env, ret);
                else
                    returned = run_block(s.orelse, env, ret);
                break;
            case StmtKind::While:
                while (true) {
                    burn();
                    if (!eval(s.value, env).truthy()) break;
                    if (run_block(s.body, env, ret)) { returned = true; break; }
                }
                break;
            case StmtKind::For: {
                Value iterable = eval(s.value, env);
                if (!iterable.is_list()) fault(ErrKind::TypeError);
                ListHandle items = iterable.as_list();
                for (size_t i = 0; i < items->size(); ++i) {
                    burn();
                    env[s.target] = (*items)[i];
                    if (run_block(s.body, env, ret)) { returned = true; break; }
                }
                break;
            }
            case StmtKind::FunDef:
                functions_[s.target] = &s;
                break;
        }
        if (!returned) probe(s, env, true);
        return returned;
    }

    Value call_function(const Stmt& def, const std::vector<Value>& args) {
        burn();
        if (args.size() != def.params.size()) fault(ErrKind::TypeError);
        if (++call_depth_ > 512) fault(ErrKind::Overflow);
        Env frame;
        for (size_t i = 0; i < args.size(); ++i) frame[def.params[i]] = args[i];
        Value ret = Value::none();
        run_block(def.body, frame, &ret);
        --call_depth_;
        return ret;
    }

    Value eval(const ExprPtr& e, Env& env) {
        burn();
        struct V {
            Engine& self;
            Env& env;
            Value operator()(const ConstE& c) const {
                switch (c.value.type) {
                    case Literal::Type::Int: return Value::of(c.value.i);
                    case Literal::Type::Bool: return Value::of(c.value.b);
                    case Literal::Type::Float: return Value::of(c.value.f);
                    case Literal::Type::Str: return Value::of(c.value.s);
                }
                return Value::none();
            }
            Value operator()(const VarE& v) const {
                auto it = env.find(v.name);
                if (it == env.end()) fault(ErrKind::UnboundVariable);
                return it->second;
            }
            Value operator()(const BinE& b) const {
                if (b.op == BinOp::And) {
                    Value lhs = self.eval(b.lhs, env);
                    return lhs.truthy() ? self.eval(b.rhs, env) : lhs;
                }
                if (b.op == BinOp::Or) {
                    Value lhs = self.eval(b.lhs, env);
                    return lhs.truthy() ? lhs : self.eval(b.rhs, env);
                }
                Value lhs = self.eval(b.lhs, env);
                Value rhs = self.eval(b.rhs, env);
                return self.binary(b.op, lhs, rhs);
            }
            Value operator()(const UnE& u) const {
                Value v = self.eval(u.operand, env);
                if (u.op == UnOp::Not) return Value::of(!v.truthy());
                if (v.is_int()) return Value::of(checked_sub(0, v.as_int()));
                if (v.is_bool()) return Value::of(static_cast<long long>(v.as_bool() ? -1 : 0));
                if (v.is_float()) return Value::of(-v.as_float());
                fault(ErrKind::TypeError);
            }
            Value operator()(const CallE& c) const { return self.call(c, env); }
            Value operator()(const MethodE& m) const { return self.method(m, env); }
            Value operator()(const SubscriptE& s) const {
                Value base = self.eval(s.base, env);
                Value idx = self.eval(s.index, env);
                return self.subscript_load(base, idx);
            }
            Value operator()(const SliceE& s) const { return self.slice(s, env); }
            Value operator()(const ListE& l) const {
                std::vector<Value> items;
                items.reserve(l.items.size());
                for (const auto& i : l.items) items.push_back(self.eval(i, env));
                return Value::list(std::move(items));
            }
            Value operator()(const DictE&) const { return Value::dict(); }
        };
        return std::visit(V{*this, env}, e->node);
    }

    Value binary(BinOp op, const Value& a, const Value& b) {
        switch (op) {
            case BinOp::Eq: return Value::of(py_eq(a, b));
            case BinOp::Ne: return Value::of(!py_eq(a, b));
            case BinOp::Lt: return Value::of(compare(a, b) < 0);
            case BinOp::Le: return Value::of(compare(a, b) <= 0);
            case BinOp::Gt: return Value::of(compare(a, b) > 0);
            case BinOp::Ge: return Value::of(compare(a, b) >= 0);
            default: break;
        }
        return arith(op, a, b);
    }

    static bool int_like(const Value& v) { return v.is_int() || v.is_bool(); }
    static long long to_ll(const Value& v) { return v.is_bool() ? (v.as_bool() ? 1 : 0) : v.as_int(); }

    Value arith(BinOp op, const Value& a, const Value& b) {
        if (op == BinOp::Add) {
            if (a.is_str() && b.is_str()) return Value::of(a.as_str() + b.as_str());
            if (a.is_list() && b.is_list()) {
                std::vector<Value> items = *a.as_list();
                items.insert(items.end(), b.as_list()->begin(), b.as_list()->end());
                return Value::list(std::move(items));
            }
        }
        if (op == BinOp::Mul) {
            const Value* seq = nullptr;
            const Value* num = nullptr;
            if ((a.is_str() || a.is_list()) && int_like(b)) { seq = &a; num = &b; }
            else if ((b.is_str() || b.is_list()) && int_like(a)) { seq = &b; num = &a; }
            if (seq) {
                long long n = std::max<long long>(0, to_ll(*num));
                if (seq->is_str()) {
                    if (n * static_cast<long long>(seq->as_str().size()) > 10'000'000) fault(ErrKind::Overflow);
                    std::string out;
                    for (long long i = 0; i < n; ++i) out += seq->as_str();
                    return Value::of(out);
                }
                if (n * static_cast<long long>(seq->as_list()->size()) > 10'000'000) fault(ErrKind::Overflow);
                std::vector<Value> items;
                for (long long i = 0; i < n; ++i)
                    items.insert(items.end(), seq->as_list()->begin(), seq->as_list()->end());
                return Value::list(std::move(items));
            }
        }
        if (!a.is_numeric() || !b.is_numeric()) fault(ErrKind::TypeError);
        bool use_float = a.is_float() || b.is_float() || op == BinOp::TrueDiv;
        if (op == BinOp::Pow) return power(a, b);
        if (use_float) {
            double x = a.numeric(), y = b.numeric();
            switch (op) {
                case BinOp::Add: return Value::of(x + y);
                case BinOp::Sub: return Value::of(x - y);
                case BinOp::Mul: return Value::of(x * y);
                case BinOp::TrueDiv:
                    if (y == 0.0) fault(ErrKind::DivByZero);
                    return Value::of(x / y);
                case BinOp::FloorDiv:
                    if (y == 0.0) fault(ErrKind::DivByZero);
                    return Value::of(std::floor(x / y));
                case BinOp::Mod: {
                    if (y == 0.0) fault(ErrKind::DivByZero);
                    double r = std::fmod(x, y);
                    if (r != 0.0 && ((r < 0) != (y < 0))) r += y;
                    return Value::of(r);
                }
                default: fault(ErrKind::TypeError);
            }
        }
        long long x = to_ll(a), y = to_ll(b);
        switch (op) {
            case BinOp::Add: return Value::of(checked_add(x, y));
            case BinOp::Sub: return Value::of(checked_sub(x, y));
            case BinOp::Mul: return Value::of(checked_mul(x, y));
            case BinOp::FloorDiv: return Value::of(floor_div_ll(x, y));
            case BinOp::Mod: return Value::of(mod_ll(x, y));
            default: fault(ErrKind::TypeError);
        }
    }

    Value power(const Value& a, const Value& b) {
        if (a.is_float() || b.is_float() || (int_like(b) && to_ll(b) < 0)) {
            double base = a.numeric(), exp = b.numeric();
            if (base == 0.0 && exp < 0) fault(ErrKind::DivByZero);
            double r = std::pow(base, exp);
            if (std::isnan(r) && !std::isnan(base) && !std::isnan(exp)) fault(ErrKind::TypeError);
            return Value::of(r);
        }
        long long base = to_ll(a), exp = to_ll(b);
        long long result = 1;
        for (long long i = 0; i < exp; ++i) result = checked_mul(result, base);
        return Value::of(result);
    }

    // Three-way ordering for <, <=, >, >=; mixed kinds are a type error.
    int compare(const Value& a, const Value& b) {
        if (a.is_numeric() && b.is_numeric()) {
            double x = a.numeric(), y = b.numeric();
            if (x < y) return -1;
            if (x > y) return 1;
            return 0;
        }
        if (a.is_str() && b.is_str()) return a.as_str().compare(b.as_str());
        if (a.is_list() && b.is_list()) {
            const auto& x = *a.as_list();
            const auto& y = *b.as_list();
            for (size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
                int c = compare(x[i], y[i]);
                if (c != 0) return c;
            }
            return x.size() < y.size() ? -1 : (x.size() > y.size() ? 1 : 0);
        }
        fault(ErrKind::TypeError);
    }

    static long long normalize_index(long long i, long long n, bool clamp) {
        if (i < 0) i += n;
        if (clamp) {
            if (i < 0) i = 0;
            if (i > n) i = n;
        }
        return i;
    }

    Value subscript_load(const Value& base, const Value& idx) {
        if (base.is_list()) {
            const auto& items = *base.as_list();
            long long i = normalize_index(as_index(idx), static_cast<long long>(items.size()), false);
            if (i < 0 || i >= static_cast<long long>(items.size())) fault(ErrKind::IndexOutOfRange);
            return items[static_cast<size_t>(i)];
        }
        if (base.is_str()) {
            const auto& s = base.as_str();
            long long i = normalize_index(as_index(idx), static_cast<long long>(s.size()), false);
            if (i < 0 || i >= static_cast<long long>(s.size())) fault(ErrKind::IndexOutOfRange);
            return Value::of(std::string(1, s[static_cast<size_t>(i)]));
        }
        if (base.is_dict()) {
            for (const auto& [k, v] : base.as_dict()->items)
                if (py_eq(k, idx)) return v;
            fault(ErrKind::IndexOutOfRange);
        }
        fault(ErrKind::TypeError);
    }

    void subscript_store(Value& base, const Value& idx, const Value& val) {
        if (base.is_list()) {
            auto& items = *base.as_list();
            long long i = normalize_index(as_index(idx), static_cast<long long>(items.size()), false);
            if (i < 0 || i >= static_cast<long long>(items.size())) fault(ErrKind::IndexOutOfRange);
            items[static_cast<size_t>(i)] = val;
            return;
        }
        if (base.is_dict()) {
            if (!(idx.is_int() || idx.is_bool() || idx.is_float() || idx.is_str()))
                fault(ErrKind::TypeError);
            for (auto& [k, v] : base.as_dict()->items) {
                if (py_eq(k, idx)) {
                    v = val;
                    return;
                }
            }
            base.as_dict()->items.emplace_back(idx, val);
            return;
        }
        fault(ErrKind::TypeError);
    }

    Value slice(const SliceE& s, Env& env) {
        Value base = eval(s.base, env);
        long long n;
        if (base.is_list()) n = static_cast<long long>(base.as_list()->size());
        else if (base.is_str()) n = static_cast<long long>(base.as_str().size());
        else fault(ErrKind::TypeError);

        long long step = s.step ? as_index(eval(s.step, env)) : 1;
        if (step == 0) fault(ErrKind::TypeError);
        long long lo, hi;
        if (step > 0) {
            lo = s.lo ? normalize_index(as_index(eval(s.lo, env)), n, true) : 0;
            hi = s.hi ? normalize_index(as_index(eval(s.hi, env)), n, true) : n;
        } else {
            if (s.lo) {
                lo = as_index(eval(s.lo, env));
                if (lo < 0) lo += n;
                if (lo >= n) lo = n - 1;
            } else {
                lo = n - 1;
            }
            if (s.hi) {
                hi = as_index(eval(s.hi, env));
                if (hi < 0) hi += n;
                if (hi < -1) hi = -1;
            } else {
                hi = -1;
            }
        }
        auto indices = [&]() {
            std::vector<long long> ix;
            if (step > 0)
                for (long long i = lo; i < hi; i += step) ix.push_back(i);
            else
                for (long long i = lo; i > hi; i += step) ix.push_back(i);
            return ix;
        }();
        if (base.is_str()) {
            std::string out;
            for (long long i : indices)
                if (i >= 0 && i < n) out += base.as_str()[static_cast<size_t>(i)];
            return Value::of(out);
        }
        std::vector<Value> out;
        for (long long i : indices)
            if (i >= 0 && i < n) out.push_back((*base.as_list())[static_cast<size_t>(i)]);
        return Value::list(std::move(out));
    }

    Value call(const CallE& c, Env& env) {
        if (!is_builtin(c.callee)) {
            auto it = functions_.find(c.callee);
            if (it == functions_.end()) fault(ErrKind::UnboundVariable);
            std::vector<Value> args;
            args.reserve(c.args.size());
            for (const auto& a : c.args) args.push_back(eval(a, env));
            return call_function(*it->second, args);
        }
        std::vector<Value> args;
        args.reserve(c.args.size());
        for (const auto& a : c.args) args.push_back(eval(a, env));
        return builtin(c.callee, args);
    }

    Value builtin(const Ident& name, const std::vector<Value>& args) {
        if (name == "print") {
            std::string line;
            for (size_t i = 0; i < args.size(); ++i) {
                if (i) line += ' ';
                line += str_value(args[i]);
            }
            stdout_.push_back(std::move(line));
            return Value::none();
        }
        if (name == "input") {
            if (!args.empty()) fault(ErrKind::TypeError);
            if (tape_pos_ >= req_.tape.values.size()) fault(ErrKind::TapeExhausted);
            return Value::of(req_.tape.values[tape_pos_++]);
        }
        if (name == "int") {
            if (args.size() != 1) fault(ErrKind::TypeError);
            const Value& v = args[0];
            if (v.is_int()) return v;
            if (v.is_bool()) return Value::of(static_cast<long long>(v.as_bool() ? 1 : 0));
            if (v.is_float()) {
                double t = std::trunc(v.as_float());
                if (std::abs(t) > 9.2e18) fault(ErrKind::Overflow);
                return Value::of(static_cast<long long>(t));
            }
            if (v.is_str()) {
                const std::string& s = v.as_str();
                size_t i = 0, j = s.size();
                while (i < j && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
                while (j > i && std::isspace(static_cast<unsigned char>(s[j - 1]))) --j;
                std::string t = s.substr(i, j - i);
                if (t.empty()) fault(ErrKind::TypeError);
                size_t k = (t[0] == '+' || t[0] == '-') ? 1 : 0;
                if (k == t.size()) fault(ErrKind::TypeError);
                for (size_t m = k; m < t.size(); ++m)
                    if (!std::isdigit(static_cast<unsigned char>(t[m]))) fault(ErrKind::TypeError);
                errno = 0;
                long long r = std::strtoll(t.c_str(), nullptr, 10);
                if (errno == ERANGE) fault(ErrKind::Overflow);
                return Value::of(r);
            }
            fault(ErrKind::TypeError);
        }
        if (name == "float") {
            if (args.size() != 1) fault(ErrKind::TypeError);
            const Value& v = args[0];
            if (v.is_float()) return v;
            if (v.is_numeric()) return Value::of(v.numeric());
            if (v.is_str()) {
                char* end = nullptr;
                const std::string& s = v.as_str();
                double r = std::strtod(s.c_str(), &end);
                while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
                if (!end || *end != '\0' || s.empty()) fault(ErrKind::TypeError);
                return Value::of(r);
            }
            fault(ErrKind::TypeError);
        }
        if (name == "str") {
            if (args.size() != 1) fault(ErrKind::TypeError);
            return Value::of(str_value(args[0]));
        }
        if (name == "len") {
            if (args.size() != 1) fault(ErrKind::TypeError);
            const Value& v = args[0];
            if (v.is_str()) return Value::of(static_cast<long long>(v.as_str().size()));
            if (v.is_list()) return Value::of(static_cast<long long>(v.as_list()->size()));
            if (v.is_dict()) return Value::of(static_cast<long long>(v.as_dict()->items.size()));
            fault(ErrKind::TypeError);
        }
        if (name == "range") {
            long long start = 0, stop = 0, step = 1;
            if (args.size() == 1) stop = as_index(args[0]);
            else if (args.size() == 2) { start = as_index(args[0]); stop = as_index(args[1]); }
            else if (args.size() == 3) {
                start = as_index(args[0]);
                stop = as_index(args[1]);
                step = as_index(args[2]);
                if (step == 0) fault(ErrKind::TypeError);
            } else fault(ErrKind::TypeError);
            std::vector<Value> out;
            if (step > 0)
                for (long long i = start; i < stop; i += step) { burn(); out.push_back(Value::of(i)); }
            else
                for (long long i = start; i > stop; i += step) { burn(); out.push_back(Value::of(i)); }
            return Value::list(std::move(out));
        }
        if (name == "abs") {
            if (args.size() != 1) fault(ErrKind::TypeError);
            const Value& v = args[0];
            if (v.is_int()) return Value::of(v.as_int() < 0 ? checked_sub(0, v.as_int()) : v.as_int());
            if (v.is_bool()) return Value::of(static_cast<long long>(v.as_bool() ? 1 : 0));
            if (v.is_float()) return Value::of(std::abs(v.as_float()));
            fault(ErrKind::TypeError);
        }
        if (name == "min" || name == "max") {
            std::vector<Value> pool;
            if (args.size() == 1 && args[0].is_list()) pool = *args[0].as_list();
            else pool = args;
            if (pool.empty()) fault(ErrKind::TypeError);
            Value best = pool[0];
            for (size_t i = 1; i < pool.size(); ++i) {
                int c = compare(pool[i], best);
                if ((name == "min" && c < 0) || (name == "max" && c > 0)) best = pool[i];
            }
            return best;
        }
        fault(ErrKind::TypeError);
    }

    Value method(const MethodE& m, Env& env) {
        Value base = eval(m.base, env);
        std::vector<Value> args;
        args.reserve(m.args.size());
        for (const auto& a : m.args) args.push_back(eval(a, env));

        if (base.is_list()) {
            auto& items = *base.as_list();
            if (m.method == "append") {
                if (args.size() != 1) fault(ErrKind::TypeError);
                items.push_back(args[0]);
                return Value::none();
            }
            if (m.method == "pop") {
                if (args.size() > 1) fault(ErrKind::TypeError);
                if (items.empty()) fault(ErrKind::IndexOutOfRange);
                long long i = args.empty() ? static_cast<long long>(items.size()) - 1
                                           : normalize_index(as_index(args[0]),
                                                             static_cast<long long>(items.size()), false);
                if (i < 0 || i >= static_cast<long long>(items.size())) fault(ErrKind::IndexOutOfRange);
                Value out = items[static_cast<size_t>(i)];
                items.erase(items.begin() + static_cast<long long>(i));
                return out;
            }
            if (m.method == "insert") {
                if (args.size() != 2) fault(ErrKind::TypeError);
                long long i = as_index(args[0]);
                long long n = static_cast<long long>(items.size());
                if (i < 0) i += n;
                if (i < 0) i = 0;
                if (i > n) i = n;
                items.insert(items.begin() + i, args[1]);
                return Value::none();
            }
            if (m.method == "remove") {
                if (args.size() != 1) fault(ErrKind::TypeError);
                for (size_t i = 0; i < items.size(); ++i) {
                    if (py_eq(items[i], args[0])) {
                        items.erase(items.begin() + static_cast<long long>(i));
                        return Value::none();
                    }
                }
                fault(ErrKind::TypeError);
            }
            if (m.method == "extend") {
                if (args.size() != 1 || !args[0].is_list()) fault(ErrKind::TypeError);
                const auto src = *args[0].as_list();
                items.insert(items.end(), src.begin(), src.end());
                return Value::none();
            }
            if (m.method == "sort") {
                if (!args.empty()) fault(ErrKind::TypeError);
                // Python's sort is stable.
                std::stable_sort(items.begin(), items.end(),
                                 [this](const Value& a, const Value& b) { return compare(a, b) < 0; });
                return Value::none();
            }
            if (m.method == "reverse") {
                std::reverse(items.begin(), items.end());
                return Value::none();
            }
            if (m.method == "index") {
                if (args.size() != 1) fault(ErrKind::TypeError);
                for (size_t i = 0; i < items.size(); ++i)
                    if (py_eq(items[i], args[0])) return Value::of(static_cast<long long>(i));
                fault(ErrKind::TypeError);
            }
            if (m.method == "count") {
                if (args.size() != 1) fault(ErrKind::TypeError);
                long long n = 0;
                for (const auto& it : items)
                    if (py_eq(it, args[0])) ++n;
                return Value::of(n);
            }
            if (m.method == "copy") {
                if (!args.empty()) fault(ErrKind::TypeError);
                return Value::list(items);
            }
            fault(ErrKind::TypeError);
        }
        if (base.is_dict()) {
            auto& d = *base.as_dict();
            if (m.method == "get") {
                if (args.empty() || args.size() > 2) fault(ErrKind::TypeError);
                for (const auto& [k, v] : d.items)
                    if (py_eq(k, args[0])) return v;
                return args.size() == 2 ? args[1] : Value::none();
            }
            if (m.method == "update") {
                if (args.size() != 1 || !args[0].is_dict()) fault(ErrKind::TypeError);
                for (const auto& [k, v] : args[0].as_dict()->items) {
                    bool found = false;
                    for (auto& [k2, v2] : d.items) {
                        if (py_eq(k2, k)) {
                            v2 = v;
                            found = true;
                            break;
                        }
                    }
                    if (!found) d.items.emplace_back(k, v);
                }
                return Value::none();
            }
            if (m.method == "copy") {
                Value out = Value::dict();
                out.as_dict()->items = d.items;
                return out;
            }
            fault(ErrKind::TypeError);
        }
        fault(ErrKind::TypeError);
    }

    const Program& program_;
    const RunRequest& req_;
    const std::set<Probe>* probes_;
    ProbeLog* log_;
    long long fuel_;
    size_t tape_pos_ = 0;
    int call_depth_ = 0;
    Env script_env_;
    std::map<Ident, const Stmt*> functions_;
    std::vector<std::string> stdout_;
};

}  // namespace

Outcome run(const Program& p, const RunRequest& req) {
    Engine engine(p, req, nullptr, nullptr);
    return engine.execute();
}

Outcome instrumented_run(const Program& p, const RunRequest& req,
                         const std::set<Probe>& probes, ProbeLog& log) {
    Engine engine(p, req, &probes, &log);
    return engine.execute();
}

EvalResult eval_pure_expr(const ExprPtr& e, const std::map<Ident, Value>& env, long long fuel) {
    static const Program empty_program;
    RunRequest req;
    req.fuel = fuel;
    Engine engine(empty_program, req, nullptr, nullptr);
    EvalResult out;
    try {
        out.value = engine.eval_in(e, env);
        out.ok = true;
    } catch (const RuntimeFault& f) {
        out.error = f.kind;
    } catch (const FuelOut&) {
        out.error = ErrKind::Overflow;
    }
    return out;
}

}  // namespace pyopt
