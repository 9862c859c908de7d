#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pyopt/ast.hpp"
#include "pyopt/value.hpp"

namespace pyopt {

// Literals consumed by successive input() calls. Reading past the end is a
// runtime error.
struct InputTape {
    std::vector<std::string> values;
};

enum class RunStatus { Normal, RuntimeError, FuelExhausted };

enum class ErrKind {
    None,
    DivByZero,
    UnboundVariable,
    IndexOutOfRange,
    TapeExhausted,
    TypeError,
    Overflow,
};

const char* err_kind_name(ErrKind k);

struct Outcome {
    std::vector<std::string> stdout_lines;
    std::optional<Value> result;
    RunStatus status = RunStatus::Normal;
    ErrKind error = ErrKind::None;
};

// Probe points for instrumented runs; `at_exit` false probes the statement
// entry, true the statement exit.
struct Probe {
    int stmt_id;
    Ident var;
    bool at_exit;
    auto operator<=>(const Probe&) const = default;
};

struct ProbeHit {
    Probe probe;
    bool bound;
    Value value;  // meaningful only when bound
};

struct ProbeLog {
    std::vector<ProbeHit> hits;
};

struct RunRequest {
    std::string entry;          // empty: run as a script
    std::vector<Value> args;    // entry-function arguments
    InputTape tape;
    long long fuel = 1'000'000;
};

// Big-step evaluation with Python-compatible semantics for the subset.
// Never throws for in-language failures; they land in Outcome::status.
Outcome run(const Program& p, const RunRequest& req);

// As run, logging the concrete value of each probed identifier every time
// control passes the probe point.
Outcome instrumented_run(const Program& p, const RunRequest& req,
                         const std::set<Probe>& probes, ProbeLog& log);

struct EvalResult {
    bool ok = false;
    Value value;
    ErrKind error = ErrKind::None;
};

// Evaluates a side-effect-free expression over the given constants. The
// expression must not contain input(), user calls or method calls.
EvalResult eval_pure_expr(const ExprPtr& e, const std::map<Ident, Value>& env,
                          long long fuel = 100'000);

}  // namespace pyopt
