#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pyopt/ast.hpp"
#include "pyopt/cf_analysis.hpp"
#include "pyopt/cp_analysis.hpp"
#include "pyopt/syntax.hpp"

namespace pyopt {

enum class RuleId {
    CP1, CP2, CP3, CP4, CP5,
    CF1, CF2, CF3a, CF3b,
    CF4IfT, CF4IfF, CF4While, CF4For,
    GC,
};

const char* rule_name(RuleId r);

// Where a step applied. stmt_id (and aux_id for two-statement rules) refer to
// ids in the program state immediately before the step. For CF1, aux_id
// selects the folded expression position (0 = value, 1 = index).
struct RewriteSite {
    int stmt_id = -1;
    int aux_id = -1;
};

struct RewriteStep {
    RuleId rule;
    RewriteSite site;
    std::string before, after;  // printed fragments
};

struct Trace {
    std::vector<RewriteStep> steps;
    bool changed() const { return !steps.empty(); }
    // "step N: RULE at stmt K: «before» => «after»" per line.
    std::string to_text() const;
};

// Copy-propagation rules to a fixpoint (rule order 1, 3, 4, 5, 2; top-down),
// re-inferring annotations after every step.
std::pair<Program, Trace> apply_cp(const Program& p);

// Constant-folding rules to a fixpoint (rule order 4, 2, 1, 3b, 3a).
std::pair<Program, Trace> apply_cf(const Program& p);

// Removes pure assignments whose target is dead in the continuation.
std::pair<Program, Trace> garbage_collect(const Program& p);

// Alternates apply_cf, apply_cp, garbage_collect until a full round changes
// nothing. Throws NormalizationDiverged after 64 rounds.
std::pair<Program, Trace> normalize(const Program& p);

// Mechanically re-applies recorded steps; reproduces the rewrite output.
Program replay(const Program& p, const Trace& trace);

// Dead-variable analysis used by garbage_collect: live-out set per statement,
// loop back-edges included.
std::map<int, IdentSet> compute_live_out(const Program& p);

}  // namespace pyopt
