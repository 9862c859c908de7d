#pragma once

#include <functional>
#include <map>
#include <vector>

#include "pyopt/ast.hpp"
#include "pyopt/copyset.hpp"
#include "pyopt/errors.hpp"

namespace pyopt {

struct CpEntry {
    CopySet pre, post;
};

// Statement-id -> (pre, post). post(S1) = pre(S2) for consecutive statements;
// loop entries additionally equal the stabilized loop invariant.
struct CpAnnotationMap {
    std::map<int, CpEntry> entries;

    const CpEntry& at(int id) const { return entries.at(id); }
    friend bool operator==(const CpAnnotationMap& a, const CpAnnotationMap& b);
};

// Observes successive fixpoint rounds (for monotonicity checks).
using CpRoundObserver =
    std::function<void(int round, const CpAnnotationMap& prev, const CpAnnotationMap& next)>;

// One judging pass over `s` from `pre` under the loop approximants in `prev`,
// recording (pre, post) for s and all sub-statements into `out`. Returns the
// post set. `proof` (optional) collects every copy set occurring in the proof.
CopySet judge_cp(const CopySet& pre, const Stmt& s, const CpAnnotationMap& prev,
                 CpAnnotationMap& out, std::vector<CopySet>* proof = nullptr);
CopySet judge_cp_seq(const CopySet& pre, const std::vector<Stmt>& body,
                     const CpAnnotationMap& prev, CpAnnotationMap& out,
                     std::vector<CopySet>* proof = nullptr);

// Least fixpoint of whole-program judging from all-empty annotations.
CpAnnotationMap infer_cp(const Program& p, const CpRoundObserver& observer = nullptr);

// Fixpoint over a statement sequence from a fixed entry set (used by the
// rewrite side conditions).
CpAnnotationMap infer_cp_seq(const std::vector<Stmt>& body, const CopySet& entry);

// Golden-format dump: one line per statement,
// "«stmt» ⊨ pre={...} post={...}", loop rows showing the loop invariant.
std::string dump_cp(const Program& p, const CpAnnotationMap& ann);

}  // namespace pyopt
