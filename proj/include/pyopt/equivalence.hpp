#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pyopt/ast.hpp"
#include "pyopt/interp.hpp"

namespace pyopt {

enum class CompareMode { Exact, Numeric };

// One equivalence-test case: entry-function arguments or an input tape.
struct TestCase {
    std::vector<Value> args;
    std::vector<std::string> input;
};

struct TestManifest {
    std::string entry;  // empty: script mode
    std::vector<TestCase> cases;
    long long fuel = 1'000'000;
    CompareMode compare = CompareMode::Exact;
    double tolerance = 1e-9;

    void validate() const;  // >= 20 cases, arity consistency
};

enum class Equivalence { Yes, No, Inconclusive };

struct Verdict {
    Equivalence equivalent = Equivalence::Yes;
    std::optional<size_t> witness;  // case index with differing outcomes
    std::string detail;

    bool yes() const { return equivalent == Equivalence::Yes; }
};

bool outcomes_equal(const Outcome& a, const Outcome& b, CompareMode mode, double tol);

// Resolves the entry function for a program: by name, else by the definition
// index the name holds in `reference` (renamed variants), else the only
// top-level definition. Returns empty for script mode.
std::string resolve_entry(const Program& p, const std::string& entry,
                          const Program* reference = nullptr);

Outcome run_case(const Program& p, const std::string& entry, const TestCase& c, long long fuel);

// Yes iff Outcomes agree on every case; No carries the first differing case;
// Inconclusive when fuel ran out on either side with no earlier difference.
Verdict equivalent(const Program& p1, const Program& p2, const TestManifest& m);

}  // namespace pyopt
