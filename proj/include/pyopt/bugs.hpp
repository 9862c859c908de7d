#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "pyopt/ast.hpp"
#include "pyopt/equivalence.hpp"

namespace pyopt {

// One seeded semantic-breaking mutation plus the manifest case exposing it.
struct BugDescriptor {
    std::string kind;  // off-by-one-bound | comparison-flip | wrong-variable |
                       // swapped-operands | index-shift | constant-tweak
    int stmt_id = -1;
    std::string before, after;
    size_t witness_index = 0;
};

// Applies one mutation from the catalog and certifies non-equivalence against
// p on the manifest; tries further seeded sites (up to 50) until a killable
// mutant is found. Throws NoKillableMutant otherwise.
std::pair<Program, BugDescriptor> inject_bug(const Program& p, uint64_t seed,
                                             const TestManifest& m);

}  // namespace pyopt
