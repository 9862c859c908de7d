#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "pyopt/ast.hpp"
#include "pyopt/equivalence.hpp"
#include "pyopt/rewrite.hpp"

namespace pyopt {

enum class PerturbationKind { CP, CF, CP_CF };

// Seeded, deterministic inverse rewrites. Each applies 2..6 local steps and
// returns a program interpreter-equivalent to the input. Throws NoOpportunity
// when no legal site exists.
Program perturb_cp(const Program& p, uint64_t seed);
Program perturb_cf(const Program& p, uint64_t seed);
// perturb_cf then perturb_cp on the result.
Program perturb_both(const Program& p, uint64_t seed);

// Renames user functions to f1, f2, ... (definition order) and variables to
// short uninformative labels, consistently and capture-free. The name maps
// send original identifiers to their replacements.
struct Obfuscation {
    Program program;
    std::map<Ident, Ident> functions;
    // scope "" is the script scope; function scopes are keyed by the
    // function's name as it appears in the INPUT program.
    std::map<std::string, std::map<Ident, Ident>> names;
};
Obfuscation obfuscate_with_map(const Program& p, uint64_t seed);
Program obfuscate(const Program& p, uint64_t seed);

// Applies explicit renamings (the mechanism behind obfuscate). Inverting an
// Obfuscation's maps recovers the original program.
Program rename_identifiers(const Program& p, const std::map<Ident, Ident>& functions,
                           const std::map<std::string, std::map<Ident, Ident>>& scopes);

}  // namespace pyopt
