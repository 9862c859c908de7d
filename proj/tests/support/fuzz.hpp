#pragma once

#include <cstdint>

#include "pyopt/ast.hpp"
#include "pyopt/equivalence.hpp"

namespace pyopt::fuzz {

struct FuzzProgram {
    Program program;
    TestManifest manifest;
};

// A random subset program: one entry function over three small int
// parameters, with copies, foldable constants, guarded arithmetic, bounded
// loops and a little list traffic. Total on the manifest domain by
// construction (guarded divisors and indices, definite assignment).
FuzzProgram generate(uint64_t seed);

}  // namespace pyopt::fuzz
