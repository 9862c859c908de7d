#pragma once

#include <string>

#include "pyopt/equivalence.hpp"

namespace pyopt {

// Manifest file schema (JSON):
//   {
//     "entry": "fib" | "",          // "" or missing: script mode
//     "fuel": 1000000,
//     "compare": "exact" | "numeric",
//     "tolerance": 1e-9,
//     "cases": [ {"args": [3, [1, 2]]}, {"input": ["5"]} ]
//   }
// Case values are JSON scalars/arrays; integers stay ints, doubles floats.
TestManifest load_manifest(const std::string& path);
TestManifest parse_manifest(const std::string& json_text);

}  // namespace pyopt
