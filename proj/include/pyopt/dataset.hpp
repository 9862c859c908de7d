#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pyopt/ast.hpp"
#include "pyopt/bugs.hpp"
#include "pyopt/equivalence.hpp"

namespace pyopt {

// The fixed per-algorithm variant names, emission order.
const std::vector<std::string>& variant_names();  // ref, cp, cf, cp_cf, bug_*

struct VariantInfo {
    Program program;          // obfuscated, as emitted
    std::string entry;        // entry-function name inside `program`
    bool equivalent = true;   // label vs ref
    int witness_index = -1;   // bug variants: manifest case exposing the bug
    BugDescriptor bug;        // bug variants only
};

struct VariantSet {
    std::string algorithm;
    uint64_t seed = 0;
    std::map<std::string, VariantInfo> variants;  // keyed by variant name
    std::vector<std::string> provenance;          // perturbation/bug notes
};

// Builds the 8 variants for one algorithm. The manifest certifies labels:
// cp/cf/cp_cf must verify equivalent, bug_* non-equivalent.
VariantSet build_variant_set(const std::string& algorithm, const Program& ref,
                             const TestManifest& manifest, uint64_t seed);

struct DatasetReport {
    std::vector<std::string> algorithms;
    int files_written = 0;
    std::string root;
};

// Emits <out>/<algo>/{ref,cp,cf,cp_cf,bug_ref,bug_cp,bug_cf,bug_cp_cf}.py,
// labels.json and trace.txt per algorithm, plus a top-level dataset.json.
// Fully deterministic per seed; reruns are byte-identical.
DatasetReport build_dataset(const std::string& corpus_dir, const std::string& out_dir,
                            uint64_t seed);

// Corpus discovery: *.py files with a sibling *.manifest.json.
std::vector<std::string> corpus_algorithms(const std::string& corpus_dir);

uint64_t fnv1a(const std::string& text);

}  // namespace pyopt
