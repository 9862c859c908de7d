#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pyopt/equivalence.hpp"

namespace pyopt::host {

bool python_available();

struct CaseResult {
    bool error = false;
    std::string error_class;  // Python exception class name
    std::string repr;         // repr(result) when no error
    std::vector<std::string> printed;  // program stdout before the marker
};

// Runs the program text under python3, calling `entry` once per case, and
// returns one result per case.
std::vector<CaseResult> run_function_cases(const std::string& program_text,
                                           const std::string& entry,
                                           const std::vector<TestCase>& cases);

// Runs the program text as a script with the given stdin tape.
struct ScriptResult {
    int exit_code = 0;
    std::vector<std::string> stdout_lines;
};
ScriptResult run_script(const std::string& program_text, const std::vector<std::string>& tape);

// Maps a Python exception class to the interpreter's error kind.
ErrKind error_kind_of(const std::string& exception_class);

}  // namespace pyopt::host
