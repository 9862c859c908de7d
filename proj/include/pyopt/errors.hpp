#pragma once

#include <stdexcept>
#include <string>

namespace pyopt {

struct SyntaxError : std::runtime_error {
    int line, column;
    SyntaxError(int line, int column, const std::string& message)
        : std::runtime_error("syntax error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + message),
          line(line), column(column) {}
};

struct UnsupportedConstruct : std::runtime_error {
    int line;
    std::string construct;
    UnsupportedConstruct(int line, std::string construct)
        : std::runtime_error("unsupported construct at line " + std::to_string(line) + ": " +
                             construct),
          line(line), construct(std::move(construct)) {}
};

struct RedefinedInScope : std::runtime_error {
    explicit RedefinedInScope(const std::string& name)
        : std::runtime_error("substitution variable is rebound in scope: " + name) {}
};

struct IterationLimitExceeded : std::runtime_error {
    explicit IterationLimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct NormalizationDiverged : std::runtime_error {
    NormalizationDiverged() : std::runtime_error("normalization did not reach a fixpoint") {}
};

struct NoOpportunity : std::runtime_error {
    explicit NoOpportunity(const std::string& what) : std::runtime_error(what) {}
};

struct NoKillableMutant : std::runtime_error {
    explicit NoKillableMutant(const std::string& what) : std::runtime_error(what) {}
};

struct ManifestMismatch : std::runtime_error {
    explicit ManifestMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct LogTruthMismatch : std::runtime_error {
    explicit LogTruthMismatch(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pyopt
