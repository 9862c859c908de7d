#include "pyopt/equivalence.hpp"

#include "pyopt/errors.hpp"
#include "pyopt/printer.hpp"

namespace pyopt {

void TestManifest::validate() const {
    if (cases.size() < 20)
        throw ManifestMismatch("manifest declares " + std::to_string(cases.size()) +
                               " cases; at least 20 required");
    for (const auto& c : cases) {
        if (!entry.empty() && !c.input.empty() && !c.args.empty())
            throw ManifestMismatch("case mixes arguments and input tape");
    }
}

bool outcomes_equal(const Outcome& a, const Outcome& b, CompareMode mode, double tol) {
    if (a.status != b.status) return false;
    if (a.status == RunStatus::RuntimeError && a.error != b.error) return false;
    if (a.stdout_lines != b.stdout_lines) return false;
    if (a.result.has_value() != b.result.has_value()) return false;
    if (!a.result.has_value()) return true;
    if (mode == CompareMode::Numeric) return close_equal(*a.result, *b.result, tol);
    return strict_equal(*a.result, *b.result);
}

std::string resolve_entry(const Program& p, const std::string& entry, const Program* reference) {
    if (entry.empty()) return "";
    std::vector<const Stmt*> defs;
    for (const auto& s : p.body)
        if (s.kind == StmtKind::FunDef) defs.push_back(&s);
    for (const Stmt* d : defs)
        if (d->target == entry) return entry;
    if (reference) {
        int index = 0;
        for (const auto& s : reference->body) {
            if (s.kind != StmtKind::FunDef) continue;
            if (s.target == entry) {
                if (index < static_cast<int>(defs.size())) return defs[index]->target;
                break;
            }
            ++index;
        }
    }
    if (defs.size() == 1) return defs[0]->target;
    throw ManifestMismatch("cannot resolve entry function '" + entry + "'");
}

Outcome run_case(const Program& p, const std::string& entry, const TestCase& c, long long fuel) {
    RunRequest req;
    req.entry = entry;
    req.args = c.args;
    req.tape.values = c.input;
    req.fuel = fuel;
    return run(p, req);
}

Verdict equivalent(const Program& p1, const Program& p2, const TestManifest& m) {
    m.validate();
    std::string e1 = resolve_entry(p1, m.entry);
    std::string e2 = resolve_entry(p2, m.entry, &p1);
    if (!m.entry.empty()) {
        const Stmt* d1 = nullptr;
        const Stmt* d2 = nullptr;
        for (const auto& s : p1.body)
            if (s.kind == StmtKind::FunDef && s.target == e1) d1 = &s;
        for (const auto& s : p2.body)
            if (s.kind == StmtKind::FunDef && s.target == e2) d2 = &s;
        if (!d1 || !d2) throw ManifestMismatch("entry function missing");
        if (d1->params.size() != d2->params.size())
            throw ManifestMismatch("entry arity differs between programs");
        for (const auto& c : m.cases)
            if (c.args.size() != d1->params.size())
                throw ManifestMismatch("case arity disagrees with the entry signature");
    }
    for (size_t i = 0; i < m.cases.size(); ++i) {
        Outcome o1 = run_case(p1, e1, m.cases[i], m.fuel);
        Outcome o2 = run_case(p2, e2, m.cases[i], m.fuel);
        if (o1.status == RunStatus::FuelExhausted || o2.status == RunStatus::FuelExhausted) {
            Verdict v;
            v.equivalent = Equivalence::Inconclusive;
            v.witness = i;
            v.detail = "fuel exhausted on case " + std::to_string(i);
            return v;
        }
        if (!outcomes_equal(o1, o2, m.compare, m.tolerance)) {
            Verdict v;
            v.equivalent = Equivalence::No;
            v.witness = i;
            v.detail = "case " + std::to_string(i) + " differs";
            return v;
        }
    }
    return Verdict{};
}

}  // namespace pyopt
