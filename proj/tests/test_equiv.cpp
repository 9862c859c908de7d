#include <doctest.h>

#include "pyopt/errors.hpp"
#include "pyopt/manifest.hpp"
#include "pyopt/parse.hpp"

using namespace pyopt;

namespace {

TestManifest int_sweep(const std::string& entry, int lo, int hi) {
    TestManifest m;
    m.entry = entry;
    for (int i = lo; i <= hi; ++i) {
        TestCase c;
        c.args = {Value::of(static_cast<long long>(i))};
        m.cases.push_back(c);
    }
    return m;
}

TestManifest tape_sweep(int lo, int hi) {
    TestManifest m;
    for (int i = lo; i <= hi; ++i) {
        TestCase c;
        c.input = {std::to_string(i)};
        m.cases.push_back(c);
    }
    return m;
}

const char* kFig1 =
    "n = int(input())\n"
    "m = 1\n"
    "tmp = n\n"
    "while (n > 1):\n"
    "    m = m * n\n"
    "    tmp = n - 1\n"
    "    n = tmp\n"
    "print(m)\n";

const char* kFactorialNormal =
    "n = int(input())\n"
    "m = 1\n"
    "while (n > 1):\n"
    "    m = m * n\n"
    "    n = n - 1\n"
    "print(m)\n";

}  // namespace

TEST_CASE("the published rewrite chain is semantics preserving") {
    Program a = parse(kFig1);
    Program b = parse(kFactorialNormal);
    Verdict v = equivalent(a, b, tape_sweep(0, 20));
    CHECK(v.yes());
}

TEST_CASE("reflexivity") {
    Program p = parse(kFig1);
    CHECK(equivalent(p, p, tape_sweep(0, 20)).yes());
}

TEST_CASE("a real bug yields a witness") {
    Program good = parse("def fib(n):\n    a = 0\n    b = 1\n    i = 0\n    while (i < n):\n        t = a + b\n        a = b\n        b = t\n        i = i + 1\n    return a\n");
    Program bad = parse("def fib(n):\n    a = 0\n    b = 1\n    i = 1\n    while (i < n):\n        t = a + b\n        a = b\n        b = t\n        i = i + 1\n    return a\n");
    Verdict v = equivalent(good, bad, int_sweep("fib", 0, 20));
    CHECK(v.equivalent == Equivalence::No);
    REQUIRE(v.witness.has_value());
    // re-running the witness case reproduces the difference
    const TestManifest m = int_sweep("fib", 0, 20);
    Outcome o1 = run_case(good, "fib", m.cases[*v.witness], m.fuel);
    Outcome o2 = run_case(bad, "fib", m.cases[*v.witness], m.fuel);
    CHECK(!outcomes_equal(o1, o2, m.compare, m.tolerance));
}

TEST_CASE("fuel exhaustion is inconclusive, never equivalent") {
    Program spin = parse("def f(n):\n    while (True):\n        pass\n    return 0\n");
    TestManifest m = int_sweep("f", 0, 20);
    m.fuel = 200;
    Verdict v = equivalent(spin, spin, m);
    CHECK(v.equivalent == Equivalence::Inconclusive);
}

TEST_CASE("manifest arity mismatches are rejected") {
    Program one = parse("def f(a):\n    return a\n");
    TestManifest m = int_sweep("f", 0, 20);
    m.cases[3].args.push_back(Value::of(1LL));
    CHECK_THROWS_AS(equivalent(one, one, m), ManifestMismatch);

    Program two = parse("def f(a, b):\n    return a\n");
    CHECK_THROWS_AS(equivalent(one, two, int_sweep("f", 0, 20)), ManifestMismatch);
}

TEST_CASE("manifests parse from JSON") {
    TestManifest m = parse_manifest(R"({
        "entry": "f",
        "fuel": 5000,
        "compare": "numeric",
        "tolerance": 1e-6,
        "cases": [
            {"args": [1, 2.5, [1, 2], "s", true]},
            {"args": [0, 0.0, [], "", false]},
            {"args": [1]}, {"args": [2]}, {"args": [3]}, {"args": [4]},
            {"args": [5]}, {"args": [6]}, {"args": [7]}, {"args": [8]},
            {"args": [9]}, {"args": [10]}, {"args": [11]}, {"args": [12]},
            {"args": [13]}, {"args": [14]}, {"args": [15]}, {"args": [16]},
            {"input": ["5"]}, {"input": ["6", "7"]}
        ]
    })");
    CHECK(m.fuel == 5000);
    CHECK(m.compare == CompareMode::Numeric);
    CHECK(m.cases.size() == 20);
    CHECK(m.cases[0].args.size() == 5);
    CHECK(m.cases[0].args[1].is_float());
    CHECK(m.cases[0].args[2].is_list());
    CHECK(m.cases[19].input.size() == 2);

    // fewer than 20 cases is rejected
    CHECK_THROWS_AS(parse_manifest(R"({"entry": "f", "cases": [{"args": [1]}]})"),
                    ManifestMismatch);
}

TEST_CASE("numeric comparison mode tolerates representation noise") {
    Program a = parse("def f(x):\n    return x * 0.1\n");
    Program b = parse("def f(x):\n    return x / 10.0\n");
    TestManifest m = int_sweep("f", 0, 25);
    m.compare = CompareMode::Numeric;
    m.tolerance = 1e-9;
    CHECK(equivalent(a, b, m).yes());
}

TEST_CASE("entry resolution falls back to definition position") {
    Program ref = parse("def helper(x):\n    return x\ndef main(a):\n    return helper(a) + 1\n");
    Program renamed = parse("def f1(x):\n    return x\ndef f2(a):\n    return f1(a) + 1\n");
    CHECK(resolve_entry(renamed, "main", &ref) == "f2");
    CHECK(resolve_entry(ref, "main") == "main");
}
