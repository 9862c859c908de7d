#include <doctest.h>

#include "pyopt/interp.hpp"
#include "pyopt/parse.hpp"

using namespace pyopt;

namespace {

Outcome run_script(const std::string& src, std::vector<std::string> tape = {},
                   long long fuel = 1'000'000) {
    Program p = parse(src);
    RunRequest req;
    req.tape.values = std::move(tape);
    req.fuel = fuel;
    return run(p, req);
}

Outcome run_fn(const std::string& src, const std::string& entry, std::vector<Value> args) {
    Program p = parse(src);
    RunRequest req;
    req.entry = entry;
    req.args = std::move(args);
    return run(p, req);
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

const char* kFig2Final =
    "n = int(input())\n"
    "tmp = 1\n"
    "m = 1\n"
    "while (n > 1):\n"
    "    m = m * n\n"
    "    n = n - 1\n"
    "print(m)\n";

}  // namespace

TEST_CASE("factorial script over a tape") {
    Outcome o = run_script(kFig1, {"5"});
    CHECK(o.status == RunStatus::Normal);
    REQUIRE(o.stdout_lines.size() == 1);
    CHECK(o.stdout_lines[0] == "120");
}

TEST_CASE("loop not entered prints the initial accumulator") {
    Outcome o = run_script(kFig2Final, {"1"});
    CHECK(o.status == RunStatus::Normal);
    REQUIRE(o.stdout_lines.size() == 1);
    CHECK(o.stdout_lines[0] == "1");
}

TEST_CASE("runtime error kinds") {
    CHECK(run_script("print(1 // 0)\n").error == ErrKind::DivByZero);
    CHECK(run_script("print(x)\n").error == ErrKind::UnboundVariable);
    CHECK(run_script("a = [1]\nprint(a[3])\n").error == ErrKind::IndexOutOfRange);
    CHECK(run_script("n = input()\n").error == ErrKind::TapeExhausted);
    CHECK(run_script("print(1 + 'a')\n").error == ErrKind::TypeError);
    CHECK(run_script("print('a' < 1)\n").error == ErrKind::TypeError);
}

TEST_CASE("stdout stops at the first error") {
    Outcome o = run_script("print(1)\nprint(2 % 0)\nprint(3)\n");
    CHECK(o.status == RunStatus::RuntimeError);
    REQUIRE(o.stdout_lines.size() == 1);
    CHECK(o.stdout_lines[0] == "1");
}

TEST_CASE("fuel exhaustion carries partial stdout") {
    Outcome o = run_script("print(1)\nwhile (True):\n    pass\n", {}, 500);
    CHECK(o.status == RunStatus::FuelExhausted);
    REQUIRE(o.stdout_lines.size() == 1);
}

TEST_CASE("list assignment aliases") {
    // A subscript write through B is visible through A.
    Outcome o = run_script("A = [1, 2, 3]\nB = A\nB[0] = 99\nprint(A[0])\n");
    CHECK(o.status == RunStatus::Normal);
    REQUIRE(!o.stdout_lines.empty());
    CHECK(o.stdout_lines[0] == "99");

    Outcome o2 = run_script("A = [1]\nB = A\nB.append(7)\nprint(len(A))\nprint(A)\n");
    CHECK(o2.status == RunStatus::Normal);
    REQUIRE(o2.stdout_lines.size() == 2);
    CHECK(o2.stdout_lines[0] == "2");
    CHECK(o2.stdout_lines[1] == "[1, 7]");
}

TEST_CASE("python arithmetic semantics") {
    Outcome o = run_script(
        "print(-7 // 2)\n"
        "print(-7 % 3)\n"
        "print(7 % -3)\n"
        "print(1 / 2)\n"
        "print(2 ** 10)\n"
        "print(True + 1)\n"
        "print(10 // 3)\n");
    CHECK(o.status == RunStatus::Normal);
    CHECK(o.stdout_lines == std::vector<std::string>{"-4", "2", "-2", "0.5", "1024", "2", "3"});
}

TEST_CASE("short-circuit evaluation returns operands") {
    Outcome o = run_script("print(0 and 1 // 0)\nprint(2 or 1 // 0)\nprint(0 or 'x')\n");
    CHECK(o.status == RunStatus::Normal);
    CHECK(o.stdout_lines == std::vector<std::string>{"0", "2", "x"});
}

TEST_CASE("function calls see only their own frame") {
    Outcome o = run_fn("g = 5\ndef f(a):\n    return a + g\n", "f", {Value::of(1LL)});
    CHECK(o.status == RunStatus::RuntimeError);
    CHECK(o.error == ErrKind::UnboundVariable);
}

TEST_CASE("functions, recursion, return value") {
    Outcome o = run_fn(
        "def fact(n):\n"
        "    if (n <= 1):\n"
        "        return 1\n"
        "    return n * fact(n - 1)\n",
        "fact", {Value::of(6LL)});
    CHECK(o.status == RunStatus::Normal);
    REQUIRE(o.result.has_value());
    CHECK(strict_equal(*o.result, Value::of(720LL)));
}

TEST_CASE("determinism") {
    for (int i = 0; i < 3; ++i) {
        Outcome a = run_script(kFig1, {"7"});
        Outcome b = run_script(kFig1, {"7"});
        CHECK(a.stdout_lines == b.stdout_lines);
        CHECK(a.status == b.status);
    }
}

TEST_CASE("instrumented probes log values at visited points") {
    Program p = parse(kFig1);
    // while header is statement 3; probe n and tmp at its entry
    std::set<Probe> probes = {{3, "n", false}, {3, "tmp", false}};
    ProbeLog log;
    RunRequest req;
    req.tape.values = {"3"};
    Outcome o = instrumented_run(p, req, probes, log);
    CHECK(o.status == RunStatus::Normal);
    REQUIRE(log.hits.size() >= 2);
    // pairwise equal at every visit (n~tmp holds at the header)
    for (size_t i = 0; i + 1 < log.hits.size(); i += 2) {
        REQUIRE(log.hits[i].bound);
        REQUIRE(log.hits[i + 1].bound);
        CHECK(strict_equal(log.hits[i].value, log.hits[i + 1].value));
    }
}

TEST_CASE("probe on unreachable statement logs nothing") {
    Program p = parse("if (False):\n    x = 1\nprint(0)\n");
    std::set<Probe> probes = {{1, "x", true}};
    ProbeLog log;
    RunRequest req;
    instrumented_run(p, req, probes, log);
    CHECK(log.hits.empty());
}

TEST_CASE("repr of values matches python notation") {
    CHECK(repr_value(Value::of(true)) == "True");
    CHECK(repr_value(Value::none()) == "None");
    CHECK(repr_value(Value::of(std::string("a'b"))) == "\"a'b\"");
    CHECK(repr_value(Value::list({Value::of(1LL), Value::of(std::string("x"))})) == "[1, 'x']");
    Value d = Value::dict();
    d.as_dict()->items.emplace_back(Value::of(std::string("k")), Value::of(2LL));
    CHECK(repr_value(d) == "{'k': 2}");
}
