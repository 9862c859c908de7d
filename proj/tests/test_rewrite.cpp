#include <doctest.h>

#include "pyopt/parse.hpp"
#include "pyopt/printer.hpp"
#include "pyopt/rewrite.hpp"

using namespace pyopt;

namespace {

const char* kFig1 =
    "n = int(input())\n"
    "m = 1\n"
    "tmp = n\n"
    "while (n > 1):\n"
    "    m = m * n\n"
    "    tmp = n - 1\n"
    "    n = tmp\n"
    "print(m)\n";

const char* kFig1Final =
    "n = int(input())\n"
    "m = 1\n"
    "while (n > 1):\n"
    "    m = m * n\n"
    "    n = n - 1\n"
    "tmp = n\n"
    "print(m)\n";

const char* kFig2 =
    "n = int(input())\n"
    "tmp = 1\n"
    "m = 2 * tmp - 1\n"
    "while (n > tmp):\n"
    "    tmp = tmp + 1\n"
    "    m = m * n\n"
    "    n = n - tmp + 1\n"
    "    tmp = tmp - 1\n"
    "print(m)\n";

const char* kFig2Final =
    "n = int(input())\n"
    "tmp = 1\n"
    "m = 1\n"
    "while (n > 1):\n"
    "    m = m * n\n"
    "    n = n - 1\n"
    "print(m)\n";

const char* kFactorialNormal =
    "n = int(input())\n"
    "m = 1\n"
    "while (n > 1):\n"
    "    m = m * n\n"
    "    n = n - 1\n"
    "print(m)\n";

std::vector<RuleId> rules_of(const Trace& t) {
    std::vector<RuleId> out;
    for (const auto& s : t.steps) out.push_back(s.rule);
    return out;
}

}  // namespace

TEST_CASE("copy propagation replays the published chain") {
    auto [result, trace] = apply_cp(parse(kFig1));
    CHECK(print_program(result) == kFig1Final);
    CHECK(rules_of(trace) ==
          std::vector<RuleId>{RuleId::CP3, RuleId::CP4, RuleId::CP2, RuleId::CP1});
}

TEST_CASE("program with no copies is left alone") {
    Program p = parse("a = 1\nb = a + 1\nprint(b)\n");
    auto [result, trace] = apply_cp(p);
    CHECK(!trace.changed());
    CHECK(program_equal(result, p));
}

TEST_CASE("rule 2 commutes a copy past its use") {
    auto [result, trace] = apply_cp(parse("a = b\nprint(a)\n"));
    CHECK(print_program(result) == "print(b)\na = b\n");
    CHECK(rules_of(trace) == std::vector<RuleId>{RuleId::CP2});
}

TEST_CASE("constant folding replays the published chain") {
    Program p = parse(kFig2);
    auto [result, trace] = apply_cf(p);
    CHECK(print_program(result) == kFig2Final);

    // The chain visits the published intermediate programs byte for byte:
    // one whole-program fold pass, a sink, a collapse, then the deletion.
    Program step = parse(kFig2);
    size_t i = 0;
    // rule 1 folds every position in one pass
    Trace fold_steps;
    while (i < trace.steps.size() && trace.steps[i].rule == RuleId::CF1)
        fold_steps.steps.push_back(trace.steps[i++]);
    CHECK(fold_steps.steps.size() == 5);
    step = replay(step, fold_steps);
    CHECK(print_program(step) ==
          "n = int(input())\n"
          "tmp = 1\n"
          "m = 1\n"
          "while (n > 1):\n"
          "    tmp = 2\n"
          "    m = m * n\n"
          "    n = n - 1\n"
          "    tmp = 1\n"
          "print(m)\n");
    REQUIRE(i + 3 == trace.steps.size());
    CHECK(trace.steps[i].rule == RuleId::CF3a);
    Trace sink{{trace.steps[i]}};
    step = replay(step, sink);
    CHECK(print_program(step) ==
          "n = int(input())\n"
          "tmp = 1\n"
          "m = 1\n"
          "while (n > 1):\n"
          "    m = m * n\n"
          "    n = n - 1\n"
          "    tmp = 2\n"
          "    tmp = 1\n"
          "print(m)\n");
    CHECK(trace.steps[i + 1].rule == RuleId::CF3b);
    CHECK(trace.steps[i + 2].rule == RuleId::CF2);
}

TEST_CASE("a subsequent copy-propagation pass leaves the folded program alone") {
    auto [folded, cf_trace] = apply_cf(parse(kFig2));
    auto [after_cp, cp_trace] = apply_cp(folded);
    CHECK(!cp_trace.changed());
    CHECK(print_program(after_cp) == kFig2Final);
}

TEST_CASE("closed expressions and constant branches") {
    auto [r1, t1] = apply_cf(parse("x = 2 + 3\nprint(x)\n"));
    CHECK(print_program(r1) == "x = 5\nprint(5)\n");

    auto [r2, t2] = apply_cf(parse("if (1 < 2):\n    y = 1\nelse:\n    y = 2\nprint(y)\n"));
    CHECK(print_program(r2) == "y = 1\nprint(1)\n");

    auto [r3, t3] = apply_cf(parse("while (False):\n    x = 1\nprint(0)\n"));
    CHECK(print_program(r3) == "print(0)\n");

    auto [r4, t4] = apply_cf(parse("for i in range(0):\n    x = 1\nprint(0)\n"));
    CHECK(print_program(r4) == "print(0)\n");
}

TEST_CASE("folding never touches erroring expressions") {
    Program p = parse("x = 1 // 0\nprint(1)\n");
    auto [result, trace] = apply_cf(p);
    CHECK(print_program(result) == "x = 1 // 0\nprint(1)\n");
}

TEST_CASE("garbage collection removes dead stores only") {
    auto [r1, t1] = garbage_collect(parse(kFig1Final));
    CHECK(print_program(r1) == kFactorialNormal);

    Program keep = parse("x = input()\nprint(1)\n");
    auto [r2, t2] = garbage_collect(keep);
    CHECK(program_equal(r2, keep));  // effectful RHS stays

    auto [r3, t3] = garbage_collect(parse("a = 1\na = 2\nprint(a)\n"));
    CHECK(print_program(r3) == "a = 2\nprint(a)\n");

    // a variable assigned in a loop and read at the next iteration is live
    Program loop = parse("s = 0\ni = 0\nwhile (i < 3):\n    s = s + i\n    i = i + 1\nprint(s)\n");
    auto [r4, t4] = garbage_collect(loop);
    CHECK(program_equal(r4, loop));
}

TEST_CASE("normalization reaches the shared factorial normal form") {
    auto [n1, t1] = normalize(parse(kFig1));
    CHECK(print_program(n1) == kFactorialNormal);
    auto [n2, t2] = normalize(parse(kFig2));
    CHECK(print_program(n2) == kFactorialNormal);

    // idempotent
    auto [n3, t3] = normalize(n1);
    CHECK(!t3.changed());
    CHECK(program_equal(n3, n1));
}

TEST_CASE("trace replay reproduces the outputs exactly") {
    for (const char* src : {kFig1, kFig2}) {
        CAPTURE(src);
        Program p = parse(src);
        auto [cp_out, cp_trace] = apply_cp(p);
        CHECK(program_equal(replay(p, cp_trace), cp_out));
        auto [cf_out, cf_trace] = apply_cf(p);
        CHECK(program_equal(replay(p, cf_trace), cf_out));
        auto [gc_out, gc_trace] = garbage_collect(p);
        CHECK(program_equal(replay(p, gc_trace), gc_out));
    }
}

TEST_CASE("trace text format") {
    auto [result, trace] = apply_cp(parse("a = b\nprint(a)\n"));
    std::string text = trace.to_text();
    CHECK(text.find("step 1: CP2 at stmt 0") != std::string::npos);
    CHECK(text.find("=>") != std::string::npos);
}
