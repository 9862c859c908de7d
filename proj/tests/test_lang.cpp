#include <doctest.h>

#include <random>

#include "pyopt/errors.hpp"
#include "pyopt/parse.hpp"
#include "pyopt/printer.hpp"
#include "pyopt/syntax.hpp"

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

}  // namespace

TEST_CASE("parse basics") {
    Program p = parse("n = int(input())\nprint(n)\n");
    CHECK(p.body.size() == 2);
    CHECK(p.body[0].kind == StmtKind::Assign);
    CHECK(p.body[1].kind == StmtKind::ExprStmt);
}

TEST_CASE("statement ids are dense pre-order") {
    Program p = parse(kFig1);
    CHECK(p.body.size() == 5);  // 5 top-level statements
    CHECK(p.body[3].body.size() == 3);
    int expected = 0;
    bool dense = true;
    for_each_stmt(p.body, [&](const Stmt& s, int) { dense &= s.id == expected++; });
    CHECK(dense);
    CHECK(expected == 8);
}

TEST_CASE("constructs outside the subset are rejected") {
    CHECK_THROWS_AS(parse("class A: pass\n"), UnsupportedConstruct);
    CHECK_THROWS_AS(parse("x = lambda a: a\n"), UnsupportedConstruct);
    CHECK_THROWS_AS(parse("x = [i for i in range(3)]\n"), UnsupportedConstruct);
    CHECK_THROWS_AS(parse("a, b = 1, 2\n"), UnsupportedConstruct);
    CHECK_THROWS_AS(parse("x += 1\n"), UnsupportedConstruct);
    CHECK_THROWS_AS(parse("import os\n"), UnsupportedConstruct);
    CHECK_THROWS_AS(parse("while True:\n    break\n"), UnsupportedConstruct);
    CHECK_THROWS_AS(parse("if 0 < x < 5:\n    pass\n"), UnsupportedConstruct);
    CHECK_THROWS_AS(parse("x = (1\n"), SyntaxError);
    CHECK_THROWS_AS(parse("if x:\npass\n"), SyntaxError);
}

TEST_CASE("print then reparse is structurally identical") {
    const char* sources[] = {
        kFig1,
        "def f(a, b):\n    if (a > b):\n        return a\n    else:\n        return b\n",
        "xs = [1, 2, 3]\nxs[0] = xs[1] * -2\nprint(xs[0:2])\n",
        "d = {}\nd['k'] = 1\nprint(d.get('k', 0))\n",
        "s = 'it\\'s'\nprint(s + \"x\")\n",
        "y = 2 ** 3 ** 2\nz = (2 ** 3) ** 2\nw = -2 ** 2\n",
        "if (a):\n    pass\nelif (b):\n    x = 1\nelse:\n    x = 2\n",
        "for i in range(3, 10, 2):\n    print(i)\n",
        "x = 1.5e-7\ny = 10.0\nz = not (a and b or c)\n",
    };
    for (const char* src : sources) {
        CAPTURE(src);
        Program p1 = parse(src);
        std::string printed = print_program(p1);
        Program p2 = parse(printed);
        CHECK(program_equal(p1, p2));
        CHECK(print_program(p2) == printed);  // printing is idempotent
    }
}

TEST_CASE("empty program prints as pass") {
    Program p;
    CHECK(print_program(p) == "pass\n");
}

TEST_CASE("figure-style program prints with canonical spacing") {
    Program p = parse("n=int(input())\ntmp  =1\nm=1\nwhile n>1 :\n    m = m*n\n    n = n-1\nprint(m)\n");
    CHECK(print_program(p) ==
          "n = int(input())\n"
          "tmp = 1\n"
          "m = 1\n"
          "while (n > 1):\n"
          "    m = m * n\n"
          "    n = n - 1\n"
          "print(m)\n");
}

TEST_CASE("vars_of collects reads and writes, excludes callees") {
    CHECK(vars_of(*parse_expression("m * n")) == IdentSet{"m", "n"});
    Program p = parse("tmp = n - 1\n");
    CHECK(vars_of(p.body[0]) == IdentSet{"tmp", "n"});
    Program q = parse("for i in range(k):\n    s = s + i\n");
    CHECK(vars_of(q.body[0]) == IdentSet{"i", "k", "s"});
    CHECK(vars_of(*parse_expression("print(m)")) == IdentSet{"m"});
}

TEST_CASE("substitute replaces free occurrences") {
    ExprPtr guard = parse_expression("n > 1");
    CHECK(print_expr(substitute(guard, "n", "tmp")) == "tmp > 1");

    Program p = parse("m = m * n\n");
    Stmt same = substitute(p.body[0], "m", "m");
    CHECK(stmt_equal(same, p.body[0]));

    Program q = parse("x = 1\n");
    CHECK_THROWS_AS(substitute(q.body[0], "x", "y"), RedefinedInScope);
}

TEST_CASE("substitution variable-set identity and involution") {
    const char* sources[] = {
        "y = a + x * 2\nprint(x + b)\n",
        "if (x > a):\n    y = x\nelse:\n    y = a - x\n",
        "while (x > 0):\n    a = a + x\n",
    };
    for (const char* src : sources) {
        CAPTURE(src);
        Program p = parse(src);
        std::vector<Stmt> out = substitute(p.body, "x", "z");
        IdentSet before = vars_of(p.body);
        IdentSet after = vars_of(out);
        IdentSet expected = before;
        expected.erase("x");
        expected.insert("z");
        CHECK(after == expected);
        // involutive on fresh names
        std::vector<Stmt> back = substitute(out, "z", "x");
        REQUIRE(back.size() == p.body.size());
        for (size_t i = 0; i < back.size(); ++i) CHECK(stmt_equal(back[i], p.body[i]));
    }
}

TEST_CASE("float formatting matches CPython repr conventions") {
    CHECK(format_float(0.0) == "0.0");
    CHECK(format_float(-0.0) == "-0.0");
    CHECK(format_float(1.0) == "1.0");
    CHECK(format_float(0.1) == "0.1");
    CHECK(format_float(1e16) == "1e+16");
    CHECK(format_float(1e15) == "1000000000000000.0");
    CHECK(format_float(0.0001) == "0.0001");
    CHECK(format_float(0.00001) == "1e-05");
    CHECK(format_float(-2.5e-7) == "-2.5e-07");
    CHECK(format_float(3.141592653589793) == "3.141592653589793");
    CHECK(format_float(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_float(12345678901234567.0) == "1.2345678901234568e+16");
}
