#include <doctest.h>

#include <random>

#include "pyopt/cf_analysis.hpp"
#include "pyopt/parse.hpp"

using namespace pyopt;

namespace {

AbstractValue k_int(long long v) { return AbstractValue::constant(Literal::make_int(v)); }

AbstractMemory mem(std::initializer_list<std::pair<Ident, AbstractValue>> items) {
    AbstractMemory m;
    for (const auto& [x, v] : items) m.bindings[x] = v;
    return m;
}

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

AbstractValue random_value(std::mt19937_64& rng) {
    switch (rng() % 5) {
        case 0: return AbstractValue::err();
        case 1: return AbstractValue::top(rng() % 2 == 0);
        default: return k_int(static_cast<long long>(rng() % 5));
    }
}

AbstractMemory random_memory(std::mt19937_64& rng) {
    AbstractMemory m;
    const char* names[] = {"a", "b", "c", "d"};
    for (const char* n : names)
        if (rng() % 2) m.bindings[n] = random_value(rng);
    return m;
}

}  // namespace

TEST_CASE("value join cases") {
    CHECK(join_value(k_int(1), k_int(1)) == k_int(1));
    CHECK(join_value(k_int(1), k_int(2)).is_top());
    CHECK(join_value(AbstractValue::top(), AbstractValue::err()).is_err());
    CHECK(join_value(AbstractValue::err(), k_int(3)).is_err());
    // typed constants: 1, 1.0 and True are all different
    CHECK(join_value(k_int(1), AbstractValue::constant(Literal::make_bool(true))).is_top());
    CHECK(join_value(k_int(1), AbstractValue::constant(Literal::make_float(1.0))).is_top());
}

TEST_CASE("memory join keeps one-sided bindings") {
    AbstractMemory a = mem({{"tmp", k_int(1)}});
    AbstractMemory b = mem({{"tmp", k_int(2)}});
    AbstractMemory j = join_memory(a, b);
    CHECK(j.lookup("tmp")->is_top());

    AbstractMemory c = mem({{"n", AbstractValue::top()}});
    CHECK(join_memory(c, AbstractMemory()) == c);
    CHECK(join_memory(AbstractMemory(), c) == c);

    // C1 ⊔ C4 from the factorial table
    AbstractMemory c1 = mem({{"n", AbstractValue::top(true)}, {"tmp", k_int(1)}, {"m", k_int(1)}});
    AbstractMemory c4 =
        mem({{"n", AbstractValue::top(true)}, {"tmp", k_int(1)}, {"m", AbstractValue::top(true)}});
    CHECK(join_memory(c1, c4) == c4);
}

TEST_CASE("join laws hold on random memories") {
    std::mt19937_64 rng(20240811);
    for (int i = 0; i < 500; ++i) {
        AbstractMemory a = random_memory(rng);
        AbstractMemory b = random_memory(rng);
        AbstractMemory c = random_memory(rng);
        CHECK(join_memory(a, b) == join_memory(b, a));
        CHECK(join_memory(a, a) == a);
        CHECK(join_memory(join_memory(a, b), c) == join_memory(a, join_memory(b, c)));
    }
}

TEST_CASE("abstract evaluation") {
    AbstractMemory env = mem({{"n", AbstractValue::top(true)}, {"tmp", k_int(1)}});
    CHECK(abstract_eval(parse_expression("2 * tmp - 1"), env) == k_int(1));
    CHECK(abstract_eval(parse_expression("n > tmp"), env).is_top());
    CHECK(abstract_eval(parse_expression("1 // 0"), env).is_err());
    CHECK(abstract_eval(parse_expression("missing + 1"), env).is_err());
    CHECK(abstract_eval(parse_expression("int(input())"), env).is_top());
    CHECK(abstract_eval(parse_expression("user_fn(tmp)"), env).is_top());
    CHECK(abstract_eval(parse_expression("len([1, 2])"), env) == k_int(2));
    CHECK(abstract_eval(parse_expression("abs(0 - tmp)"), env) == k_int(1));
    CHECK(abstract_eval(parse_expression("'a' + 'b'"), env) ==
          AbstractValue::constant(Literal::make_str("ab")));
    // a bound Err poisons everything
    AbstractMemory bad = mem({{"x", AbstractValue::err()}});
    CHECK(abstract_eval(parse_expression("x + 1"), bad).is_err());
}

TEST_CASE("abstract eval agrees with concrete eval on closed expressions") {
    const char* exprs[] = {"2 + 3 * 4", "7 // 2", "-7 % 3", "2 ** 8", "1 < 2", "5 // 0",
                           "max(3, 9)", "len('abc')"};
    for (const char* src : exprs) {
        CAPTURE(src);
        AbstractValue v = abstract_eval(parse_expression(src), AbstractMemory());
        if (std::string(src) == "5 // 0") {
            CHECK(v.is_err());
        } else {
            CHECK(v.is_const());
        }
    }
}

TEST_CASE("judgments on assignments and branches") {
    CfAnnotationMap prev, out;
    AbstractMemory c0 = mem({{"n", AbstractValue::top(true)}, {"tmp", k_int(1)}});
    Program p = parse("m = 2 * tmp - 1\n");
    AbstractMemory post = judge_cf(c0, p.body[0], prev, out);
    CHECK(*post.lookup("m") == k_int(1));

    AbstractMemory c3 =
        mem({{"n", AbstractValue::top(true)}, {"tmp", k_int(2)}, {"m", AbstractValue::top(true)}});
    Program dec = parse("tmp = tmp - 1\n");
    CHECK(*judge_cf(c3, dec.body[0], prev, out).lookup("tmp") == k_int(1));

    Program branch = parse("if (False):\n    x = 1\nelse:\n    x = 2\n");
    AbstractMemory sel = judge_cf(AbstractMemory(), branch.body[0], prev, out);
    CHECK(*sel.lookup("x") == k_int(2));
}

TEST_CASE("fixpoint matches the published factorial table") {
    Program p = parse(kFig2);
    int rounds = 0;
    CfAnnotationMap ann =
        infer_cf(p, [&](int round, const CfAnnotationMap&, const CfAnnotationMap&) { rounds = round; });
    CHECK(rounds == 3);

    AbstractMemory c1 = mem({{"n", AbstractValue::top(true)}, {"tmp", k_int(1)}, {"m", k_int(1)}});
    AbstractMemory c3 = mem(
        {{"n", AbstractValue::top(true)}, {"tmp", k_int(2)}, {"m", AbstractValue::top(true)}});
    AbstractMemory c4 = mem(
        {{"n", AbstractValue::top(true)}, {"tmp", k_int(1)}, {"m", AbstractValue::top(true)}});

    CHECK(ann.at(0).pre == AbstractMemory());
    CHECK(*ann.at(0).post.lookup("n") == AbstractValue::top(true));
    CHECK(ann.at(2).post == c1);   // m = 2 * tmp - 1
    CHECK(ann.at(3).post == c4);   // while header: loop invariant
    CHECK(ann.at(4).pre == c4);    // tmp = tmp + 1
    CHECK(ann.at(4).post == c3);
    CHECK(ann.at(5).pre == c3);    // m = m * n
    CHECK(ann.at(5).post == c3);
    CHECK(ann.at(6).post == c3);   // n = n - tmp + 1
    CHECK(ann.at(7).post == c4);   // tmp = tmp - 1
    CHECK(ann.at(8).pre == c4);    // print(m)
    CHECK(ann.at(8).post == c4);
}

TEST_CASE("two assignments fold by hand") {
    Program p = parse("x = 3\ny = x + 4\n");
    CfAnnotationMap ann = infer_cf(p);
    CHECK(*ann.at(1).post.lookup("x") == k_int(3));
    CHECK(*ann.at(1).post.lookup("y") == k_int(7));
}

TEST_CASE("input makes a variable top everywhere after") {
    Program p = parse("n = int(input())\nx = n + 1\n");
    CfAnnotationMap ann = infer_cf(p);
    CHECK(ann.at(0).post.lookup("n")->is_top());
    CHECK(ann.at(1).post.lookup("x")->is_top());
    CHECK(ann.at(1).post.lookup("x")->int_hint);
}

TEST_CASE("per-variable ascent across rounds") {
    Program p = parse(kFig2);
    auto level = [](const AbstractValue* v) {
        if (!v) return 0;
        return v->is_const() ? 1 : 2;
    };
    infer_cf(p, [&](int, const CfAnnotationMap& prev, const CfAnnotationMap& next) {
        for (const auto& [id, e] : prev.entries) {
            auto it = next.entries.find(id);
            REQUIRE(it != next.entries.end());
            for (const auto& [x, v] : e.post.bindings) {
                const AbstractValue* nv = it->second.post.lookup(x);
                CHECK(level(nv) >= level(&v));
                if (v.is_const() && nv && nv->is_const()) CHECK(v == *nv);
            }
        }
    });
}

TEST_CASE("golden dump format") {
    Program p = parse(kFig2);
    std::string dump = dump_cf(p, infer_cf(p));
    CHECK(dump ==
          "\u00abn = int(input())\u00bb \u22a8 pre={} post={n:\u22a4}\n"
          "\u00abtmp = 1\u00bb \u22a8 pre={n:\u22a4} post={n:\u22a4, tmp:1}\n"
          "\u00abm = 2 * tmp - 1\u00bb \u22a8 pre={n:\u22a4, tmp:1} post={m:1, n:\u22a4, tmp:1}\n"
          "\u00abwhile (n > tmp):\u00bb \u22a8 pre={m:\u22a4, n:\u22a4, tmp:1} post={m:\u22a4, n:\u22a4, tmp:1}\n"
          "    \u00abtmp = tmp + 1\u00bb \u22a8 pre={m:\u22a4, n:\u22a4, tmp:1} post={m:\u22a4, n:\u22a4, tmp:2}\n"
          "    \u00abm = m * n\u00bb \u22a8 pre={m:\u22a4, n:\u22a4, tmp:2} post={m:\u22a4, n:\u22a4, tmp:2}\n"
          "    \u00abn = n - tmp + 1\u00bb \u22a8 pre={m:\u22a4, n:\u22a4, tmp:2} post={m:\u22a4, n:\u22a4, tmp:2}\n"
          "    \u00abtmp = tmp - 1\u00bb \u22a8 pre={m:\u22a4, n:\u22a4, tmp:2} post={m:\u22a4, n:\u22a4, tmp:1}\n"
          "\u00abprint(m)\u00bb \u22a8 pre={m:\u22a4, n:\u22a4, tmp:1} post={m:\u22a4, n:\u22a4, tmp:1}\n");
}

TEST_CASE("for over an empty range leaves the memory unchanged") {
    Program p = parse("x = 1\nfor i in range(0):\n    x = 2\nprint(x)\n");
    CfAnnotationMap ann = infer_cf(p);
    CHECK(*ann.at(1).post.lookup("x") == k_int(1));
}
