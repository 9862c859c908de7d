#include <doctest.h>

#include "pyopt/cp_analysis.hpp"
#include "pyopt/parse.hpp"

using namespace pyopt;

namespace {

CopySet cs(std::vector<std::pair<Ident, Ident>> pairs) { return CopySet::closure(pairs); }

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

TEST_CASE("closure by symmetry and transitivity") {
    CHECK(cs({{"x", "y"}, {"y", "z"}}) == cs({{"x", "y"}, {"y", "z"}, {"x", "z"}}));
    CHECK(cs({{"x", "y"}, {"y", "z"}}).size() == 3);
    CHECK(cs({}).empty());
    CHECK(cs({{"n", "tmp"}}).to_string() == "n~tmp");
    CHECK(cs({{"x", "x"}}).empty());  // reflexive pairs dropped
}

TEST_CASE("remove_var keeps the closure") {
    CHECK(cs({{"n", "tmp"}}).remove("tmp").empty());
    CHECK(cs({{"x", "y"}, {"y", "z"}}).remove("y") == cs({{"x", "z"}}));
    CHECK(cs({}).remove("x").empty());
}

TEST_CASE("intersection of copy sets") {
    CHECK(cs({{"n", "tmp"}}).intersect(cs({})).empty());
    CHECK(cs({{"n", "tmp"}}).intersect(cs({{"n", "tmp"}})) == cs({{"n", "tmp"}}));
    // enumerate pairs by hand: {(a,b),(b,c),(a,c)} ∩ {(a,b),(c,d)} = {(a,b)}
    CopySet left = cs({{"a", "b"}, {"b", "c"}});
    CopySet right = CopySet::closure({{"a", "b"}, {"c", "d"}});
    CHECK(left.intersect(right) == cs({{"a", "b"}}));
}

TEST_CASE("single-statement judgments") {
    CpAnnotationMap prev, out;
    Program copy = parse("tmp = n\n");
    CHECK(judge_cp(CopySet(), copy.body[0], prev, out) == cs({{"n", "tmp"}}));

    Program mul = parse("m = m * n\n");
    CHECK(judge_cp(cs({{"n", "tmp"}}), mul.body[0], prev, out) == cs({{"n", "tmp"}}));

    Program kill = parse("tmp = n - 1\n");
    CHECK(judge_cp(cs({{"n", "tmp"}}), kill.body[0], prev, out).empty());

    Program self_assign = parse("x = x\n");
    CHECK(judge_cp(cs({{"x", "y"}}), self_assign.body[0], prev, out) == cs({{"x", "y"}}));
}

TEST_CASE("mutation kills copies") {
    CpAnnotationMap prev, out;
    Program sub = parse("a[0] = 5\n");
    CHECK(judge_cp(cs({{"a", "b"}}), sub.body[0], prev, out).empty());
    Program app = parse("a.append(1)\n");
    CHECK(judge_cp(cs({{"a", "b"}}), app.body[0], prev, out).empty());
    Program pure_call = parse("print(a)\n");
    CHECK(judge_cp(cs({{"a", "b"}}), pure_call.body[0], prev, out) == cs({{"a", "b"}}));
}

TEST_CASE("fixpoint on the factorial program matches the published table") {
    Program p = parse(kFig1);
    int rounds = 0;
    CpAnnotationMap ann = infer_cp(p, [&](int round, const CpAnnotationMap&, const CpAnnotationMap&) {
        rounds = round;
    });
    CHECK(rounds == 3);  // stabilizes in three applications

    auto pre = [&](int id) { return ann.at(id).pre; };
    auto post = [&](int id) { return ann.at(id).post; };
    CopySet nt = cs({{"n", "tmp"}});

    CHECK(pre(0).empty());  // n = int(input())
    CHECK(post(0).empty());
    CHECK(post(1).empty());      // m = 1
    CHECK(pre(2).empty());       // tmp = n
    CHECK(post(2) == nt);
    CHECK(post(3) == nt);        // while header invariant
    CHECK(pre(4) == nt);         // m = m * n
    CHECK(post(4) == nt);
    CHECK(pre(5) == nt);         // tmp = n - 1
    CHECK(post(5).empty());
    CHECK(pre(6).empty());       // n = tmp
    CHECK(post(6) == nt);
    CHECK(pre(7) == nt);         // print(m)
    CHECK(post(7) == nt);
}

TEST_CASE("straight-line program with no copies stabilizes immediately") {
    Program p = parse("a = 1\nb = a + 1\nprint(b)\n");
    // b = a + 1 is not a copy; only real copies create pairs
    CpAnnotationMap ann = infer_cp(p);
    CHECK(ann.at(0).post.empty());
    CHECK(ann.at(1).post.empty());
}

TEST_CASE("chained copies close transitively") {
    Program p = parse("a = b\nc = a\n");
    CpAnnotationMap ann = infer_cp(p);
    CHECK(ann.at(1).post == cs({{"a", "b"}, {"c", "a"}}));
    CHECK(ann.at(1).post.size() == 3);
}

TEST_CASE("monotone rounds") {
    Program p = parse(kFig1);
    infer_cp(p, [](int, const CpAnnotationMap& prev, const CpAnnotationMap& next) {
        for (const auto& [id, e] : prev.entries) {
            auto it = next.entries.find(id);
            REQUIRE(it != next.entries.end());
            CHECK(e.pre.subset_of(it->second.pre));
            CHECK(e.post.subset_of(it->second.post));
        }
    });
}

TEST_CASE("function bodies are judged from the empty set") {
    Program p = parse("x = y\ndef f(a):\n    b = a\n    return b\nprint(x)\n");
    CpAnnotationMap ann = infer_cp(p);
    CHECK(ann.at(1).post == ann.at(1).pre);  // Def leaves the outer set alone
    CHECK(ann.at(2).pre.empty());            // body entry is empty
    CHECK(ann.at(2).post == cs({{"a", "b"}}));
}

TEST_CASE("golden dump format") {
    Program p = parse(kFig1);
    std::string dump = dump_cp(p, infer_cp(p));
    CHECK(dump ==
          "«n = int(input())» ⊨ pre={} post={}\n"
          "«m = 1» ⊨ pre={} post={}\n"
          "«tmp = n» ⊨ pre={} post={n~tmp}\n"
          "«while (n > 1):» ⊨ pre={n~tmp} post={n~tmp}\n"
          "    «m = m * n» ⊨ pre={n~tmp} post={n~tmp}\n"
          "    «tmp = n - 1» ⊨ pre={n~tmp} post={}\n"
          "    «n = tmp» ⊨ pre={} post={n~tmp}\n"
          "«print(m)» ⊨ pre={n~tmp} post={n~tmp}\n");
}
