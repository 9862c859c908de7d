#include <doctest.h>

#include <cmath>

#include "pyopt/errors.hpp"
#include "pyopt/prompts.hpp"
#include "pyopt/score.hpp"

using namespace pyopt;

TEST_CASE("rounding is two decimals, half up") {
    CHECK(round_percent(60.195) == doctest::Approx(60.20).epsilon(1e-12));
    CHECK(round_percent(62.3357) == doctest::Approx(62.34).epsilon(1e-12));
    CHECK(round_percent(87.525) == doctest::Approx(87.53).epsilon(1e-12));
    CHECK(round_percent(50.0) == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("published single-class row average") {
    // All seven chatbot cells of the first contextless row.
    std::vector<double> row1 = {63.20, 53.68, 56.99, 47.62, 67.53, 70.56, 76.77};
    CHECK(row_average(row1) == doctest::Approx(62.34).epsilon(1e-12));
}

TEST_CASE("published multi-class overall cells recompute from class cells") {
    // (correct, incorrect, published overall) per chatbot; the multi-class
    // prompt answers 3 equivalent and 4 non-equivalent snippets per instance.
    struct Row { double correct, incorrect, published; };
    const Row prompt3[] = {
        {43.03, 94.55, 72.47}, {51.52, 89.55, 73.25}, {46.06, 95.00, 74.03},
        {45.45, 95.91, 74.29}, {46.06, 90.00, 71.17}, {76.97, 95.45, 87.53},
    };
    for (const Row& r : prompt3) {
        CAPTURE(r.published);
        CHECK(std::abs(overall_cell(r.correct, r.incorrect) - r.published) <= 0.01 + 1e-9);
    }
    const Row prompt4[] = {
        {63.03, 98.64, 83.38}, {72.73, 85.45, 80.00}, {65.45, 96.82, 83.38},
        {40.00, 93.64, 70.65}, {70.91, 90.45, 82.08}, {77.58, 89.55, 84.42},
        {83.03, 96.36, 90.65},
    };
    for (const Row& r : prompt4) {
        CAPTURE(r.published);
        CHECK(std::abs(overall_cell(r.correct, r.incorrect) - r.published) <= 0.01 + 1e-9);
    }
    // The seventh multi-class row is arithmetically inconsistent in its
    // source: its class cells give 84.42, not the printed 76.19, and no
    // class weighting reproduces the printed value.
    CHECK(overall_cell(71.72, 93.94) == doctest::Approx(84.42).epsilon(1e-9));
}

TEST_CASE("csv parsing and scoring a small log") {
    TruthLabels truth;
    truth["alg"]["cp"] = true;
    truth["alg"]["cf"] = true;
    truth["alg"]["cp_cf"] = true;
    truth["alg"]["bug_ref"] = false;
    truth["alg"]["bug_cp"] = false;
    truth["alg"]["bug_cf"] = false;
    truth["alg"]["bug_cp_cf"] = false;

    std::string csv =
        "algorithm,prompt,chatbot,round,variant,answer\n"
        "alg,P1,bot,1,cp,yes\n"
        "alg,P1,bot,1,cf,no\n"
        "alg,P1,bot,1,cp_cf,yes\n"
        "alg,P3,bot,1,cp,yes\n"
        "alg,P3,bot,1,cf,yes\n"
        "alg,P3,bot,1,cp_cf,no\n"
        "alg,P3,bot,1,bug_ref,no\n"
        "alg,P3,bot,1,bug_cp,no\n"
        "alg,P3,bot,1,bug_cf,yes\n"
        "alg,P3,bot,1,bug_cp_cf,no\n";
    ResponseLog log = parse_response_log(csv);
    CHECK(log.rows.size() == 10);
    AccuracyReport rep = score(log, truth);
    const AccuracyCell& p1 = rep.cells.at("P1").at("bot");
    CHECK(p1.correct_class.hits == 2);
    CHECK(p1.correct_class.total == 3);
    const AccuracyCell& p3 = rep.cells.at("P3").at("bot");
    CHECK(p3.correct_class.hits == 2);
    CHECK(p3.incorrect_class.hits == 3);
    CHECK(p3.incorrect_class.total == 4);
    CHECK(p3.overall.hits == 5);
    CHECK(p3.overall.total == 7);
    CHECK(rep.reading == "without-reference");
    CHECK(rep.answers == 10);

    // perturbation breakdown counts only the equivalent perturbations
    CHECK(rep.perturbation.at("alg").at("cp").at("bot").total == 2);
    CHECK(rep.perturbation.at("alg").at("cp").at("bot").hits == 2);

    // orphan rows are rejected with a listing
    std::string bad = csv + "other,P1,bot,1,cp,yes\n";
    CHECK_THROWS_AS(score(parse_response_log(bad), truth), LogTruthMismatch);
}

TEST_CASE("scoring is permutation invariant") {
    TruthLabels truth;
    truth["alg"]["cp"] = true;
    truth["alg"]["bug_ref"] = false;
    std::string a =
        "alg,P1,bot,1,cp,yes\n"
        "alg,P3,bot,1,cp,no\n"
        "alg,P3,bot,1,bug_ref,no\n";
    std::string b =
        "alg,P3,bot,1,bug_ref,no\n"
        "alg,P1,bot,1,cp,yes\n"
        "alg,P3,bot,1,cp,no\n";
    AccuracyReport ra = score(parse_response_log(a), truth);
    AccuracyReport rb = score(parse_response_log(b), truth);
    CHECK(ra.to_json() == rb.to_json());
}

TEST_CASE("prompt preambles are the published texts") {
    CHECK(contextless_preamble() ==
          "Are the following functions semantically equivalent to the first one?");
    CHECK(contextual_preamble() ==
          "You are a chatbot for comparing the semantics of small Python programs. "
          "I will provide you with multiple implementations of the same Python function. "
          "The first function is the reference version. "
          "The other functions are perturbed with copy propagation, constant folding "
          "or a combination of the two. "
          "Tell me whether the functions are semantically equivalent to the reference "
          "version or not.");
}

TEST_CASE("prompt rendering: counts, order seed, determinism") {
    Snippet ref{"ref", "def f1(a):\n    return a\n"};
    std::vector<Snippet> others = {
        {"cp", "def f1(a):\n    b = a\n    return b\n"},
        {"cf", "def f1(a):\n    return a + 0\n"},
        {"cp_cf", "def f1(a):\n    c = a + 0\n    return c\n"},
    };
    std::string p1 = render_prompt(ref, others, PromptKind::P1, 9);
    CHECK(p1.find(contextless_preamble()) != std::string::npos);
    CHECK(p1.find("# order-seed: 9") == 0);
    size_t defs = 0;
    for (size_t pos = 0; (pos = p1.find("def ", pos)) != std::string::npos; pos += 4) ++defs;
    CHECK(defs == 4);
    CHECK(render_prompt(ref, others, PromptKind::P1, 9) == p1);
    std::string p2 = render_prompt(ref, others, PromptKind::P2, 9);
    CHECK(p2.find(contextual_preamble()) != std::string::npos);
    // the reference always comes first
    CHECK(p1.find("return a\n") < p1.find("return b\n"));
}
