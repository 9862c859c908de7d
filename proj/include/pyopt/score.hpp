#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pyopt {

struct LogRow {
    std::string algorithm;
    std::string prompt;   // "P1".."P4"
    std::string chatbot;
    int round = 0;        // 1..N
    std::string variant;  // "cp", "bug_ref", ...
    bool answer_yes = false;
};

struct ResponseLog {
    std::vector<LogRow> rows;
};

// runs.csv columns: algorithm,prompt,chatbot,round,variant,answer
ResponseLog load_response_log(const std::string& path);
ResponseLog parse_response_log(const std::string& csv_text);

// algorithm -> variant -> truly-equivalent
using TruthLabels = std::map<std::string, std::map<std::string, bool>>;
TruthLabels load_truth_labels(const std::string& dataset_dir);

// Two-decimal percentage, round half up.
double round_percent(double pct);
// Row/column average of already-computed cells, rounded.
double row_average(const std::vector<double>& cells);
// Overall accuracy of a multi-class prompt from its class accuracies
// (3 equivalent + 4 non-equivalent answers per instance).
double overall_cell(double correct_pct, double incorrect_pct);

struct Fraction {
    long long hits = 0, total = 0;
    double percent() const { return total == 0 ? 0.0 : 100.0 * hits / total; }
};

struct AccuracyCell {
    Fraction correct_class;    // truly-equivalent snippets
    Fraction incorrect_class;  // bug snippets (multi-class prompts)
    Fraction overall;
};

struct AccuracyReport {
    std::vector<std::string> chatbots;                  // column order
    std::vector<std::string> prompts;                   // row order P1..P4
    std::map<std::string, std::map<std::string, AccuracyCell>> cells;  // prompt -> chatbot

    // per-perturbation breakdown: algorithm -> kind(cp|cf|cp_cf) -> chatbot
    std::map<std::string, std::map<std::string, std::map<std::string, Fraction>>> perturbation;

    // expected-row validation
    long long instances = 0;          // distinct (algorithm, prompt, chatbot, round)
    long long answers = 0;            // total yes/no rows
    std::string reading;              // "without-reference" (3/7) or "with-reference" (4/8)
    bool counts_consistent = false;   // instances == algos*4*chatbots*rounds

    std::string to_text() const;
    std::string to_json() const;
};

AccuracyReport score(const ResponseLog& log, const TruthLabels& truth);

}  // namespace pyopt
