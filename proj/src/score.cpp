#include "pyopt/score.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "pyopt/errors.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace pyopt {

double round_percent(double pct) { return std::floor(pct * 100.0 + 0.5) / 100.0; }

double row_average(const std::vector<double>& cells) {
    if (cells.empty()) return 0.0;
    double sum = 0.0;
    for (double c : cells) sum += c;
    return round_percent(sum / static_cast<double>(cells.size()));
}

double overall_cell(double correct_pct, double incorrect_pct) {
    return round_percent((correct_pct * 3.0 + incorrect_pct * 4.0) / 7.0);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::string canon_prompt(std::string p) {
    p = trim(p);
    if (!p.empty() && (p[0] == 'p' || p[0] == 'P')) p = p.substr(1);
    if (p.size() != 1 || p[0] < '1' || p[0] > '4')
        throw LogTruthMismatch("bad prompt column value: " + p);
    return "P" + p;
}

}  // namespace

ResponseLog parse_response_log(const std::string& csv_text) {
    ResponseLog log;
    std::istringstream in(csv_text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cols = split_csv_line(line);
        if (first) {
            first = false;
            if (!cols.empty() && trim(cols[0]) == "algorithm") continue;  // header
        }
        if (cols.size() != 6)
            throw LogTruthMismatch("expected 6 CSV columns, got " +
                                   std::to_string(cols.size()) + ": " + line);
        LogRow row;
        row.algorithm = trim(cols[0]);
        row.prompt = canon_prompt(cols[1]);
        row.chatbot = trim(cols[2]);
        row.round = std::stoi(trim(cols[3]));
        row.variant = trim(cols[4]);
        std::string answer = trim(cols[5]);
        if (answer != "yes" && answer != "no")
            throw LogTruthMismatch("answer must be yes or no: " + line);
        row.answer_yes = answer == "yes";
        log.rows.push_back(std::move(row));
    }
    return log;
}

ResponseLog load_response_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LogTruthMismatch("cannot open log: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_response_log(text);
}

TruthLabels load_truth_labels(const std::string& dataset_dir) {
    TruthLabels truth;
    for (const auto& e : fs::directory_iterator(dataset_dir)) {
        if (!e.is_directory()) continue;
        fs::path labels = e.path() / "labels.json";
        if (!fs::exists(labels)) continue;
        std::ifstream in(labels);
        nlohmann::json j = nlohmann::json::parse(in);
        auto& m = truth[e.path().filename().string()];
        for (const auto& [name, lab] : j["labels"].items())
            m[name] = lab["equivalent"] == "yes";
        m["ref"] = true;
    }
    if (truth.empty()) throw LogTruthMismatch("no labels found under " + dataset_dir);
    return truth;
}

AccuracyReport score(const ResponseLog& log, const TruthLabels& truth) {
    AccuracyReport rep;
    std::set<std::string> chatbots, prompts, algorithms;
    std::map<std::string, long long> per_instance;
    std::vector<std::string> orphans;

    for (const LogRow& row : log.rows) {
        auto algo_it = truth.find(row.algorithm);
        if (algo_it == truth.end()) {
            orphans.push_back(row.algorithm + "/" + row.variant);
            continue;
        }
        auto var_it = algo_it->second.find(row.variant);
        if (var_it == algo_it->second.end()) {
            orphans.push_back(row.algorithm + "/" + row.variant);
            continue;
        }
        bool truly_equivalent = var_it->second;
        bool correct = row.answer_yes == truly_equivalent;

        chatbots.insert(row.chatbot);
        prompts.insert(row.prompt);
        algorithms.insert(row.algorithm);
        per_instance[row.algorithm + "|" + row.prompt + "|" + row.chatbot + "|" +
                     std::to_string(row.round)] += 1;

        AccuracyCell& cell = rep.cells[row.prompt][row.chatbot];
        Fraction& cls = truly_equivalent ? cell.correct_class : cell.incorrect_class;
        cls.total += 1;
        cls.hits += correct;
        cell.overall.total += 1;
        cell.overall.hits += correct;

        if (row.variant == "cp" || row.variant == "cf" || row.variant == "cp_cf") {
            Fraction& f = rep.perturbation[row.algorithm][row.variant][row.chatbot];
            f.total += 1;
            f.hits += correct;
        }
        ++rep.answers;
    }
    if (!orphans.empty()) {
        std::string what = "log rows do not match the dataset:";
        for (size_t i = 0; i < orphans.size() && i < 8; ++i) what += " " + orphans[i];
        throw LogTruthMismatch(what);
    }

    rep.chatbots.assign(chatbots.begin(), chatbots.end());
    rep.prompts.assign(prompts.begin(), prompts.end());
    rep.instances = static_cast<long long>(per_instance.size());

    // Which reading the per-instance answer counts satisfy.
    bool all_3_7 = true, all_4_8 = true;
    for (const auto& [key, count] : per_instance) {
        bool multi = key.find("|P3|") != std::string::npos ||
                     key.find("|P4|") != std::string::npos;
        long long want_a = multi ? 7 : 3;
        long long want_b = multi ? 8 : 4;
        if (count != want_a) all_3_7 = false;
        if (count != want_b) all_4_8 = false;
    }
    rep.reading = all_3_7 ? "without-reference" : all_4_8 ? "with-reference" : "irregular";

    long long rounds = 0;
    std::set<int> round_ids;
    for (const LogRow& row : log.rows) round_ids.insert(row.round);
    rounds = static_cast<long long>(round_ids.size());
    long long expected = static_cast<long long>(algorithms.size()) *
                         static_cast<long long>(prompts.size()) *
                         static_cast<long long>(chatbots.size()) * rounds;
    rep.counts_consistent = rep.instances == expected;
    return rep;
}

namespace {

std::string pct_str(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", v);
    return buf;
}

void emit_row(std::string& out, const std::string& label, const std::vector<std::string>& cells) {
    out += label;
    if (label.size() < 28) out += std::string(28 - label.size(), ' ');
    for (const auto& c : cells) {
        out += " | ";
        if (c.size() < 10) out += std::string(10 - c.size(), ' ');
        out += c;
    }
    out += "\n";
}

}  // namespace

std::string AccuracyReport::to_text() const {
    std::string out;
    std::vector<std::string> header = chatbots;
    header.push_back("Average");
    emit_row(out, "Prompt", header);

    auto class_rows = [&](const char* suffix, auto pick) {
        for (const auto& prompt : prompts) {
            bool multi = prompt == "P3" || prompt == "P4";
            if (suffix[0] != '\0' && !multi) continue;
            std::vector<std::string> cells;
            std::vector<double> values;
            for (const auto& bot : chatbots) {
                auto pit = this->cells.find(prompt);
                const AccuracyCell* cell = nullptr;
                if (pit != this->cells.end()) {
                    auto bit = pit->second.find(bot);
                    if (bit != pit->second.end()) cell = &bit->second;
                }
                if (!cell) {
                    cells.push_back("-");
                    continue;
                }
                double v = round_percent(pick(*cell));
                values.push_back(v);
                cells.push_back(pct_str(v));
            }
            cells.push_back(pct_str(row_average(values)));
            emit_row(out, prompt + std::string(suffix), cells);
        }
    };

    out += "\nCorrect-class accuracy\n";
    class_rows("", [](const AccuracyCell& c) { return c.correct_class.percent(); });
    out += "\nIncorrect-class accuracy (multi-class prompts)\n";
    class_rows(" / incorrect", [](const AccuracyCell& c) { return c.incorrect_class.percent(); });
    out += "\nOverall accuracy\n";
    class_rows("", [](const AccuracyCell& c) { return c.overall.percent(); });

    out += "\nPer-chatbot average (correct class, all prompts)\n";
    {
        std::vector<std::string> cells;
        for (const auto& bot : chatbots) {
            std::vector<double> values;
            for (const auto& prompt : prompts) {
                auto pit = this->cells.find(prompt);
                if (pit == this->cells.end()) continue;
                auto bit = pit->second.find(bot);
                if (bit == pit->second.end()) continue;
                values.push_back(round_percent(bit->second.correct_class.percent()));
            }
            cells.push_back(pct_str(row_average(values)));
        }
        cells.push_back("");
        emit_row(out, "Average", cells);
    }

    out += "\nPer-perturbation accuracy\n";
    for (const auto& [algo, kinds] : perturbation) {
        for (const char* kind : {"cp", "cf", "cp_cf"}) {
            auto kit = kinds.find(kind);
            if (kit == kinds.end()) continue;
            std::vector<std::string> cells;
            std::vector<double> values;
            for (const auto& bot : chatbots) {
                auto bit = kit->second.find(bot);
                if (bit == kit->second.end()) {
                    cells.push_back("-");
                    continue;
                }
                double v = round_percent(bit->second.percent());
                values.push_back(v);
                cells.push_back(pct_str(v));
            }
            cells.push_back(pct_str(row_average(values)));
            emit_row(out, algo + " " + kind, cells);
        }
    }

    out += "\nValidation: " + std::to_string(instances) + " prompt instances, " +
           std::to_string(answers) + " answers, reading=" + reading +
           (counts_consistent ? ", counts consistent" : ", counts INCONSISTENT") + "\n";
    return out;
}

std::string AccuracyReport::to_json() const {
    ordered_json j;
    j["chatbots"] = chatbots;
    j["prompts"] = prompts;
    j["cells"] = ordered_json::object();
    for (const auto& [prompt, bots] : cells) {
        for (const auto& [bot, cell] : bots) {
            ordered_json c;
            c["correct_class"] = round_percent(cell.correct_class.percent());
            c["correct_class_n"] = cell.correct_class.total;
            c["incorrect_class"] = round_percent(cell.incorrect_class.percent());
            c["incorrect_class_n"] = cell.incorrect_class.total;
            c["overall"] = round_percent(cell.overall.percent());
            c["overall_n"] = cell.overall.total;
            j["cells"][prompt][bot] = c;
        }
    }
    j["perturbation"] = ordered_json::object();
    for (const auto& [algo, kinds] : perturbation)
        for (const auto& [kind, bots] : kinds)
            for (const auto& [bot, f] : bots)
                j["perturbation"][algo][kind][bot] = round_percent(f.percent());
    j["instances"] = instances;
    j["answers"] = answers;
    j["reading"] = reading;
    j["counts_consistent"] = counts_consistent;
    return j.dump(2) + "\n";
}

}  // namespace pyopt
