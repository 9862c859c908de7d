#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pyopt/bugs.hpp"
#include "pyopt/cf_analysis.hpp"
#include "pyopt/cp_analysis.hpp"
#include "pyopt/dataset.hpp"
#include "pyopt/errors.hpp"
#include "pyopt/manifest.hpp"
#include "pyopt/parse.hpp"
#include "pyopt/perturb.hpp"
#include "pyopt/printer.hpp"
#include "pyopt/prompts.hpp"
#include "pyopt/rewrite.hpp"
#include "pyopt/score.hpp"

using namespace pyopt;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

Program parse_file(const std::string& path) { return parse(read_file(path)); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Source-level copy propagation and constant folding for a Python subset"};
    app.require_subcommand(1);

    std::string in_file, out_file, trace_file, manifest_file;
    std::string corpus_dir, dataset_dir, out_dir, log_file, json_file;
    std::string phase = "all", kind = "both";
    bool dump_cp_flag = false, dump_cf_flag = false;
    uint64_t seed = 42;

    auto* cmd_parse = app.add_subcommand("parse", "Parse a source file and print it canonically");
    cmd_parse->add_option("file", in_file)->required();
    cmd_parse->add_option("-o,--out", out_file);

    auto* cmd_annotate = app.add_subcommand("annotate", "Dump per-statement analysis annotations");
    cmd_annotate->add_option("file", in_file)->required();
    cmd_annotate->add_flag("--cp", dump_cp_flag, "copy-propagation annotations");
    cmd_annotate->add_flag("--cf", dump_cf_flag, "constant-folding annotations");
    cmd_annotate->add_option("-o,--out", out_file);

    auto* cmd_optimize = app.add_subcommand("optimize", "Apply source-level rewrites");
    cmd_optimize->add_option("file", in_file)->required();
    cmd_optimize->add_option("--phase", phase)->check(CLI::IsMember({"cp", "cf", "gc", "all"}));
    cmd_optimize->add_option("--trace", trace_file, "write the rewrite trace");
    cmd_optimize->add_option("-o,--out", out_file);

    std::string ref_file, variant_file;
    auto* cmd_verify = app.add_subcommand("verify", "Execution-based equivalence check");
    cmd_verify->add_option("ref", ref_file)->required();
    cmd_verify->add_option("variant", variant_file)->required();
    cmd_verify->add_option("--manifest", manifest_file)->required();

    auto* cmd_perturb = app.add_subcommand("perturb", "Apply seeded inverse rewrites");
    cmd_perturb->add_option("file", in_file)->required();
    cmd_perturb->add_option("--kind", kind)
        ->check(CLI::IsMember({"cp", "cf", "both", "obfuscate"}));
    cmd_perturb->add_option("--seed", seed);
    cmd_perturb->add_option("-o,--out", out_file);

    auto* cmd_dataset = app.add_subcommand("dataset", "Build the benchmark dataset tree");
    cmd_dataset->add_option("--corpus", corpus_dir)->required();
    cmd_dataset->add_option("--out", out_dir)->required();
    cmd_dataset->add_option("--seed", seed);

    auto* cmd_prompts = app.add_subcommand("prompts", "Render the four prompt kinds per algorithm");
    cmd_prompts->add_option("--dataset", dataset_dir)->required();
    cmd_prompts->add_option("--out", out_dir)->required();
    cmd_prompts->add_option("--seed", seed);

    auto* cmd_score = app.add_subcommand("score", "Score a labeled response log");
    cmd_score->add_option("--log", log_file)->required();
    cmd_score->add_option("--dataset", dataset_dir)->required();
    cmd_score->add_option("--json", json_file, "also write a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (cmd_parse->parsed()) {
            write_output(out_file, print_program(parse_file(in_file)));
            return 0;
        }
        if (cmd_annotate->parsed()) {
            if (dump_cp_flag == dump_cf_flag) {
                std::cerr << "annotate: pass exactly one of --cp / --cf\n";
                return 2;
            }
            Program p = parse_file(in_file);
            std::string dump = dump_cp_flag ? dump_cp(p, infer_cp(p)) : dump_cf(p, infer_cf(p));
            write_output(out_file, dump);
            return 0;
        }
        if (cmd_optimize->parsed()) {
            Program p = parse_file(in_file);
            Trace trace;
            Program result;
            if (phase == "cp") std::tie(result, trace) = apply_cp(p);
            else if (phase == "cf") std::tie(result, trace) = apply_cf(p);
            else if (phase == "gc") std::tie(result, trace) = garbage_collect(p);
            else std::tie(result, trace) = normalize(p);
            if (!trace_file.empty()) write_output(trace_file, trace.to_text());
            write_output(out_file, print_program(result));
            return 0;
        }
        if (cmd_verify->parsed()) {
            Program ref = parse_file(ref_file);
            Program variant = parse_file(variant_file);
            TestManifest m = load_manifest(manifest_file);
            Verdict v = equivalent(ref, variant, m);
            switch (v.equivalent) {
                case Equivalence::Yes:
                    std::cout << "equivalent: yes\n";
                    return 0;
                case Equivalence::No:
                    std::cout << "equivalent: no (witness case " << *v.witness << ")\n";
                    return 1;
                case Equivalence::Inconclusive:
                    std::cout << "equivalent: inconclusive (" << v.detail << ")\n";
                    return 2;
            }
        }
        if (cmd_perturb->parsed()) {
            Program p = parse_file(in_file);
            Program result;
            if (kind == "cp") result = perturb_cp(p, seed);
            else if (kind == "cf") result = perturb_cf(p, seed);
            else if (kind == "obfuscate") result = obfuscate(p, seed);
            else result = perturb_both(p, seed);
            write_output(out_file, print_program(result));
            return 0;
        }
        if (cmd_dataset->parsed()) {
            DatasetReport report = build_dataset(corpus_dir, out_dir, seed);
            std::cout << "wrote " << report.files_written << " programs for "
                      << report.algorithms.size() << " algorithms under " << report.root << "\n";
            return 0;
        }
        if (cmd_prompts->parsed()) {
            int n = render_prompt_tree(dataset_dir, out_dir, seed);
            std::cout << "wrote " << n << " prompt files under " << out_dir << "\n";
            return 0;
        }
        if (cmd_score->parsed()) {
            ResponseLog log = load_response_log(log_file);
            TruthLabels truth = load_truth_labels(dataset_dir);
            AccuracyReport report = score(log, truth);
            std::cout << report.to_text();
            if (!json_file.empty()) write_output(json_file, report.to_json());
            return 0;
        }
    } catch (const SyntaxError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const UnsupportedConstruct& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const NoOpportunity& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const NoKillableMutant& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const ManifestMismatch& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const LogTruthMismatch& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 2;
}
