#include "pyopt/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "pyopt/errors.hpp"
#include "pyopt/manifest.hpp"
#include "pyopt/parse.hpp"
#include "pyopt/perturb.hpp"
#include "pyopt/printer.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace pyopt {

const std::vector<std::string>& variant_names() {
    static const std::vector<std::string> names = {"ref",     "cp",     "cf",     "cp_cf",
                                                   "bug_ref", "bug_cp", "bug_cf", "bug_cp_cf"};
    return names;
}

uint64_t fnv1a(const std::string& text) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << content;
    }
    fs::rename(tmp, path);
}

ordered_json value_to_json(const Value& v) {
    if (v.is_none()) return nullptr;
    if (v.is_bool()) return v.as_bool();
    if (v.is_int()) return v.as_int();
    if (v.is_float()) return v.as_float();
    if (v.is_str()) return v.as_str();
    if (v.is_list()) {
        ordered_json arr = ordered_json::array();
        for (const auto& e : *v.as_list()) arr.push_back(value_to_json(e));
        return arr;
    }
    return repr_value(v);
}

ordered_json case_to_json(const TestCase& c) {
    ordered_json j;
    if (!c.args.empty() || c.input.empty()) {
        ordered_json args = ordered_json::array();
        for (const auto& a : c.args) args.push_back(value_to_json(a));
        j["args"] = args;
    }
    if (!c.input.empty()) j["input"] = c.input;
    return j;
}

std::string entry_of(const Program& obfuscated, const Program& original,
                     const std::string& entry) {
    if (entry.empty()) return "";
    return resolve_entry(obfuscated, entry, &original);
}

}  // namespace

VariantSet build_variant_set(const std::string& algorithm, const Program& ref,
                             const TestManifest& manifest, uint64_t seed) {
    VariantSet set;
    set.algorithm = algorithm;
    set.seed = seed;

    auto sub_seed = [&](const char* what) {
        return seed ^ fnv1a(algorithm + ":" + what);
    };

    std::map<std::string, Program> plain;
    plain["ref"] = ref;
    plain["cp"] = perturb_cp(ref, sub_seed("cp"));
    plain["cf"] = perturb_cf(ref, sub_seed("cf"));
    plain["cp_cf"] = perturb_both(ref, sub_seed("cp_cf"));

    std::map<std::string, BugDescriptor> bugs;
    for (const std::string base : {"ref", "cp", "cf", "cp_cf"}) {
        auto [mutant, bug] = inject_bug(plain.at(base), sub_seed(("bug_" + base).c_str()),
                                        manifest);
        plain["bug_" + base] = mutant;
        bugs["bug_" + base] = bug;
        set.provenance.push_back("bug_" + base + ": " + bug.kind + " (" + bug.before + " -> " +
                                 bug.after + ")");
    }

    for (const std::string& name : variant_names()) {
        VariantInfo info;
        info.program = obfuscate(plain.at(name), sub_seed(("obf_" + name).c_str()));
        info.entry = entry_of(info.program, plain.at(name), manifest.entry);
        set.variants[name] = std::move(info);
    }

    // Certify the labels against the emitted (obfuscated) reference.
    const VariantInfo& ref_info = set.variants.at("ref");
    TestManifest emitted_manifest = manifest;
    emitted_manifest.entry = ref_info.entry;
    for (const std::string& name : variant_names()) {
        if (name == "ref") continue;
        VariantInfo& info = set.variants.at(name);
        Verdict v = equivalent(ref_info.program, info.program, emitted_manifest);
        bool is_bug = name.rfind("bug_", 0) == 0;
        if (is_bug) {
            if (v.equivalent != Equivalence::No)
                throw NoKillableMutant(algorithm + "/" + name +
                                       ": mutant not distinguished by the manifest");
            info.equivalent = false;
            info.witness_index = static_cast<int>(*v.witness);
            info.bug = bugs.at(name);
        } else {
            if (v.equivalent != Equivalence::Yes)
                throw NoOpportunity(algorithm + "/" + name +
                                    ": perturbation failed equivalence: " + v.detail);
            info.equivalent = true;
        }
    }
    return set;
}

std::vector<std::string> corpus_algorithms(const std::string& corpus_dir) {
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (entry.path().extension() != ".py") continue;
        fs::path manifest = entry.path();
        manifest.replace_extension(".manifest.json");
        if (fs::exists(manifest)) out.push_back(entry.path().stem().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

DatasetReport build_dataset(const std::string& corpus_dir, const std::string& out_dir,
                            uint64_t seed) {
    DatasetReport report;
    report.root = out_dir;
    report.algorithms = corpus_algorithms(corpus_dir);
    if (report.algorithms.empty())
        throw std::runtime_error("no corpus algorithms under " + corpus_dir);
    fs::create_directories(out_dir);

    uint64_t corpus_hash = 1469598103934665603ULL;
    ordered_json index;
    index["seed"] = seed;
    index["algorithms"] = ordered_json::array();

    for (const std::string& algo : report.algorithms) {
        fs::path src = fs::path(corpus_dir) / (algo + ".py");
        fs::path mpath = fs::path(corpus_dir) / (algo + ".manifest.json");
        std::string source = read_file(src);
        corpus_hash ^= fnv1a(algo + "\n" + source);
        Program ref = parse(source);
        TestManifest manifest = load_manifest(mpath.string());
        VariantSet set = build_variant_set(algo, ref, manifest, seed ^ fnv1a(algo));

        fs::path dir = fs::path(out_dir) / algo;
        fs::create_directories(dir);
        ordered_json labels;
        labels["seed"] = set.seed;
        labels["entries"] = ordered_json::object();
        labels["labels"] = ordered_json::object();
        for (const std::string& name : variant_names()) {
            const VariantInfo& info = set.variants.at(name);
            write_file_atomic(dir / (name + ".py"), print_program(info.program));
            ++report.files_written;
            labels["entries"][name] = info.entry;
            ordered_json lab;
            lab["equivalent"] = info.equivalent ? "yes" : "no";
            if (!info.equivalent) {
                lab["witness_index"] = info.witness_index;
                lab["witness"] = case_to_json(manifest.cases[static_cast<size_t>(
                    info.witness_index)]);
                lab["bug"] = {{"kind", info.bug.kind},
                              {"before", info.bug.before},
                              {"after", info.bug.after}};
            }
            labels["labels"][name] = lab;
        }
        write_file_atomic(dir / "labels.json", labels.dump(2) + "\n");
        std::string trace;
        for (const auto& line : set.provenance) trace += line + "\n";
        write_file_atomic(dir / "trace.txt", trace);

        ordered_json algo_entry;
        algo_entry["name"] = algo;
        algo_entry["status"] = "ok";
        index["algorithms"].push_back(algo_entry);
    }
    index["corpus_hash"] = corpus_hash;
    write_file_atomic(fs::path(out_dir) / "dataset.json", index.dump(2) + "\n");
    return report;
}

}  // namespace pyopt
