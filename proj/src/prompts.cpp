#include "pyopt/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <random>

#include "pyopt/dataset.hpp"

namespace fs = std::filesystem;

namespace pyopt {

const char* prompt_kind_name(PromptKind k) {
    switch (k) {
        case PromptKind::P1: return "P1";
        case PromptKind::P2: return "P2";
        case PromptKind::P3: return "P3";
        case PromptKind::P4: return "P4";
    }
    return "?";
}

bool prompt_is_contextual(PromptKind k) { return k == PromptKind::P2 || k == PromptKind::P4; }
bool prompt_is_multiclass(PromptKind k) { return k == PromptKind::P3 || k == PromptKind::P4; }

const std::string& contextless_preamble() {
    static const std::string text =
        "Are the following functions semantically equivalent to the first one?";
    return text;
}

const std::string& contextual_preamble() {
    static const std::string text =
        "You are a chatbot for comparing the semantics of small Python programs. "
        "I will provide you with multiple implementations of the same Python function. "
        "The first function is the reference version. "
        "The other functions are perturbed with copy propagation, constant folding "
        "or a combination of the two. "
        "Tell me whether the functions are semantically equivalent to the reference "
        "version or not.";
    return text;
}

std::string render_prompt(const Snippet& ref, std::vector<Snippet> others, PromptKind kind,
                          uint64_t order_seed) {
    std::mt19937_64 rng(order_seed);
    for (size_t i = others.size(); i > 1; --i) std::swap(others[i - 1], others[rng() % i]);

    std::string out = "# order-seed: " + std::to_string(order_seed) + "\n";
    out += (prompt_is_contextual(kind) ? contextual_preamble() : contextless_preamble()) + "\n\n";
    out += ref.code;
    for (const auto& s : others) {
        out += "\n";
        out += s.code;
    }
    return out;
}

int render_prompt_tree(const std::string& dataset_dir, const std::string& out_dir,
                       uint64_t order_seed) {
    int written = 0;
    std::vector<std::string> algos;
    for (const auto& e : fs::directory_iterator(dataset_dir))
        if (e.is_directory()) algos.push_back(e.path().filename().string());
    std::sort(algos.begin(), algos.end());

    auto read = [](const fs::path& p) {
        std::ifstream in(p);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };

    for (const std::string& algo : algos) {
        fs::path dir = fs::path(dataset_dir) / algo;
        if (!fs::exists(dir / "labels.json")) continue;
        Snippet ref{"ref", read(dir / "ref.py")};
        std::vector<Snippet> equivalents, bugs;
        for (const std::string& name : variant_names()) {
            if (name == "ref") continue;
            Snippet s{name, read(dir / (name + ".py"))};
            if (name.rfind("bug_", 0) == 0)
                bugs.push_back(std::move(s));
            else
                equivalents.push_back(std::move(s));
        }
        fs::create_directories(fs::path(out_dir) / algo);
        for (PromptKind kind : {PromptKind::P1, PromptKind::P2, PromptKind::P3, PromptKind::P4}) {
            std::vector<Snippet> others = equivalents;
            if (prompt_is_multiclass(kind))
                others.insert(others.end(), bugs.begin(), bugs.end());
            uint64_t seed = order_seed ^ fnv1a(algo + ":" + prompt_kind_name(kind));
            std::string text = render_prompt(ref, others, kind, seed);
            std::string name = prompt_kind_name(kind);
            for (auto& c : name) c = static_cast<char>(std::tolower(c));
            fs::path file = fs::path(out_dir) / algo / (name + ".txt");
            fs::path tmp = file;
            tmp += ".tmp";
            {
                std::ofstream out(tmp);
                out << text;
            }
            fs::rename(tmp, file);
            ++written;
        }
    }
    return written;
}

}  // namespace pyopt
