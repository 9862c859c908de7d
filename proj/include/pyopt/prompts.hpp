#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pyopt {

enum class PromptKind { P1, P2, P3, P4 };

const char* prompt_kind_name(PromptKind k);  // "P1".."P4"
bool prompt_is_contextual(PromptKind k);     // P2/P4
bool prompt_is_multiclass(PromptKind k);     // P3/P4

// Exact preamble texts.
const std::string& contextless_preamble();
const std::string& contextual_preamble();

struct Snippet {
    std::string name;  // variant name ("ref", "cp", ...)
    std::string code;
};

// Preamble, then the reference snippet, then the other snippets interleaved
// by the order seed (recorded as a header comment). P1/P2 take the three
// equivalent variants; P3/P4 add the four bug variants.
std::string render_prompt(const Snippet& ref, std::vector<Snippet> others, PromptKind kind,
                          uint64_t order_seed);

// Renders all four prompts for every algorithm directory of a dataset tree
// into <out>/<algo>/p1.txt..p4.txt. Returns the file count.
int render_prompt_tree(const std::string& dataset_dir, const std::string& out_dir,
                       uint64_t order_seed);

}  // namespace pyopt
