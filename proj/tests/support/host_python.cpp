#include "host_python.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace fs = std::filesystem;

namespace pyopt::host {

namespace {

nlohmann::json value_to_json(const Value& v) {
    if (v.is_none()) return nullptr;
    if (v.is_bool()) return v.as_bool();
    if (v.is_int()) return v.as_int();
    if (v.is_float()) return v.as_float();
    if (v.is_str()) return v.as_str();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : *v.as_list()) arr.push_back(value_to_json(e));
    return arr;
}

std::string run_command(const std::string& cmd, int* exit_code) {
    std::string output;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        *exit_code = -1;
        return output;
    }
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, n);
    *exit_code = pclose(pipe);
    return output;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "pyopt_host_oracle";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

bool python_available() {
    int code = 0;
    run_command("python3 -c 'pass' 2>/dev/null", &code);
    return code == 0;
}

std::vector<CaseResult> run_function_cases(const std::string& program_text,
                                           const std::string& entry,
                                           const std::vector<TestCase>& cases) {
    fs::path dir = temp_dir();
    fs::path script = dir / "driver.py";
    fs::path cases_file = dir / "cases.json";

    nlohmann::json jcases = nlohmann::json::array();
    for (const auto& c : cases) {
        nlohmann::json args = nlohmann::json::array();
        for (const auto& a : c.args) args.push_back(value_to_json(a));
        jcases.push_back(args);
    }
    {
        std::ofstream out(cases_file);
        out << jcases.dump();
    }
    {
        std::ofstream out(script);
        out << program_text;
        out << "\nimport json as __json\n";
        out << "__cases = __json.load(open(" << nlohmann::json(cases_file.string()).dump()
            << "))\n";
        out << "for __args in __cases:\n";
        out << "    try:\n";
        out << "        print('__R__' + repr(" << entry << "(*__args)))\n";
        out << "    except Exception as __e:\n";
        out << "        print('__E__' + type(__e).__name__)\n";
    }
    int code = 0;
    std::string output =
        run_command("python3 " + script.string() + " 2>/dev/null", &code);
    std::vector<CaseResult> results;
    CaseResult cur;
    for (const std::string& line : split_lines(output)) {
        if (line.rfind("__R__", 0) == 0) {
            cur.error = false;
            cur.repr = line.substr(5);
            results.push_back(cur);
            cur = CaseResult{};
        } else if (line.rfind("__E__", 0) == 0) {
            cur.error = true;
            cur.error_class = line.substr(5);
            results.push_back(cur);
            cur = CaseResult{};
        } else {
            cur.printed.push_back(line);
        }
    }
    return results;
}

ScriptResult run_script(const std::string& program_text, const std::vector<std::string>& tape) {
    fs::path dir = temp_dir();
    fs::path script = dir / "script.py";
    fs::path stdin_file = dir / "stdin.txt";
    {
        std::ofstream out(script);
        out << program_text;
    }
    {
        std::ofstream out(stdin_file);
        for (const auto& v : tape) out << v << "\n";
    }
    int code = 0;
    std::string output = run_command(
        "python3 " + script.string() + " < " + stdin_file.string() + " 2>/dev/null", &code);
    ScriptResult r;
    r.exit_code = code;
    r.stdout_lines = split_lines(output);
    return r;
}

ErrKind error_kind_of(const std::string& exception_class) {
    if (exception_class == "ZeroDivisionError") return ErrKind::DivByZero;
    if (exception_class == "IndexError" || exception_class == "KeyError")
        return ErrKind::IndexOutOfRange;
    if (exception_class == "NameError" || exception_class == "UnboundLocalError")
        return ErrKind::UnboundVariable;
    if (exception_class == "EOFError") return ErrKind::TapeExhausted;
    if (exception_class == "TypeError" || exception_class == "ValueError")
        return ErrKind::TypeError;
    if (exception_class == "OverflowError" || exception_class == "RecursionError")
        return ErrKind::Overflow;
    return ErrKind::TypeError;
}

}  // namespace pyopt::host
