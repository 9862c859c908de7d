#include "pyopt/manifest.hpp"

#include <fstream>
#include <json.hpp>

#include "pyopt/errors.hpp"

namespace pyopt {

namespace {

Value json_to_value(const nlohmann::json& j) {
    if (j.is_boolean()) return Value::of(j.get<bool>());
    if (j.is_number_integer()) return Value::of(j.get<long long>());
    if (j.is_number_float()) return Value::of(j.get<double>());
    if (j.is_string()) return Value::of(j.get<std::string>());
    if (j.is_array()) {
        std::vector<Value> items;
        for (const auto& e : j) items.push_back(json_to_value(e));
        return Value::list(std::move(items));
    }
    if (j.is_null()) return Value::none();
    throw ManifestMismatch("unsupported JSON value in manifest case");
}

}  // namespace

TestManifest parse_manifest(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    TestManifest m;
    m.entry = j.value("entry", std::string());
    m.fuel = j.value("fuel", 1'000'000LL);
    std::string compare = j.value("compare", std::string("exact"));
    if (compare == "numeric")
        m.compare = CompareMode::Numeric;
    else if (compare != "exact")
        throw ManifestMismatch("unknown compare mode: " + compare);
    m.tolerance = j.value("tolerance", 1e-9);
    if (!j.contains("cases") || !j["cases"].is_array())
        throw ManifestMismatch("manifest has no cases array");
    for (const auto& c : j["cases"]) {
        TestCase tc;
        if (c.contains("args"))
            for (const auto& a : c["args"]) tc.args.push_back(json_to_value(a));
        if (c.contains("input"))
            for (const auto& v : c["input"]) {
                if (v.is_string())
                    tc.input.push_back(v.get<std::string>());
                else
                    tc.input.push_back(v.dump());
            }
        m.cases.push_back(std::move(tc));
    }
    m.validate();
    return m;
}

TestManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ManifestMismatch("cannot open manifest: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_manifest(text);
}

}  // namespace pyopt
