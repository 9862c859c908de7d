#include "pyopt/value.hpp"

#include <cmath>

#include "pyopt/printer.hpp"

namespace pyopt {

double Value::numeric() const {
    if (is_bool()) return as_bool() ? 1.0 : 0.0;
    if (is_int()) return static_cast<double>(as_int());
    return as_float();
}

bool Value::truthy() const {
    if (is_none()) return false;
    if (is_bool()) return as_bool();
    if (is_int()) return as_int() != 0;
    if (is_float()) return as_float() != 0.0;
    if (is_str()) return !as_str().empty();
    if (is_list()) return !as_list()->empty();
    return !as_dict()->items.empty();
}

const char* Value::type_name() const {
    if (is_none()) return "NoneType";
    if (is_bool()) return "bool";
    if (is_int()) return "int";
    if (is_float()) return "float";
    if (is_str()) return "str";
    if (is_list()) return "list";
    return "dict";
}

bool py_eq(const Value& a, const Value& b) {
    if (a.is_numeric() && b.is_numeric()) {
        if (a.is_float() || b.is_float()) return a.numeric() == b.numeric();
        long long x = a.is_bool() ? (a.as_bool() ? 1 : 0) : a.as_int();
        long long y = b.is_bool() ? (b.as_bool() ? 1 : 0) : b.as_int();
        return x == y;
    }
    if (a.is_none() && b.is_none()) return true;
    if (a.is_str() && b.is_str()) return a.as_str() == b.as_str();
    if (a.is_list() && b.is_list()) {
        const auto& x = *a.as_list();
        const auto& y = *b.as_list();
        if (x.size() != y.size()) return false;
        for (size_t i = 0; i < x.size(); ++i)
            if (!py_eq(x[i], y[i])) return false;
        return true;
    }
    if (a.is_dict() && b.is_dict()) {
        const auto& x = a.as_dict()->items;
        const auto& y = b.as_dict()->items;
        if (x.size() != y.size()) return false;
        for (const auto& [k, v] : x) {
            bool found = false;
            for (const auto& [k2, v2] : y) {
                if (py_eq(k, k2)) {
                    if (!py_eq(v, v2)) return false;
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
        return true;
    }
    return false;
}

namespace {

template <class FloatEq>
bool deep_equal(const Value& a, const Value& b, FloatEq float_eq) {
    if (a.v.index() != b.v.index()) return false;
    if (a.is_none()) return true;
    if (a.is_bool()) return a.as_bool() == b.as_bool();
    if (a.is_int()) return a.as_int() == b.as_int();
    if (a.is_float()) return float_eq(a.as_float(), b.as_float());
    if (a.is_str()) return a.as_str() == b.as_str();
    if (a.is_list()) {
        const auto& x = *a.as_list();
        const auto& y = *b.as_list();
        if (x.size() != y.size()) return false;
        for (size_t i = 0; i < x.size(); ++i)
            if (!deep_equal(x[i], y[i], float_eq)) return false;
        return true;
    }
    const auto& x = a.as_dict()->items;
    const auto& y = b.as_dict()->items;
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i) {
        if (!deep_equal(x[i].first, y[i].first, float_eq)) return false;
        if (!deep_equal(x[i].second, y[i].second, float_eq)) return false;
    }
    return true;
}

}  // namespace

bool strict_equal(const Value& a, const Value& b) {
    return deep_equal(a, b, [](double x, double y) {
        if (std::isnan(x) && std::isnan(y)) return true;
        return x == y;
    });
}

bool close_equal(const Value& a, const Value& b, double tol) {
    return deep_equal(a, b, [tol](double x, double y) {
        if (std::isnan(x) && std::isnan(y)) return true;
        return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
    });
}

std::string repr_value(const Value& v) {
    if (v.is_none()) return "None";
    if (v.is_bool()) return v.as_bool() ? "True" : "False";
    if (v.is_int()) return std::to_string(v.as_int());
    if (v.is_float()) return format_float(v.as_float());
    if (v.is_str()) return format_literal(Literal::make_str(v.as_str()));
    if (v.is_list()) {
        std::string out = "[";
        const auto& items = *v.as_list();
        for (size_t i = 0; i < items.size(); ++i) {
            if (i) out += ", ";
            out += repr_value(items[i]);
        }
        return out + "]";
    }
    std::string out = "{";
    const auto& items = v.as_dict()->items;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += repr_value(items[i].first) + ": " + repr_value(items[i].second);
    }
    return out + "}";
}

std::string str_value(const Value& v) {
    if (v.is_str()) return v.as_str();
    return repr_value(v);
}

}  // namespace pyopt
