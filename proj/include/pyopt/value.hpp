#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pyopt {

struct Value;
using ListHandle = std::shared_ptr<std::vector<Value>>;

// Insertion-ordered key/value pairs, like a Python dict.
struct DictData {
    std::vector<std::pair<Value, Value>> items;
};
using DictHandle = std::shared_ptr<DictData>;

struct NoneV {
    friend bool operator==(NoneV, NoneV) { return true; }
};

struct Value {
    std::variant<NoneV, bool, long long, double, std::string, ListHandle, DictHandle> v;

    Value() : v(NoneV{}) {}
    static Value none() { return Value(); }
    static Value of(bool b) { Value x; x.v = b; return x; }
    static Value of(long long i) { Value x; x.v = i; return x; }
    static Value of(double f) { Value x; x.v = f; return x; }
    static Value of(std::string s) { Value x; x.v = std::move(s); return x; }
    static Value list(std::vector<Value> items) {
        Value x;
        x.v = std::make_shared<std::vector<Value>>(std::move(items));
        return x;
    }
    static Value dict() {
        Value x;
        x.v = std::make_shared<DictData>();
        return x;
    }

    bool is_none() const { return std::holds_alternative<NoneV>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_int() const { return std::holds_alternative<long long>(v); }
    bool is_float() const { return std::holds_alternative<double>(v); }
    bool is_str() const { return std::holds_alternative<std::string>(v); }
    bool is_list() const { return std::holds_alternative<ListHandle>(v); }
    bool is_dict() const { return std::holds_alternative<DictHandle>(v); }
    bool is_numeric() const { return is_bool() || is_int() || is_float(); }

    bool as_bool() const { return std::get<bool>(v); }
    long long as_int() const { return std::get<long long>(v); }
    double as_float() const { return std::get<double>(v); }
    const std::string& as_str() const { return std::get<std::string>(v); }
    const ListHandle& as_list() const { return std::get<ListHandle>(v); }
    const DictHandle& as_dict() const { return std::get<DictHandle>(v); }

    // Numeric value widened to double (bools count as 0/1).
    double numeric() const;
    bool truthy() const;
    const char* type_name() const;
};

// Python == semantics: numeric kinds compare by value across types,
// containers compare elementwise, mismatched kinds are unequal.
bool py_eq(const Value& a, const Value& b);

// Type-sensitive deep equality used for outcome comparison
// (1, 1.0 and True are pairwise distinct).
bool strict_equal(const Value& a, const Value& b);

// Like strict_equal but floats compare within a tolerance.
bool close_equal(const Value& a, const Value& b, double tol);

std::string repr_value(const Value& v);
std::string str_value(const Value& v);

}  // namespace pyopt
