#pragma once
// Minimal TOML subset for flat config tables: [section] headers, key = value
// with value one of string, bool, integer, float, or a float array. Enough
// for run configs; nesting and dates are out of scope on purpose.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hem::toml {

struct Value {
    enum class Kind { str, boolean, integer, real, real_array } kind = Kind::str;
    std::string s;
    bool b = false;
    std::int64_t i = 0;
    double d = 0.0;
    std::vector<double> arr;

    static Value of(const std::string& v);
    static Value of(bool v);
    static Value of(std::int64_t v);
    static Value of(double v);
    static Value of(const std::vector<double>& v);
};

using Table = std::map<std::string, std::map<std::string, Value>>;

Table parse(const std::string& text);            // throws hem::ConfigError
std::string serialize(const Table& t);           // sections and keys sorted
std::string format_double(double v);             // shortest round-trip form

}  // namespace hem::toml
