#include "hem/toml_lite.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "hem/params.hpp"

namespace hem::toml {

Value Value::of(const std::string& v) { Value x; x.kind = Kind::str; x.s = v; return x; }
Value Value::of(bool v) { Value x; x.kind = Kind::boolean; x.b = v; return x; }
Value Value::of(std::int64_t v) { Value x; x.kind = Kind::integer; x.i = v; return x; }
Value Value::of(double v) { Value x; x.kind = Kind::real; x.d = v; return x; }
Value Value::of(const std::vector<double>& v) { Value x; x.kind = Kind::real_array; x.arr = v; return x; }

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Value parse_scalar(const std::string& raw, int lineno) {
    std::string v = trim(raw);
    if (v.empty()) throw ConfigError("toml line " + std::to_string(lineno) + ": empty value");
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"')
            throw ConfigError("toml line " + std::to_string(lineno) + ": unterminated string");
        return Value::of(v.substr(1, v.size() - 2));
    }
    if (v == "true") return Value::of(true);
    if (v == "false") return Value::of(false);
    if (v.find('.') == std::string::npos && v.find('e') == std::string::npos &&
        v.find('E') == std::string::npos && v.find("inf") == std::string::npos &&
        v.find("nan") == std::string::npos) {
        std::int64_t iv = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), iv);
        if (ec == std::errc{} && p == v.data() + v.size()) return Value::of(iv);
    }
    try {
        size_t used = 0;
        double dv = std::stod(v, &used);
        if (used == v.size()) return Value::of(dv);
    } catch (...) {
    }
    throw ConfigError("toml line " + std::to_string(lineno) + ": cannot parse value '" + v + "'");
}

}  // namespace

Table parse(const std::string& text) {
    Table out;
    std::string section;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        // strip comments outside strings
        bool in_str = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_str = !in_str;
            if (line[i] == '#' && !in_str) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("toml line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("toml line " + std::to_string(lineno) + ": empty section name");
            out[section];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("toml line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("toml line " + std::to_string(lineno) + ": empty key");
        if (!val.empty() && val.front() == '[') {
            if (val.back() != ']')
                throw ConfigError("toml line " + std::to_string(lineno) + ": unterminated array");
            Value arr;
            arr.kind = Value::Kind::real_array;
            std::string body = val.substr(1, val.size() - 2);
            std::istringstream es(body);
            std::string elem;
            while (std::getline(es, elem, ',')) {
                elem = trim(elem);
                if (elem.empty()) continue;
                Value ev = parse_scalar(elem, lineno);
                arr.arr.push_back(ev.kind == Value::Kind::integer ? static_cast<double>(ev.i) : ev.d);
            }
            out[section][key] = arr;
        } else {
            out[section][key] = parse_scalar(val, lineno);
        }
    }
    return out;
}

std::string format_double(double v) {
    // shortest representation that round-trips exactly
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::stod(buf) == v) break;
    }
    std::string s = buf;
    // force a float marker so the reader keeps the type
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

std::string serialize(const Table& t) {
    std::ostringstream os;
    bool first = true;
    for (auto& [section, kv] : t) {
        if (!first) os << "\n";
        first = false;
        os << "[" << section << "]\n";
        for (auto& [key, v] : kv) {
            os << key << " = ";
            switch (v.kind) {
                case Value::Kind::str: os << '"' << v.s << '"'; break;
                case Value::Kind::boolean: os << (v.b ? "true" : "false"); break;
                case Value::Kind::integer: os << v.i; break;
                case Value::Kind::real: os << format_double(v.d); break;
                case Value::Kind::real_array: {
                    os << "[";
                    for (size_t i = 0; i < v.arr.size(); ++i)
                        os << (i ? ", " : "") << format_double(v.arr[i]);
                    os << "]";
                    break;
                }
            }
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace hem::toml
