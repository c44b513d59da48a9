#include "hem/report.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace hem {

namespace {

CheckResult base_check(const std::string& id, const std::string& citation,
                       double stated, double oracle, double tol,
                       const char* kind) {
    CheckResult c;
    c.id = id;
    c.citation = citation;
    c.stated = stated;
    c.oracle = oracle;
    c.tolerance = tol;
    c.kind = kind;
    return c;
}

}  // namespace

CheckResult check_exact(const std::string& id, const std::string& citation,
                        double stated, double oracle) {
    CheckResult c = base_check(id, citation, stated, oracle, 0.0, "exact");
    c.pass = stated == oracle;
    return c;
}

CheckResult check_abs(const std::string& id, const std::string& citation,
                      double stated, double oracle, double tol) {
    CheckResult c = base_check(id, citation, stated, oracle, tol, "abs");
    c.pass = std::isfinite(oracle) && std::abs(stated - oracle) <= tol;
    return c;
}

CheckResult check_rel(const std::string& id, const std::string& citation,
                      double stated, double oracle, double rel_tol) {
    CheckResult c = base_check(id, citation, stated, oracle, rel_tol, "rel");
    c.pass = std::isfinite(oracle) &&
             std::abs(stated - oracle) <= rel_tol * std::abs(stated);
    return c;
}

CheckResult check_stat(const std::string& id, const std::string& citation,
                       double stated, double oracle, double tol) {
    CheckResult c = base_check(id, citation, stated, oracle, tol, "stat");
    c.pass = std::isfinite(oracle) && std::abs(stated - oracle) <= tol;
    return c;
}

bool VerificationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass && !c.inconclusive) return false;
    return true;
}

bool VerificationReport::any_inconclusive() const {
    for (const auto& c : checks)
        if (c.inconclusive) return true;
    return false;
}

const char* VerificationReport::status() const {
    if (!all_pass()) return "fail";
    if (any_inconclusive()) return "inconclusive";
    return "pass";
}

int VerificationReport::exit_code() const { return all_pass() ? 0 : 1; }

std::string VerificationReport::to_json(bool include_timing) const {
    nlohmann::json root;  // nlohmann::json orders object keys, so the
                          // serialization is canonical by construction
    root["suite"] = suite;
    root["status"] = status();
    root["environment"] = {
        {"build_hash", build_hash},
        {"seed", seed},
        {"version", version},
    };
    nlohmann::json arr = nlohmann::json::array();
    double total_ms = 0.0;
    for (const auto& c : checks) {
        nlohmann::json j;
        j["id"] = c.id;
        j["citation"] = c.citation;
        j["stated"] = c.stated;
        j["oracle"] = c.oracle;
        j["tolerance"] = c.tolerance;
        j["kind"] = c.kind;
        j["pass"] = c.pass;
        if (c.inconclusive) j["inconclusive"] = true;
        if (!c.note.empty()) j["note"] = c.note;
        if (include_timing) j["runtime_ms"] = c.runtime_ms;
        total_ms += c.runtime_ms;
        arr.push_back(std::move(j));
    }
    root["checks"] = std::move(arr);
    if (include_timing) root["total_runtime_ms"] = total_ms;
    return root.dump(2) + "\n";
}

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += "\"";
    return out;
}

}  // namespace

std::string VerificationReport::to_csv() const {
    std::string out =
        "id,citation,stated,oracle,tolerance,kind,pass,inconclusive,"
        "runtime_ms\n";
    char buf[512];
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s,%d,%d,%.3f\n",
                      c.stated, c.oracle, c.tolerance, c.kind.c_str(),
                      c.pass ? 1 : 0, c.inconclusive ? 1 : 0, c.runtime_ms);
        out += csv_quote(c.id) + "," + csv_quote(c.citation) + "," + buf;
    }
    return out;
}

VerificationReport make_report(const std::string& suite, std::uint64_t seed) {
    VerificationReport r;
    r.suite = suite;
    r.seed = seed;
    r.version = kHemVersion;
#ifdef HEM_BUILD_HASH
    r.build_hash = HEM_BUILD_HASH;
#else
    r.build_hash = "unstamped";
#endif
    return r;
}

void lint_citations(const VerificationReport& report) {
    std::string bad;
    std::set<std::string> seen;
    for (const auto& c : report.checks) {
        if (c.id.empty()) bad += "  (empty id)\n";
        else if (!seen.insert(c.id).second) bad += "  duplicate id: " + c.id + "\n";
        if (c.citation.empty() || c.citation.find('=') == std::string::npos)
            bad += "  " + (c.id.empty() ? std::string("?") : c.id) +
                   ": citation lacks a formula anchor\n";
    }
    if (!bad.empty())
        throw std::logic_error("check registry lint failed:\n" + bad);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace hem
