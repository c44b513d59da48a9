#pragma once
// Check results and verification reports: the one result currency every
// suite and CLI command speaks.
//
// A report serializes to canonical JSON (keys sorted, no timing fields) so
// that two runs with the same seed are byte-identical, and to CSV for
// sweep-style consumption. Timing is kept on the side and only written when
// explicitly requested.

#include <cstdint>
#include <string>
#include <vector>

namespace hem {

inline constexpr const char* kHemVersion = "1.0.0";

// A single verified statement. `citation` is the formula anchor the check
// tests, quoted as an equality (the registry lint rejects strings without
// an '='). `stated` is the claimed value, `oracle` the independently
// computed one, and `kind` records how the two were compared:
//   exact - bitwise / symbolic, tolerance 0
//   abs   - |stated - oracle| <= tolerance
//   rel   - |stated - oracle| <= tolerance * |stated|
//   stat  - |stated - oracle| <= tolerance, tolerance derived from a
//           standard error (already multiplied by the sigma level)
struct CheckResult {
    std::string id;
    std::string citation;
    double stated = 0.0;
    double oracle = 0.0;
    double tolerance = 0.0;
    std::string kind = "abs";
    bool pass = false;
    // Smoke-mode statistical checks report inconclusive instead of a
    // verdict; inconclusive checks never fail a report.
    bool inconclusive = false;
    std::string note;  // optional context (documented findings, units)
    double runtime_ms = 0.0;
};

CheckResult check_exact(const std::string& id, const std::string& citation,
                        double stated, double oracle);
CheckResult check_abs(const std::string& id, const std::string& citation,
                      double stated, double oracle, double tol);
CheckResult check_rel(const std::string& id, const std::string& citation,
                      double stated, double oracle, double rel_tol);
CheckResult check_stat(const std::string& id, const std::string& citation,
                       double stated, double oracle, double tol);

struct VerificationReport {
    std::string suite;
    std::vector<CheckResult> checks;
    std::uint64_t seed = 0;
    std::string version = kHemVersion;
    std::string build_hash;  // filled by make_report from the build stamp

    bool all_pass() const;       // every check passes or is inconclusive
    bool any_inconclusive() const;
    const char* status() const;  // "pass" | "fail" | "inconclusive"
    // 0 when all_pass (inconclusive included), else 1. Usage errors are the
    // CLI's business (exit 2 there) and never reach a report.
    int exit_code() const;

    // Canonical JSON: object keys sorted, floats in shortest round-trip
    // form, no timing unless include_timing. Identical runs produce
    // identical bytes.
    std::string to_json(bool include_timing = false) const;
    // CSV with one row per check; includes runtime_ms (CSV is for humans
    // and plots, not for byte comparison).
    std::string to_csv() const;
};

// Report with version and build hash stamped in.
VerificationReport make_report(const std::string& suite, std::uint64_t seed);

// Registry lint: every check must carry a non-empty citation containing an
// '=' (a formula, not a bare label), and ids must be unique and non-empty.
// Throws std::logic_error naming the offenders.
void lint_citations(const VerificationReport& report);

// Small file helper shared by CLI persistence paths.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace hem
