#pragma once
// Coupling parameters and Kac-table bookkeeping shared by every module.

#include <complex>
#include <stdexcept>
#include <string>

namespace hem {

struct Params {
    double gamma = 1.0;  // in (0, 2)
    double mu = 1.0;     // bulk cosmological constant, >= 0 (0 = free-field degeneration)
    double mu_l = 1.0;   // left boundary weight, >= 0
    double mu_r = 1.0;   // right boundary weight, >= 0

    void validate() const;

    double b() const { return gamma / 2.0; }
    double Q() const { return gamma / 2.0 + 2.0 / gamma; }
    double central_charge() const { return 1.0 + 6.0 * Q() * Q(); }
};

// Degenerate-weight label (r,s) with a sign picking which of the two
// reflection-related weights is meant; CLI syntax "r,s,+" / "r,s,-".
struct KacLabel {
    int r = 1;
    int s = 1;
    int sign = -1;  // -1 is the physical branch alpha_{r,s}; +1 is 2Q - alpha_{r,s}
    static KacLabel parse(const std::string& text);
    std::string str() const;
};

double kac_alpha(const Params& p, const KacLabel& label);
double kac_alpha_rs(double gamma, int r, int s);  // (1-r) gamma/2 + (1-s) 2/gamma

std::complex<double> delta_weight(const Params& p, std::complex<double> alpha);

enum class Phase { subcritical, critical, supercritical };

// gamma < sqrt(2): both HEM families have nonzero constants. gamma > sqrt(2):
// the (2,1) family constants vanish identically. Within eps_phase of the
// threshold no (2,1) statement is defensible either way, so computations at
// the wall must refuse rather than guess.
inline constexpr double eps_phase = 1e-9;
Phase classify_phase(double gamma);
const char* phase_name(Phase ph);

struct PhaseError : std::domain_error {
    explicit PhaseError(const std::string& w) : std::domain_error(w) {}
};
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& w) : std::runtime_error(w) {}
};

// Flat TOML subset reader/writer used for [params] tables.
Params params_from_toml_text(const std::string& text);
std::string params_to_toml_text(const Params& p);

}  // namespace hem
