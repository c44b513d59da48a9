#include "hem/constants.hpp"

#include <cmath>
#include <stdexcept>

#include "hem/special.hpp"

namespace hem {

namespace {

void require_noncritical(const Params& p, const char* what) {
    if (classify_phase(p.gamma) == Phase::critical) {
        throw PhaseError(std::string(what) +
                         ": gamma at the critical point sqrt(2) is not "
                         "supported");
    }
}

double gamma_factor_G(double gamma) {
    const double g2 = gamma * gamma;
    LogSigned v = log_gamma_signed(g2 / 4.0) * log_gamma_signed(1.0 - g2 / 2.0) /
                  log_gamma_signed(1.0 - g2 / 4.0);
    return v.value();
}

} // namespace

ResidueJ1 residue_J1(const Params& p) {
    p.validate();
    require_noncritical(p, "residue_J1");
    if (classify_phase(p.gamma) == Phase::supercritical) {
        throw PhaseError("residue_J1: defined for gamma < sqrt(2) only");
    }
    const double g = p.gamma, g2 = g * g;
    // stated: -(2/g) (pi Gamma(g^2/4)/Gamma(1-g^2/4))^2 Gamma(1-g^2/2)/Gamma(g^2/2)
    LogSigned ratio_sq = log_gamma_signed(g2 / 4.0) / log_gamma_signed(1.0 - g2 / 4.0);
    LogSigned stated_ls = ratio_sq * ratio_sq *
                          (log_gamma_signed(1.0 - g2 / 2.0) / log_gamma_signed(g2 / 2.0));
    double stated = -(2.0 / g) * M_PI * M_PI * stated_ls.value();
    // proof form: -(2 pi/g) (Gamma(g^2/4) Gamma(1-g^2/2)/Gamma(1-g^2/4))^2 sin(pi g^2/2)
    double G = gamma_factor_G(g);
    double sin_form = -(2.0 * M_PI / g) * G * G * std::sin(M_PI * g2 / 2.0);
    double rel = std::abs(stated - sin_form) / std::abs(stated);
    if (rel > 1e-12) {
        throw std::logic_error(
            "residue_J1: reflection-formula equivalence of the two closed "
            "forms failed (relative gap " + std::to_string(rel) + ")");
    }
    return {stated, sin_form, stated / 2.0};
}

BoundaryResidues boundary_residues(const Params& p) {
    p.validate();
    require_noncritical(p, "boundary_residues");
    const double g = p.gamma, g2 = g * g;
    const double G = gamma_factor_G(g);
    if (classify_phase(p.gamma) == Phase::supercritical) {
        return {0.0, 0.0, 0.0, G};
    }
    double res_I2 =
        -(1.0 / g) * (g2 / 4.0) / (1.0 - g2 / 4.0) * std::sin(M_PI * g2 / 4.0) * G;
    double res_I11 = -(2.0 / g) * G;
    double res_Ix11 = -(2.0 / g) * std::cos(M_PI * g2 / 4.0) * G;
    return {res_I2, res_I11, res_Ix11, G};
}

HemLabel hem_label_from_string(const std::string& s) {
    if (s == "bulk12") return HemLabel::bulk12;
    if (s == "bulk21") return HemLabel::bulk21;
    if (s == "boundary12") return HemLabel::boundary12;
    if (s == "boundary21") return HemLabel::boundary21;
    throw ConfigError("unknown HEM constant label: " + s);
}

const char* hem_label_name(HemLabel label) {
    switch (label) {
    case HemLabel::bulk12: return "bulk12";
    case HemLabel::bulk21: return "bulk21";
    case HemLabel::boundary12: return "boundary12";
    case HemLabel::boundary21: return "boundary21";
    }
    return "?";
}

double HemConstant::ratio() const {
    return stated == 0.0 ? 0.0 : chained / stated;
}

namespace {

bool is21(HemLabel l) {
    return l == HemLabel::bulk21 || l == HemLabel::boundary21;
}

double stated_constant(HemLabel label, const Params& p) {
    const double g = p.gamma, g2 = g * g;
    switch (label) {
    case HemLabel::bulk12: {
        double f = 1.0 - g2 / 4.0;
        return M_PI * p.mu * (8.0 / (g2 * g)) * f * f;
    }
    case HemLabel::bulk21: {
        if (classify_phase(g) == Phase::supercritical) return 0.0;
        LogSigned r = log_gamma_signed(g2 / 4.0) / log_gamma_signed(1.0 - g2 / 4.0);
        double pr = (M_PI * p.mu) * (M_PI * p.mu) * (r * r).value();
        return -(g2 * g2 * g / 32.0) * pr *
               (log_gamma_signed(1.0 - g2 / 2.0) / log_gamma_signed(g2 / 2.0)).value();
    }
    case HemLabel::boundary12: {
        return (4.0 / g2) * (1.0 - g2 / 4.0) * (p.mu_l + p.mu_r);
    }
    case HemLabel::boundary21: {
        if (classify_phase(g) == Phase::supercritical) return 0.0;
        double G = gamma_factor_G(g);
        double bracket = p.mu_l * p.mu_l -
                         2.0 * p.mu_l * p.mu_r * std::cos(M_PI * g2 / 4.0) +
                         p.mu_r * p.mu_r - p.mu * std::sin(M_PI * g2 / 4.0);
        return (g2 * g / 8.0) * G * bracket;
    }
    }
    throw std::logic_error("unreachable");
}

} // namespace

double hem_chain(HemLabel label, const Params& p) {
    p.validate();
    if (is21(label)) require_noncritical(p, "hem_chain");
    const double g = p.gamma, g2 = g * g;
    const double a12 = -2.0 / g, a21 = -g / 2.0;
    switch (label) {
    case HemLabel::bulk12: {
        // level-2 singular coefficient at a12 (squared, bulk) times the
        // Poisson-operator prefactor and the simple-pole residue of the
        // one-insertion disc integral
        double pre = a12 * a12 * (a12 - a21) * (a12 - a21);
        return pre * (-p.mu * g2 / 4.0) * (-2.0 * M_PI / g);
    }
    case HemLabel::bulk21: {
        if (classify_phase(g) == Phase::supercritical) return 0.0;
        double rj1 = residue_J1(p).stated;
        return a21 * a21 * (p.mu * p.mu * g2 * g2 / 16.0) * rj1;
    }
    case HemLabel::boundary12: {
        // derivative of the boundary singular coefficient 2a(a-a12)(a-a21)
        // at a12, times the boundary Poisson prefactor -(g/4)(muL+muR) and
        // the boundary residue -2/g of the one-insertion line integral
        double pre = 2.0 * a12 * (a12 - a21);
        return pre * (-g / 4.0) * (p.mu_l + p.mu_r) * (-2.0 / g);
    }
    case HemLabel::boundary21: {
        if (classify_phase(g) == Phase::supercritical) return 0.0;
        BoundaryResidues r = boundary_residues(p);
        // composition of the meromorphic expansion of the Poisson operator
        // with the three residue coefficients and prefactor 2 a21
        double inner = -(g / 2.0) * (a21 - a12) * p.mu * r.res_I2 +
                       (g2 / 8.0) * (p.mu_l * p.mu_l + p.mu_r * p.mu_r) * r.res_I11 -
                       (g2 / 4.0) * p.mu_l * p.mu_r * r.res_Ix11;
        return 2.0 * a21 * inner;
    }
    }
    throw std::logic_error("unreachable");
}

HemConstant hem_constant(HemLabel label, const Params& p) {
    p.validate();
    if (is21(label)) require_noncritical(p, "hem_constant");
    HemConstant out;
    out.label = label;
    out.phase = classify_phase(p.gamma);
    out.stated = stated_constant(label, p);
    out.chained = hem_chain(label, p);
    return out;
}

FzzConic fzz_conic(const Params& p) {
    p.validate();
    const double g2 = p.gamma * p.gamma;
    const double cosv = std::cos(M_PI * g2 / 4.0);
    const double sinv = std::sin(M_PI * g2 / 4.0);
    FzzConic out;
    out.value = p.mu_l * p.mu_l - 2.0 * p.mu_l * p.mu_r * cosv +
                p.mu_r * p.mu_r - p.mu * sinv;
    double scale = std::max({1.0, p.mu_l * p.mu_l, p.mu_r * p.mu_r, p.mu});
    out.on_conic = std::abs(out.value) <= kTolConic * scale;
    out.solve_muR = [cosv, sinv](double muL, double mu) {
        // muR^2 - 2 muL cos * muR + (muL^2 - mu sin) = 0
        double disc = muL * muL * cosv * cosv - (muL * muL - mu * sinv);
        std::vector<double> roots;
        if (disc >= 0.0) {
            double s = std::sqrt(disc);
            roots.push_back(muL * cosv - s);
            roots.push_back(muL * cosv + s);
        }
        return roots;
    };
    return out;
}

} // namespace hem
