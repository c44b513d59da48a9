#pragma once

// Kac-point residue constants and the four level-2 HEM prefactors, stated
// (theorem closed forms) and chained (recomposed through the derivation's
// intermediate identities).

#include <functional>
#include <string>
#include <vector>

#include "hem/params.hpp"

namespace hem {

// Residue of the J1 disc integral's meromorphic continuation at alpha_{2,1}.
struct ResidueJ1 {
    double stated;   // -(2/g)(pi G(g^2/4)/G(1-g^2/4))^2 G(1-g^2/2)/G(g^2/2)
    double sin_form; // -(2 pi/g)(G(g^2/4) G(1-g^2/2)/G(1-g^2/4))^2 sin(pi g^2/2)
    // The stated form inherits the closed-form normalization of the complex
    // Selberg formula, which carries an exact factor 2 relative to the
    // plane-measure (dx dy) integral; the residue of the literal integral
    // is therefore stated/2. Kept separate so quadrature oracles have an
    // integral-world reference. See README ("normalization of the complex
    // Selberg closed form").
    double integral_normalized;
};

// Throws PhaseError unless subcritical. Asserts the reflection-formula
// equality of the two closed forms to 1e-12 relative.
ResidueJ1 residue_J1(const Params& p);

// The three boundary residue coefficients (of the boundary primary at the
// reflected Kac weight), plus the common gamma factor
// G = Gamma(g^2/4) Gamma(1-g^2/2) / Gamma(1-g^2/4).
struct BoundaryResidues {
    double res_I2;   // -(1/g) (g^2/4)/(1-g^2/4) sin(pi g^2/4) G
    double res_I11;  // -(2/g) G
    double res_Ix11; // -(2/g) cos(pi g^2/4) G
    double G;
};

// Subcritical: the stated forms. Supercritical: all three residues are
// exactly 0 (the integrals are regular there). Critical: PhaseError.
BoundaryResidues boundary_residues(const Params& p);

enum class HemLabel { bulk12, bulk21, boundary12, boundary21 };

HemLabel hem_label_from_string(const std::string& s);
const char* hem_label_name(HemLabel label);

struct HemConstant {
    HemLabel label;
    double stated;
    double chained;
    Phase phase;
    double ratio() const; // chained / stated (0 if stated == 0)
};

// stated = theorem closed form, chained = recomposition through the
// residue chain. (2,1) labels at the critical point are refused.
HemConstant hem_constant(HemLabel label, const Params& p);
double hem_chain(HemLabel label, const Params& p);

// FZZ conic section: the zero set of the boundary (2,1) bracket
// muL^2 - 2 muL muR cos(pi g^2/4) + muR^2 - mu sin(pi g^2/4).
struct FzzConic {
    double value;
    bool on_conic;
    // real roots in muR of the bracket for given (muL, mu); empty when the
    // discriminant is negative
    std::function<std::vector<double>(double muL, double mu)> solve_muR;
};

constexpr double kTolConic = 1e-10;

FzzConic fzz_conic(const Params& p);

} // namespace hem
