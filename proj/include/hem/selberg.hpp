#pragma once

// Selberg S_{2,2} / S_{2,1} closed forms and the complex Dotsenko-Fateev
// closed form, with meromorphic-continuation bookkeeping.
//
// Values are computed as products of gamma / sine factors in signed-log
// space. For evaluations parametrized along a real affine line
// (a,b,c)(t) = base + t*dir, each factor's argument is affine in t, so
// poles and zeros are classified symbolically: a factor sitting at a pole
// (or zero) contributes its exact order and leading coefficient instead of
// a float overflow. Net order -1 yields a tagged simple pole with residue
// in t; net order <= -2 is refused (only simple poles are supported).

#include <optional>
#include <stdexcept>

#include "hem/params.hpp"
#include "hem/special.hpp"

namespace hem {

struct SelbergArgs {
    cplx a, b, c;
};

// args(t) = base + t * dir with real coefficients (imaginary parts of base
// and dir must be zero for pole bookkeeping; use plain-args calls for
// complex parameters).
struct SelbergLine {
    SelbergArgs base, dir;
};

// Uniform return type for continued integral values.
// residue is present iff pole_flag; it is the residue in the line parameter
// t for *_line calls, and along a unit displacement of `a` for plain-args
// calls (the only residues the verification flows consume are t-residues).
// At a tagged pole, `value` holds the finite part of the Laurent expansion.
struct MeroSample {
    cplx point;
    cplx value;
    std::optional<cplx> residue;
    bool pole_flag = false;
};

struct UnsupportedPoleOrder : std::domain_error {
    using std::domain_error::domain_error;
};

// Convergence-region predicates of the defining integrals (not of the
// closed forms, which continue meromorphically).
bool s22_convergent(const SelbergArgs& args);
bool s21_convergent(const SelbergArgs& args);

MeroSample selberg22(const SelbergArgs& args);
MeroSample selberg22_line(const SelbergLine& line, double t);
MeroSample selberg21(const SelbergArgs& args);
MeroSample selberg21_line(const SelbergLine& line, double t);

// Closed form for the 2-variable complex integral with holomorphic
// exponents (a,b,c) and antiholomorphic (a~,b~,c~); the differences must be
// integers. Equal arguments give the rotation-invariant case used by the
// J-integral continuation.
MeroSample neretin_df(const SelbergArgs& holo, const SelbergArgs& anti);
MeroSample neretin_df_line(const SelbergLine& holo, const SelbergLine& anti,
                           double t);

// The closed form above carries an exact factor 2 relative to the plane
// Lebesgue integral (dx dy per complex variable) it continues: verified
// analytically in the c -> 0 decoupling limit, where the formula's sine
// ratio sin(pi(1+2c))/sin(pi(1+c)) -> 2 while the integral factorizes into
// the square of the complex beta integral, and confirmed by direct Monte
// Carlo (ratio 0.499 +- 0.002 at (a,b,c) = (0.5,0.4,-0.25)). These helpers
// return the integral-normalized value.
constexpr double kNeretinFormulaToIntegral = 0.5;
cplx neretin_plane_integral(const SelbergArgs& holo, const SelbergArgs& anti);

// Standard parameter lines used by the residue chains, parametrized by the
// insertion weight alpha.
SelbergLine def_R_line(const Params& p);                       // (1, -g a/2, -g^2/4)
SelbergLine neretin_equal_args_line(const Params& p, double beta);

} // namespace hem
