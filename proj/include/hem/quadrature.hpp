#pragma once

// Numerical oracles for the Selberg-type integrals, the disc integrals
// J1/J2/J3, and the boundary fusion integrals. Every routine here is an
// *independent* evaluation path: none of them call the closed forms in
// selberg.hpp/constants.hpp, so agreement between the two is evidence, not
// circularity.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hem/params.hpp"
#include "hem/selberg.hpp"

namespace hem {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0; // for monte-carlo: standard error of the mean
    long long evaluations = 0;
    std::string method; // "adaptive" | "tanh-sinh" | "monte-carlo"
    std::uint64_t seed = 0; // recorded for monte-carlo runs
};

struct QuadDomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// 2-D quadrature of the (2,2) Selberg integrand over (0,1)^2. The diagonal
// |t2-t1|^{2c} is handled by splitting at t1 = t2 and rescaling the inner
// variable, which also concentrates the joint (0,0) singularity at a single
// endpoint; both inner and outer integrals then fall to tanh-sinh rules.
// Requires real args strictly inside the convergence region.
QuadResult quad_selberg22(const SelbergArgs& args, double tol = 1e-9);

// Quadrature of the (2,1) Selberg integral over (0,1) x (1,inf). The outer
// variable is mapped to the unit square by the reciprocal substitution
// t2 = 1/u, after which both variables are tanh-sinh integrable. Requires
// real args with a > 0, b > 0, b + c > 0, a + b + 2c < 1, c > -1/2.
QuadResult quad_selberg21(const SelbergArgs& args, double tol = 1e-8);

enum class J1Method {
    scaled,  // rotation reduction + exact radial power factor (2-D numeric)
    direct3d // honest 3-D nest: outer radius integrated numerically as well
};

// The positive disc integral J1(alpha). Rotation invariance reduces the 4-D
// integral to (r1, r2, relative angle); the joint scaling r -> s*r is exact
// on the integrand, so the overall radial scale can be integrated in closed
// form ("scaled", the default, accurate arbitrarily close to the pole) or
// numerically ("direct3d", a cross-check of that factorization).
// outer_radius restricts both |w1|,|w2| < R for the homogeneity check.
QuadResult quad_J1(double alpha, const Params& p, double tol = 1e-7,
                   J1Method method = J1Method::scaled,
                   double outer_radius = 1.0);

// Plain (uniform-proposal) Monte Carlo evaluation of J1 on the full disc,
// used only as a slow cross-check of the reduced quadrature. The standard
// error is estimated from 256 deterministic batch means.
QuadResult mc_J1(double alpha, const Params& p,
                 long long samples = 30000000, std::uint64_t seed = 911);

enum class BoundaryIntegral {
    I11_same_side,  // both insertions on one boundary half-line
    I11_opposite,   // insertions on opposite half-lines
    half_disc_Re_w2 // half-disc integral weighted by Re(w^{-2})
};

BoundaryIntegral boundary_integral_from_string(const std::string& s);
std::string boundary_integral_name(BoundaryIntegral id);

// Boundary fusion integrals at their leading pure-power approximation.
// All three factorize exactly into (pole factor in alpha) x (1-D integral
// free of the pole); the 1-D part is evaluated by tanh-sinh. This is the
// form residue fits must use: the near-pole exponent lives entirely in the
// analytic factor, so the quadrature error is uniform in alpha.
QuadResult quad_boundary(BoundaryIntegral id, double alpha, const Params& p,
                         double tol = 1e-9);

// Direct 2-D evaluation of the two I11 integrals without the scale
// factorization (half_disc_Re_w2 is genuinely 1-D after its exact polar
// split, so it has no distinct direct form). Only valid comfortably away
// from the pole; used to cross-check quad_boundary.
QuadResult quad_boundary_direct2d(BoundaryIntegral id, double alpha,
                                  const Params& p, double tol = 1e-8);

struct ResidueFit {
    double pole_location = 0.0;
    double residue = 0.0;     // sign convention: f(x) ~ residue/(x - pole)
    double finite_part = 0.0; // constant term C of the fit
    double fit_residual = 0.0; // RMS fit residual relative to the data scale
    std::vector<double> sample_offsets;
    bool ill_conditioned = false;
};

// Geometric offsets window*2^{-k}, k = 0..6 (strictly decreasing toward 0).
std::vector<double> default_offsets(double window = 0.2);

// Least-squares fit of f(pole - d) ~ -R/d + C + D*d over the offsets,
// approaching the pole from below. A large relative residual sets the
// ill_conditioned flag (warning, not an exception).
ResidueFit residue_extrapolate(const std::function<double(double)>& f,
                               double pole, std::vector<double> offsets = {});

} // namespace hem
