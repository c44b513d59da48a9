#pragma once

// Importance-sampled Monte Carlo for the equal-argument complex
// Dotsenko-Fateev integral over the full plane,
//
//   J(a,b,c) = int_{C^2} |w1 w2|^{2(a-1)} |(1-w1)(1-w2)|^{2(b-1)}
//              |w1-w2|^{4c}  dx1 dy1 dx2 dy2,
//
// the dxdy-normalized object the closed form neretin_plane_integral
// continues. In insertion-weight variables a = -gamma*alpha/2,
// b = 1 - gamma*beta/2, c = -gamma^2/4, this is the beta-regularized
// two-point disc-to-plane integral whose residue at alpha_{2,1} drives the
// bulk (2,1) coefficient chain.
//
// Proposal: per variable, an equal-weight three-component mixture matched
// to the three singular loci -- a power ball at 0, a power ball at 1, and a
// power tail at infinity. The diagonal |w1-w2|^{4c} is not
// importance-sampled; its second moment is finite for gamma < 1 and
// log-divergent at gamma = 1, which is why the standard error comes from
// 256 batch means rather than the raw sample variance.

#include <complex>
#include <cstdint>
#include <string>

#include "hem/selberg.hpp"

namespace hem {

struct McResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;  // standard error of the (complex) mean
    long long evaluations = 0;
    std::string method = "monte-carlo";
    std::uint64_t seed = 0;
    int batches = 0;
};

inline constexpr std::uint64_t kMcDefaultSeed = 424243;

// args fully determines the integrand; beta_reg is the regularization
// weight the b-slot encodes and must satisfy b = 1 - gamma*Re(beta_reg)/2
// (checked; mismatch is an invalid_argument). An imaginary part of beta_reg
// phase-modulates the |1-w| factors and produces a complex value.
//
// antithetic=true pairs every base sample with a partner whose first-slot
// drivers are reflected (radius uniform u -> 1-u, angle rotated a half
// turn; a measure-preserving map, so the pair average stays unbiased).
// Each base sample then costs two integrand evaluations, and the variance
// per base sample halves, or better: the reflection moves near-diagonal
// spikes off the diagonal, anti-correlating the pair exactly where the
// integrand is largest. `evaluations` in the result reports the true count.
//
// Throws QuadDomainError outside the absolute-convergence region
//   Re(a)+c > 0,  Re(b)+c > 0,  Re(a)+Re(b)+c < 1,  c in (-1/2, 0).
McResult mc_dotsenko_fateev(const SelbergArgs& args,
                            std::complex<double> beta_reg,
                            long long samples,
                            std::uint64_t seed = kMcDefaultSeed,
                            bool antithetic = true);

// Convenience: build args from (gamma, alpha, beta) and run.
McResult mc_dotsenko_fateev_ab(const Params& p, double alpha, double beta,
                               long long samples,
                               std::uint64_t seed = kMcDefaultSeed,
                               bool antithetic = true);

}  // namespace hem
