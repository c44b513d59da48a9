#include "hem/mc_df.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hem/quadrature.hpp"
#include "hem/rng.hpp"

namespace hem {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Per-variable proposal: equal-weight mixture of three normalized densities
// matched to the three singular loci.
//   ball0:  s0/(soft 2pi) |w|^{s0-2}    on |w| < 1
//   ball1:  s1/(2pi) |1-w|^{s1-2}       on |1-w| < 1
//   tail:   m /(2pi) |w|^{-m-2}         on |w| > 1
struct Mixture {
    double s0, s1, m;
};

// Raw drivers of one variable; kept so a sample can be re-materialized in
// reflected form (antithetic partner) without new draws.
struct Driver {
    double pick, u, ang;
};

struct Point {
    double x, y;      // position
    double rsq, d1sq; // |w|^2, |1-w|^2 (cached for density/integrand)
};

Driver next_driver(CounterRng& rng) {
    Driver d;
    d.pick = rng.next_uniform();
    d.u = rng.next_uniform();
    d.ang = kTwoPi * rng.next_uniform();
    return d;
}

Driver reflect(const Driver& d) {
    // Measure-preserving reflection: radius driver u -> 1-u, angle rotated a
    // half turn, same mixture component. Marginal distribution unchanged.
    return {d.pick, 1.0 - d.u, d.ang + 0.5 * kTwoPi};
}

Point materialize(const Mixture& mix, const Driver& d) {
    Point p;
    double r;
    if (d.pick < 1.0 / 3.0) {
        r = std::pow(d.u, 1.0 / mix.s0);
        p.x = r * std::cos(d.ang);
        p.y = r * std::sin(d.ang);
    } else if (d.pick < 2.0 / 3.0) {
        r = std::pow(d.u, 1.0 / mix.s1);
        p.x = 1.0 + r * std::cos(d.ang);
        p.y = r * std::sin(d.ang);
    } else {
        r = std::pow(d.u, -1.0 / mix.m);
        p.x = r * std::cos(d.ang);
        p.y = r * std::sin(d.ang);
    }
    p.rsq = p.x * p.x + p.y * p.y;
    p.d1sq = (1.0 - p.x) * (1.0 - p.x) + p.y * p.y;
    return p;
}

double density(const Mixture& mix, const Point& p) {
    double q = 0.0;
    if (p.rsq < 1.0)
        q += mix.s0 * std::pow(p.rsq, 0.5 * mix.s0 - 1.0);
    else if (p.rsq > 1.0)
        q += mix.m * std::pow(p.rsq, -0.5 * mix.m - 1.0);
    if (p.d1sq < 1.0)
        q += mix.s1 * std::pow(p.d1sq, 0.5 * mix.s1 - 1.0);
    return q / (3.0 * kTwoPi);
}

}  // namespace

McResult mc_dotsenko_fateev(const SelbergArgs& args,
                            std::complex<double> beta_reg,
                            long long samples, std::uint64_t seed,
                            bool antithetic) {
    const double ar = args.a.real();
    const double br = args.b.real();
    const double ai = args.a.imag();
    const double bi = args.b.imag();
    const double c = args.c.real();
    if (args.c.imag() != 0.0)
        throw std::invalid_argument(
            "mc_dotsenko_fateev: c must be real (c = -gamma^2/4)");
    if (!(c > -0.5 && c < 0.0))
        throw QuadDomainError(
            "mc_dotsenko_fateev: need c in (-1/2, 0) (subcritical gamma)");
    const double gamma = 2.0 * std::sqrt(-c);
    // The b-slot must encode the declared regularization weight.
    const std::complex<double> b_expected = 1.0 - 0.5 * gamma * beta_reg;
    if (std::abs(args.b - b_expected) > 1e-9 * (1.0 + std::abs(args.b)))
        throw std::invalid_argument(
            "mc_dotsenko_fateev: args.b does not match 1 - gamma*beta_reg/2");

    // Absolute-convergence region of the defining integral.
    if (!(ar + c > 0.0))
        throw QuadDomainError(
            "mc_dotsenko_fateev: Re(a)+c <= 0 (alpha >= alpha_{2,1}; "
            "diverges at w = 0)");
    if (!(br + c > 0.0))
        throw QuadDomainError(
            "mc_dotsenko_fateev: Re(b)+c <= 0 (beta too large; joint "
            "divergence at w = 1)");
    if (!(ar + br + c < 1.0))
        throw QuadDomainError(
            "mc_dotsenko_fateev: Re(a)+Re(b)+c >= 1 (Re(beta) <= "
            "-Re(alpha)-gamma/2; diverges at infinity)");
    if (samples < 512)
        throw std::invalid_argument("mc_dotsenko_fateev: samples < 512");

    // Matched proposal exponents: s0 cancels the |w|^{2(a-1)} singularity,
    // s1 the |1-w|^{2(b-1)} one; the tail exponent m equals the joint decay
    // margin 2(1-a-b-c), which keeps the importance ratio bounded when both
    // variables run to infinity together (the binding direction).
    const Mixture mix{2.0 * ar, 2.0 * br, 2.0 * (1.0 - ar - br - c)};

    const double ea = 2.0 * (ar - 1.0);
    const double eb = 2.0 * (br - 1.0);
    const double ec = 4.0 * c;
    const bool complex_path = (ai != 0.0 || bi != 0.0);

    auto weigh = [&](const Point& w1,
                     const Point& w2) -> std::complex<double> {
        const double dx = w1.x - w2.x, dy = w1.y - w2.y;
        const double dsq = dx * dx + dy * dy;
        if (dsq == 0.0 || w1.rsq == 0.0 || w2.rsq == 0.0 ||
            w1.d1sq == 0.0 || w2.d1sq == 0.0)
            return {0.0, 0.0};  // measure-zero loci; skip the blowup
        const double q = density(mix, w1) * density(mix, w2);
        const double mag = std::pow(w1.rsq, 0.5 * ea) *
                           std::pow(w2.rsq, 0.5 * ea) *
                           std::pow(w1.d1sq, 0.5 * eb) *
                           std::pow(w2.d1sq, 0.5 * eb) *
                           std::pow(dsq, 0.5 * ec) / q;
        if (!complex_path) return {mag, 0.0};
        const double phase =
            ai * std::log(w1.rsq * w2.rsq) + bi * std::log(w1.d1sq * w2.d1sq);
        return mag * std::complex<double>(std::cos(phase), std::sin(phase));
    };

    const std::uint64_t n = static_cast<std::uint64_t>(samples);
    const std::size_t nbatch = 256;
    std::vector<std::complex<double>> batch_mean(nbatch, {0.0, 0.0});
    parallel_ranges(
        n, nbatch,
        [&](std::uint64_t first, std::uint64_t last, std::size_t slot) {
            CounterRng rng(seed, slot);
            std::complex<double> acc{0.0, 0.0};
            for (std::uint64_t i = first; i < last; ++i) {
                const Driver d1 = next_driver(rng);
                const Driver d2 = next_driver(rng);
                const Point w1 = materialize(mix, d1);
                const Point w2 = materialize(mix, d2);
                if (antithetic) {
                    // Antithetic pairing: partner sample reflects the first
                    // slot's drivers (u -> 1-u, half-turn rotation), which
                    // in particular moves near-diagonal spikes away from the
                    // diagonal. Two integrand evaluations per base sample;
                    // with the pair average the estimator variance per base
                    // sample halves (or better, when the pair is
                    // anti-correlated).
                    const Point w1r = materialize(mix, reflect(d1));
                    acc += 0.5 * (weigh(w1, w2) + weigh(w1r, w2));
                } else {
                    acc += weigh(w1, w2);
                }
            }
            batch_mean[slot] = acc / static_cast<double>(last - first);
        });

    std::complex<double> mean{0.0, 0.0};
    for (const auto& v : batch_mean) mean += v;
    mean /= static_cast<double>(nbatch);
    double var = 0.0;
    for (const auto& v : batch_mean) var += std::norm(v - mean);
    var /= static_cast<double>(nbatch - 1);

    McResult out;
    out.value = mean;
    out.error_estimate = std::sqrt(var / static_cast<double>(nbatch));
    out.evaluations = antithetic ? 2 * samples : samples;
    out.seed = seed;
    out.batches = static_cast<int>(nbatch);
    return out;
}

McResult mc_dotsenko_fateev_ab(const Params& p, double alpha, double beta,
                               long long samples, std::uint64_t seed,
                               bool antithetic) {
    const double g = p.gamma;
    SelbergArgs args{-0.5 * g * alpha, 1.0 - 0.5 * g * beta, -0.25 * g * g};
    return mc_dotsenko_fateev(args, beta, samples, seed, antithetic);
}

}  // namespace hem
