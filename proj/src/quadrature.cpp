#include "hem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hem/rng.hpp"
#include "hem/tanh_sinh.hpp"

namespace hem {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RealArgs {
    double a, b, c;
};

RealArgs require_real(const SelbergArgs& args, const char* who) {
    if (args.a.imag() != 0.0 || args.b.imag() != 0.0 || args.c.imag() != 0.0)
        throw QuadDomainError(std::string(who) +
                              ": quadrature handles real parameters only");
    return {args.a.real(), args.b.real(), args.c.real()};
}

void require_subcritical(const Params& p, const char* who) {
    p.validate();
    if (p.gamma * p.gamma >= 2.0)
        throw QuadDomainError(
            std::string(who) +
            ": |w1-w2|^{-gamma^2} is not locally integrable in 2-D unless "
            "gamma^2 < 2");
}

double alpha21(const Params& p) { return -p.gamma / 2.0; }

} // namespace

QuadResult quad_selberg22(const SelbergArgs& args, double tol) {
    const RealArgs r = require_real(args, "quad_selberg22");
    if (!s22_convergent(args))
        throw QuadDomainError(
            "quad_selberg22: parameters outside the convergence region of "
            "the defining integral (use the closed form, which continues)");
    const double a = r.a, b = r.b, c = r.c;

    // Split at t1 = t2 (factor 2 by symmetry) and rescale t1 = v*x, t2 = v.
    // The diagonal factor becomes (v(1-x))^{2c} and the joint origin
    // singularity collects into v^{2a+2c-1}; all four singular directions
    // are now endpoints of tanh-sinh rules.
    QuadResult out;
    out.method = "tanh-sinh";
    const double inner_tol = std::max(tol * 0.02, 1e-13);
    long long evals = 0;
    TanhSinhResult outer = tanh_sinh(
        [&](double x, double omx) {
            TanhSinhResult inner = tanh_sinh(
                [&](double v, double omv) {
                    // 1 - v*x = (1-v) + v*(1-x), exact near the (1,1) corner
                    const double one_minus_vx = omv + v * omx;
                    return std::pow(v, 2.0 * (a + c) - 1.0) *
                           std::pow(one_minus_vx, b - 1.0) *
                           std::pow(omv, b - 1.0);
                },
                inner_tol);
            evals += inner.evaluations;
            return std::pow(x, a - 1.0) * std::pow(omx, 2.0 * c) * inner.value;
        },
        tol * 0.2);
    out.value = 2.0 * outer.value;
    out.evaluations = evals;
    out.error_estimate =
        2.0 * outer.error_estimate + 4.0 * inner_tol * std::abs(out.value);
    return out;
}

QuadResult quad_selberg21(const SelbergArgs& args, double tol) {
    const RealArgs r = require_real(args, "quad_selberg21");
    if (!s21_convergent(args))
        throw QuadDomainError(
            "quad_selberg21: parameters outside the convergence region of "
            "the defining integral (use the closed form, which continues)");
    const double a = r.a, b = r.b, c = r.c;

    // Defining domain is t1 in (0,1), t2 in (1,inf). The reciprocal
    // substitution t2 = 1/u maps to the unit square:
    //   int_0^1 int_0^1 t^{a-1} (1-t)^{b-1} u^{-(a+b+2c)} (1-u)^{b-1}
    //                   (1 - t u)^{2c} dt du.
    QuadResult out;
    out.method = "tanh-sinh";
    const double inner_tol = std::max(tol * 0.02, 1e-13);
    long long evals = 0;
    TanhSinhResult outer = tanh_sinh(
        [&](double u, double omu) {
            TanhSinhResult inner = tanh_sinh(
                [&](double t, double omt) {
                    const double one_minus_tu = omu + u * omt;
                    return std::pow(t, a - 1.0) * std::pow(omt, b - 1.0) *
                           std::pow(one_minus_tu, 2.0 * c);
                },
                inner_tol);
            evals += inner.evaluations;
            return std::pow(u, -(a + b + 2.0 * c)) * std::pow(omu, b - 1.0) *
                   inner.value;
        },
        tol * 0.2);
    out.value = outer.value;
    out.evaluations = evals;
    out.error_estimate =
        outer.error_estimate + 4.0 * inner_tol * std::abs(out.value);
    return out;
}

QuadResult quad_J1(double alpha, const Params& p, double tol, J1Method method,
                   double outer_radius) {
    require_subcritical(p, "quad_J1");
    const double g = p.gamma;
    const double a21 = alpha21(p);
    if (!(alpha < a21))
        throw QuadDomainError(
            "quad_J1: absolutely convergent only for alpha < alpha_{2,1}");
    if (!(outer_radius > 0.0) || outer_radius > 1.0)
        throw QuadDomainError("quad_J1: outer_radius must be in (0, 1]");

    // Rotation invariance: the integrand depends on (r1, r2, D = theta2 -
    // theta1) only, and is even in D, so the angular average is
    //   Astar(u) = 2 * int_0^pi ((1-u)^2 + 4 u sin^2(D/2))^{-g^2/2} dD
    // at radius ratio u. The kernel is written in that shifted form
    // because near (u, D) = (1, 0) the naive 1 - 2u cos D + u^2 loses all
    // significant digits.
    const double kexp = -g * g / 2.0; // exponent on the SQUARED distance
    long long evals = 0;
    const double inner_tol = std::max(tol * 0.01, 1e-13);
    auto astar = [&](double u, double omu) {
        TanhSinhResult ang = tanh_sinh(
            [&](double x, double) {
                const double s = std::sin(0.5 * kPi * x);
                const double ksq = omu * omu + 4.0 * u * s * s;
                return std::pow(ksq, kexp);
            },
            inner_tol);
        evals += ang.evaluations;
        return 2.0 * kPi * ang.value;
    };

    QuadResult out;
    out.method = "tanh-sinh";
    if (method == J1Method::scaled) {
        // Joint homogeneity: with r1 = u*r2 the overall radial scale
        // integrates exactly to R^{2g(a21-alpha)} / (2g(a21-alpha)); the
        // pole at alpha_{2,1} lives entirely in this analytic factor, so
        // the numerical part stays uniformly accurate near the pole.
        TanhSinhResult shape = tanh_sinh(
            [&](double u, double omu) {
                return std::pow(u, -g * alpha - 1.0) * astar(u, omu);
            },
            tol * 0.2);
        const double pole_factor =
            std::pow(outer_radius, 2.0 * g * (a21 - alpha)) /
            (2.0 * g * (a21 - alpha));
        // J1 = 2pi (common rotation) * 2 (r1 < r2 split) * pole_factor *
        //      int_0^1 u^{-g*alpha-1} Astar(u) du.
        out.value = 4.0 * kPi * pole_factor * shape.value;
        out.error_estimate = 4.0 * kPi * pole_factor *
                                 (shape.error_estimate +
                                  4.0 * inner_tol * std::abs(shape.value));
        out.evaluations = evals;
        return out;
    }

    // direct3d: the outer radius r2 is integrated numerically as well,
    // cross-checking the analytic radial factor above. Same folded angular
    // rule; mid variable is r1 = r2 * x as an affine map of (0, r2).
    TanhSinhResult outer = tanh_sinh(
        [&](double r2s, double) {
            const double r2 = outer_radius * r2s;
            TanhSinhResult mid = tanh_sinh(
                [&](double x, double omx) {
                    const double r1 = r2 * x;
                    TanhSinhResult ang = tanh_sinh(
                        [&](double y, double) {
                            const double s = std::sin(0.5 * kPi * y);
                            const double d = r2 * omx; // r2 - r1, exact form
                            const double ksq = d * d + 4.0 * r1 * r2 * s * s;
                            return std::pow(ksq, kexp);
                        },
                        inner_tol);
                    evals += ang.evaluations;
                    return std::pow(r1, -g * alpha - 1.0) * kPi * ang.value;
                },
                std::max(tol * 0.05, 1e-12));
            evals += 1;
            return std::pow(r2, -g * alpha - 1.0) * r2 * mid.value;
        },
        tol * 0.2);
    // Factors: 2 pi (common rotation) * 2 (fold D to (0,pi)) * 2 (r1 < r2
    // duplication) * outer_radius (affine r2 map). The angular map's own
    // pi is already multiplied inside the mid integrand.
    out.value = 8.0 * kPi * outer_radius * outer.value;
    out.error_estimate =
        8.0 * kPi * outer_radius *
        (outer.error_estimate + 0.05 * tol * std::abs(outer.value));
    out.evaluations = evals;
    out.method = "adaptive";
    return out;
}

QuadResult mc_J1(double alpha, const Params& p, long long samples,
                 std::uint64_t seed) {
    require_subcritical(p, "mc_J1");
    const double g = p.gamma;
    if (!(alpha < alpha21(p)))
        throw QuadDomainError("mc_J1: requires alpha < alpha_{2,1}");

    // Uniform proposal on D^2 via rejection from the square; J1 = pi^2 *
    // E[r1^{-g a - 2} r2^{-g a - 2} |w1 - w2|^{-g^2}]. The diagonal factor
    // has a (log-)divergent second moment for gamma^2 >= 1, so the standard
    // error comes from 256 batch means rather than the raw sample variance.
    const double ex = 0.5 * (-g * alpha - 2.0); // exponent on squared radius
    const double dex = -0.5 * g * g;            // exponent on squared distance
    const std::uint64_t n = static_cast<std::uint64_t>(samples);
    const std::size_t nbatch = 256;
    std::vector<double> batch_mean(nbatch, 0.0);
    parallel_ranges(
        n, nbatch,
        [&](std::uint64_t first, std::uint64_t last, std::size_t slot) {
            CounterRng rng(seed, slot);
            double acc = 0.0;
            for (std::uint64_t i = first; i < last; ++i) {
                double x1, y1, x2, y2, r1sq, r2sq;
                do {
                    x1 = 2.0 * rng.next_uniform() - 1.0;
                    y1 = 2.0 * rng.next_uniform() - 1.0;
                    r1sq = x1 * x1 + y1 * y1;
                } while (r1sq > 1.0);
                do {
                    x2 = 2.0 * rng.next_uniform() - 1.0;
                    y2 = 2.0 * rng.next_uniform() - 1.0;
                    r2sq = x2 * x2 + y2 * y2;
                } while (r2sq > 1.0);
                const double dx = x1 - x2, dy = y1 - y2;
                const double dsq = dx * dx + dy * dy;
                acc += std::pow(r1sq, ex) * std::pow(r2sq, ex) *
                       std::pow(dsq, dex);
            }
            batch_mean[slot] = acc / static_cast<double>(last - first);
        });
    double mean = 0.0;
    for (double m : batch_mean) mean += m;
    mean /= static_cast<double>(nbatch);
    double var = 0.0;
    for (double m : batch_mean) var += (m - mean) * (m - mean);
    var /= static_cast<double>(nbatch - 1);
    QuadResult out;
    out.value = kPi * kPi * mean;
    out.error_estimate =
        kPi * kPi * std::sqrt(var / static_cast<double>(nbatch));
    out.evaluations = samples;
    out.method = "monte-carlo";
    out.seed = seed;
    return out;
}

BoundaryIntegral boundary_integral_from_string(const std::string& s) {
    if (s == "I11-same" || s == "I11_same_side" || s == "same-side")
        return BoundaryIntegral::I11_same_side;
    if (s == "I11-op" || s == "I11_opposite" || s == "opposite")
        return BoundaryIntegral::I11_opposite;
    if (s == "I2" || s == "half_disc_Re_w2" || s == "half-disc")
        return BoundaryIntegral::half_disc_Re_w2;
    throw ConfigError("unknown boundary integral id: " + s);
}

std::string boundary_integral_name(BoundaryIntegral id) {
    switch (id) {
        case BoundaryIntegral::I11_same_side: return "I11_same_side";
        case BoundaryIntegral::I11_opposite: return "I11_opposite";
        case BoundaryIntegral::half_disc_Re_w2: return "half_disc_Re_w2";
    }
    return "?";
}

QuadResult quad_boundary(BoundaryIntegral id, double alpha, const Params& p,
                         double tol) {
    require_subcritical(p, "quad_boundary");
    const double g = p.gamma;
    if (!(alpha < alpha21(p)))
        throw QuadDomainError(
            "quad_boundary: requires alpha < alpha_{2,1} (the defining "
            "integrals diverge at and beyond the pole)");
    const double a = -g * alpha / 2.0;   // boundary insertion exponent
    const double c = -g * g / 4.0;       // half the pair exponent
    QuadResult out;
    out.method = "tanh-sinh";

    switch (id) {
        case BoundaryIntegral::I11_same_side: {
            // int_0^1 int_0^1 u^{a-1} v^{a-1} |u-v|^{2c} du dv. With the
            // diagonal split u = v*x the v-integral is exactly
            // 1/(2(a+c)), because the same-side integrand has no (1-u)
            // factors; only the x-integral needs quadrature.
            TanhSinhResult ts = tanh_sinh(
                [&](double x, double omx) {
                    return std::pow(x, a - 1.0) * std::pow(omx, 2.0 * c);
                },
                tol * 0.5);
            out.value = ts.value / (a + c);
            out.error_estimate = ts.error_estimate / (a + c);
            out.evaluations = ts.evaluations;
            return out;
        }
        case BoundaryIntegral::I11_opposite: {
            // int_0^1 int_0^1 u^{a-1} v^{a-1} (u+v)^{2c} du dv. The split
            // u = x*v (doubled by symmetry) factors the scale exactly:
            // value = [1/(a+c)] * int_0^1 x^{a-1} (1+x)^{2c} dx.
            TanhSinhResult ts = tanh_sinh(
                [&](double x, double) {
                    return std::pow(x, a - 1.0) * std::pow(1.0 + x, 2.0 * c);
                },
                tol * 0.5);
            out.value = ts.value / (a + c);
            out.error_estimate = ts.error_estimate / (a + c);
            out.evaluations = ts.evaluations;
            return out;
        }
        case BoundaryIntegral::half_disc_Re_w2: {
            // Polar factorization: radial power integrates to
            // 1/(-g*alpha - g^2/2) = 1/(g*(a21 - alpha)); the angular
            // factor (2 sin t)^{-g^2/2} cos(2t) over (0, pi) folds onto
            // (0, pi/2) since both factors are symmetric about pi/2.
            const double kexp = -g * g / 2.0;
            TanhSinhResult ts = tanh_sinh(
                [&](double x, double) {
                    const double t = 0.5 * kPi * x;
                    return std::pow(2.0 * std::sin(t), kexp) *
                           std::cos(2.0 * t);
                },
                tol * 0.5, 1e-14);
            const double angular = 2.0 * (0.5 * kPi) * ts.value;
            const double radial = 1.0 / (g * (alpha21(p) - alpha));
            out.value = radial * angular;
            out.error_estimate = radial * kPi * ts.error_estimate;
            out.evaluations = ts.evaluations;
            return out;
        }
    }
    throw QuadDomainError("quad_boundary: unreachable id");
}

QuadResult quad_boundary_direct2d(BoundaryIntegral id, double alpha,
                                  const Params& p, double tol) {
    require_subcritical(p, "quad_boundary_direct2d");
    const double g = p.gamma;
    if (!(alpha < alpha21(p)))
        throw QuadDomainError("quad_boundary_direct2d: requires alpha < alpha_{2,1}");
    const double a = -g * alpha / 2.0;
    const double c = -g * g / 4.0;
    // Direct forms are only accurate with the joint-origin exponent
    // 2(a+c)-1 comfortably above -1; refuse close approaches to the pole
    // where the factorized quad_boundary must be used instead.
    if (a + c < 0.05)
        throw QuadDomainError(
            "quad_boundary_direct2d: too close to the pole; use "
            "quad_boundary (exact scale factorization)");
    QuadResult out;
    out.method = "tanh-sinh";
    const double inner_tol = std::max(tol * 0.02, 1e-13);
    long long evals = 0;
    switch (id) {
        case BoundaryIntegral::I11_same_side: {
            // Outer u, inner v with an interior singularity at v = u:
            // split into (0,u) and (u,1) with endpoint-accurate maps.
            TanhSinhResult outer = tanh_sinh(
                [&](double u, double omu) {
                    TanhSinhResult lo = tanh_sinh(
                        [&](double s, double oms) {
                            const double v = u * s;
                            return u * std::pow(v, a - 1.0) *
                                   std::pow(u * oms, 2.0 * c);
                        },
                        inner_tol);
                    TanhSinhResult hi = tanh_sinh(
                        [&](double s, double) {
                            const double v = u + omu * s;
                            return omu * std::pow(v, a - 1.0) *
                                   std::pow(omu * s, 2.0 * c);
                        },
                        inner_tol);
                    evals += lo.evaluations + hi.evaluations;
                    return std::pow(u, a - 1.0) * (lo.value + hi.value);
                },
                tol * 0.2);
            evals += 0;
            out.value = outer.value;
            out.error_estimate =
                outer.error_estimate + 4.0 * inner_tol * std::abs(out.value);
            out.evaluations = evals;
            return out;
        }
        case BoundaryIntegral::I11_opposite: {
            TanhSinhResult outer = tanh_sinh(
                [&](double u, double) {
                    TanhSinhResult inner = tanh_sinh(
                        [&](double v, double) {
                            return std::pow(v, a - 1.0) *
                                   std::pow(u + v, 2.0 * c);
                        },
                        inner_tol);
                    evals += inner.evaluations;
                    return std::pow(u, a - 1.0) * inner.value;
                },
                tol * 0.2);
            out.value = outer.value;
            out.error_estimate =
                outer.error_estimate + 4.0 * inner_tol * std::abs(out.value);
            out.evaluations = evals;
            return out;
        }
        case BoundaryIntegral::half_disc_Re_w2:
            throw QuadDomainError(
                "quad_boundary_direct2d: half_disc_Re_w2 reduces exactly to "
                "1-D; there is no distinct direct form");
    }
    throw QuadDomainError("quad_boundary_direct2d: unreachable id");
}

} // namespace hem
