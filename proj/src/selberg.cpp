#include "hem/selberg.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace hem {

namespace {

// Tolerance for deciding that a factor argument sits exactly at an integer
// (or half-integer) singular point. Residue-fit offsets go down to ~3e-3,
// so anything within 1e-9 of the lattice is treated as on it.
constexpr double kSnapTol = 1e-9;
// Step used for the numerical finite part at a tagged simple pole.
constexpr double kFinitePartStep = 1e-4;

enum class Kind { Gamma, SinPi, CosPi };

// One factor of the product: kind(u0 + du * t) ^ expnt, expnt in {-1,+1}.
struct Factor {
    Kind kind;
    double u0, du;
    int expnt;
};

struct Accum {
    int order = 0;
    LogSigned lead = LogSigned::one();
};

// Multiply `acc` by factor evaluated at parameter t, collecting order and
// leading coefficient when the argument sits on the singular lattice.
void apply(Accum& acc, const Factor& f, double t) {
    const double u = f.u0 + f.du * t;
    switch (f.kind) {
    case Kind::Gamma: {
        if (u <= 0.5 && near_integer(u, kSnapTol)) {
            long long m = -nearest_integer(u); // u = -m, m >= 0
            if (f.du == 0.0) {
                throw UnsupportedPoleOrder(
                    "gamma factor identically at a pole along the line");
            }
            // Gamma(u) ~ ((-1)^m / m!) / (du * (t - t*))
            LogSigned c{-std::lgamma(static_cast<double>(m) + 1.0),
                        (m % 2 == 0) ? 1 : -1};
            LogSigned slope = LogSigned::of(f.du);
            if (f.expnt > 0) {
                acc.order -= 1;
                acc.lead = acc.lead * (c / slope);
            } else {
                acc.order += 1;
                acc.lead = acc.lead / (c / slope);
            }
        } else {
            LogSigned v = log_gamma_signed(u);
            acc.lead = (f.expnt > 0) ? acc.lead * v : acc.lead / v;
        }
        break;
    }
    case Kind::SinPi: {
        if (near_integer(u, kSnapTol)) {
            long long m = nearest_integer(u);
            if (f.du == 0.0) {
                if (f.expnt > 0) { // identically zero factor
                    acc.lead = LogSigned::zero();
                    return;
                }
                throw UnsupportedPoleOrder(
                    "sine denominator identically zero along the line");
            }
            // sin(pi u) ~ (-1)^m pi du (t - t*)
            LogSigned c = LogSigned::of(((m % 2 == 0) ? 1.0 : -1.0) * M_PI * f.du);
            if (f.expnt > 0) {
                acc.order += 1;
                acc.lead = acc.lead * c;
            } else {
                acc.order -= 1;
                acc.lead = acc.lead / c;
            }
        } else {
            LogSigned v = log_sin_pi_signed(u);
            acc.lead = (f.expnt > 0) ? acc.lead * v : acc.lead / v;
        }
        break;
    }
    case Kind::CosPi: {
        if (near_integer(u - 0.5, kSnapTol)) {
            long long m = nearest_integer(u - 0.5); // u = m + 1/2
            if (f.du == 0.0) {
                if (f.expnt > 0) {
                    acc.lead = LogSigned::zero();
                    return;
                }
                throw UnsupportedPoleOrder(
                    "cosine denominator identically zero along the line");
            }
            // cos(pi u) ~ -(-1)^m pi du (t - t*)
            LogSigned c =
                LogSigned::of(((m % 2 == 0) ? -1.0 : 1.0) * M_PI * f.du);
            if (f.expnt > 0) {
                acc.order += 1;
                acc.lead = acc.lead * c;
            } else {
                acc.order -= 1;
                acc.lead = acc.lead / c;
            }
        } else {
            LogSigned v = log_cos_pi_signed(u);
            acc.lead = (f.expnt > 0) ? acc.lead * v : acc.lead / v;
        }
        break;
    }
    }
}

// Plain product value at t assuming no factor is on the singular lattice
// (used for the numerical finite part slightly off a tagged pole).
double value_off_lattice(const std::vector<Factor>& fs, double t) {
    Accum acc;
    for (const auto& f : fs) apply(acc, f, t);
    if (acc.order != 0) {
        // a *different* factor hit the lattice at the shifted point; treat
        // as zero/inf accordingly (order > 0 -> 0), callers only need this
        // for generic small shifts where it cannot happen
        return acc.order > 0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return acc.lead.value();
}

MeroSample evaluate_line(const std::vector<Factor>& fs, double t,
                         int sign_prefactor) {
    Accum acc;
    bool zero_factor = false;
    for (const auto& f : fs) {
        apply(acc, f, t);
        if (acc.lead.sign == 0) { zero_factor = true; break; }
    }
    MeroSample out;
    out.point = t;
    if (zero_factor || acc.order > 0) {
        out.value = 0.0;
        return out;
    }
    if (acc.order == 0) {
        out.value = sign_prefactor * acc.lead.value();
        return out;
    }
    if (acc.order == -1) {
        out.pole_flag = true;
        out.residue = sign_prefactor * acc.lead.value();
        // finite part: (f(t+h) + f(t-h))/2 = c0 + O(h^2); the pole terms
        // cancel exactly in the symmetric average
        const double h = kFinitePartStep;
        double fp = 0.5 * (value_off_lattice(fs, t + h) +
                           value_off_lattice(fs, t - h));
        out.value = sign_prefactor * fp;
        return out;
    }
    throw UnsupportedPoleOrder(
        "pole of order >= 2 (only simple poles are supported)");
}

void push_s22_factors(std::vector<Factor>& fs, const SelbergLine& l) {
    auto A = [&](cplx base, cplx dir) {
        if (base.imag() != 0.0 || dir.imag() != 0.0) {
            throw std::invalid_argument(
                "line evaluation requires real base and direction");
        }
        return std::pair<double, double>{base.real(), dir.real()};
    };
    const auto [a0, da] = A(l.base.a, l.dir.a);
    const auto [b0, db] = A(l.base.b, l.dir.b);
    const auto [c0, dc] = A(l.base.c, l.dir.c);
    // Gamma(a) Gamma(b) Gamma(a+c) Gamma(b+c) Gamma(1+2c)
    // / (Gamma(a+b+c) Gamma(a+b+2c) Gamma(1+c))
    fs.push_back({Kind::Gamma, a0, da, +1});
    fs.push_back({Kind::Gamma, b0, db, +1});
    fs.push_back({Kind::Gamma, a0 + c0, da + dc, +1});
    fs.push_back({Kind::Gamma, b0 + c0, db + dc, +1});
    fs.push_back({Kind::Gamma, 1 + 2 * c0, 2 * dc, +1});
    fs.push_back({Kind::Gamma, a0 + b0 + c0, da + db + dc, -1});
    fs.push_back({Kind::Gamma, a0 + b0 + 2 * c0, da + db + 2 * dc, -1});
    fs.push_back({Kind::Gamma, 1 + c0, dc, -1});
}

void push_s21_factors(std::vector<Factor>& fs, const SelbergLine& l) {
    push_s22_factors(fs, l);
    const double c0 = l.base.c.real(), dc = l.dir.c.real();
    const double a0 = l.base.a.real(), da = l.dir.a.real();
    const double b0 = l.base.b.real(), db = l.dir.b.real();
    // cos(pi c) sin(pi(a+c)) / sin(pi(a+b+2c))
    fs.push_back({Kind::CosPi, c0, dc, +1});
    fs.push_back({Kind::SinPi, a0 + c0, da + dc, +1});
    fs.push_back({Kind::SinPi, a0 + b0 + 2 * c0, da + db + 2 * dc, -1});
}

bool is_real(const SelbergArgs& a) {
    return a.a.imag() == 0.0 && a.b.imag() == 0.0 && a.c.imag() == 0.0;
}

SelbergLine plain_line(const SelbergArgs& args) {
    // Plain-args calls report residues along a displacement of `a`.
    return {args, {cplx(1.0), cplx(0.0), cplx(0.0)}};
}

// Straight complex evaluation off the singular set.
cplx s22_complex(const SelbergArgs& s) {
    cplx lg = log_gamma(s.a) + log_gamma(s.b) + log_gamma(s.a + s.c) +
              log_gamma(s.b + s.c) + log_gamma(1.0 + 2.0 * s.c) -
              log_gamma(s.a + s.b + s.c) - log_gamma(s.a + s.b + 2.0 * s.c) -
              log_gamma(1.0 + s.c);
    return std::exp(lg);
}

} // namespace

bool s22_convergent(const SelbergArgs& s) {
    double ra = s.a.real(), rb = s.b.real(), rc = s.c.real();
    return ra > 0 && rb > 0 && rc > -std::min({0.5, ra, rb});
}

bool s21_convergent(const SelbergArgs& s) {
    // Convergence of the (0,1)x(1,inf) integral: the origin-side endpoint
    // needs Re a > 0 and Re b > 0 (t2 -> 1), the joint corner t1,t2 -> 1
    // needs Re(b+c) > 0, infinity needs Re(a+b+2c) < 1, the diagonal
    // Re c > -1/2.
    double ra = s.a.real(), rb = s.b.real(), rc = s.c.real();
    return ra > 0 && rb > 0 && rb + rc > 0 && ra + rb + 2 * rc < 1 &&
           rc > -0.5;
}

MeroSample selberg22_line(const SelbergLine& line, double t) {
    std::vector<Factor> fs;
    push_s22_factors(fs, line);
    return evaluate_line(fs, t, +1);
}

MeroSample selberg22(const SelbergArgs& args) {
    if (is_real(args)) return selberg22_line(plain_line(args), 0.0);
    MeroSample out;
    out.point = 0.0;
    out.value = s22_complex(args);
    return out;
}

MeroSample selberg21_line(const SelbergLine& line, double t) {
    std::vector<Factor> fs;
    push_s21_factors(fs, line);
    return evaluate_line(fs, t, +1);
}

MeroSample selberg21(const SelbergArgs& args) {
    if (is_real(args)) return selberg21_line(plain_line(args), 0.0);
    MeroSample out;
    out.point = 0.0;
    cplx trig = std::cos(M_PI * args.c) * std::sin(M_PI * (args.a + args.c)) /
                std::sin(M_PI * (args.a + args.b + 2.0 * args.c));
    out.value = trig * s22_complex(args);
    return out;
}

namespace {

long long integer_difference(cplx x, cplx y, const char* what) {
    cplx d = x - y;
    if (std::abs(d.imag()) > kSnapTol || !near_integer(d.real(), kSnapTol)) {
        throw std::invalid_argument(
            std::string("neretin_df: difference of ") + what +
            " arguments must be an integer");
    }
    return nearest_integer(d.real());
}

} // namespace

MeroSample neretin_df_line(const SelbergLine& holo, const SelbergLine& anti,
                           double t) {
    // validate integerness at the evaluation point (differences are affine
    // in t; requiring them integer for all t means equal directions)
    SelbergArgs h{holo.base.a + t * holo.dir.a, holo.base.b + t * holo.dir.b,
                  holo.base.c + t * holo.dir.c};
    SelbergArgs g{anti.base.a + t * anti.dir.a, anti.base.b + t * anti.dir.b,
                  anti.base.c + t * anti.dir.c};
    integer_difference(h.a, g.a, "a");
    integer_difference(h.b, g.b, "b");
    long long dc = integer_difference(h.c, g.c, "c");

    std::vector<Factor> fs;
    push_s22_factors(fs, holo);
    push_s22_factors(fs, anti);
    const double a0 = holo.base.a.real(), da = holo.dir.a.real();
    const double b0 = holo.base.b.real(), db = holo.dir.b.real();
    const double c0 = holo.base.c.real(), dc2 = holo.dir.c.real();
    // sin(pi a) sin(pi b) sin(pi(a+c)) sin(pi(b+c)) sin(pi(1+2c))
    // / (sin(pi(a+b+c)) sin(pi(a+b+2c)) sin(pi(1+c)))
    fs.push_back({Kind::SinPi, a0, da, +1});
    fs.push_back({Kind::SinPi, b0, db, +1});
    fs.push_back({Kind::SinPi, a0 + c0, da + dc2, +1});
    fs.push_back({Kind::SinPi, b0 + c0, db + dc2, +1});
    fs.push_back({Kind::SinPi, 1 + 2 * c0, 2 * dc2, +1});
    fs.push_back({Kind::SinPi, a0 + b0 + c0, da + db + dc2, -1});
    fs.push_back({Kind::SinPi, a0 + b0 + 2 * c0, da + db + 2 * dc2, -1});
    fs.push_back({Kind::SinPi, 1 + c0, dc2, -1});

    int sign = (dc % 2 == 0) ? +1 : -1; // (-1)^{c - c~}
    return evaluate_line(fs, t, sign);
}

MeroSample neretin_df(const SelbergArgs& holo, const SelbergArgs& anti) {
    if (is_real(holo) && is_real(anti)) {
        SelbergLine lh = plain_line(holo);
        SelbergLine la = plain_line(anti); // same unit-a direction keeps
                                           // differences integer along t
        return neretin_df_line(lh, la, 0.0);
    }
    throw std::invalid_argument(
        "neretin_df: complex arguments are not needed by any verification "
        "flow and are not supported");
}

cplx neretin_plane_integral(const SelbergArgs& holo, const SelbergArgs& anti) {
    return kNeretinFormulaToIntegral * neretin_df(holo, anti).value;
}

SelbergLine def_R_line(const Params& p) {
    const double g = p.gamma;
    return {{cplx(1.0), cplx(0.0), cplx(-g * g / 4.0)},
            {cplx(0.0), cplx(-g / 2.0), cplx(0.0)}};
}

SelbergLine neretin_equal_args_line(const Params& p, double beta) {
    const double g = p.gamma;
    return {{cplx(0.0), cplx(1.0 - g * beta / 2.0), cplx(-g * g / 4.0)},
            {cplx(-g / 2.0), cplx(0.0), cplx(0.0)}};
}

} // namespace hem
