#include "hem/probe.hpp"

#include <cmath>
#include <stdexcept>

#include "hem/constants.hpp"
#include "hem/tanh_sinh.hpp"

namespace hem {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

double alpha21(const Params& p) { return -0.5 * p.gamma; }

// Shared kernel pieces at a point (x, Delta) of the reduced square.
//   K    = (1 - 2 x cos D + x^2)^{-gamma^2/2}   (distance kernel)
//   phi  = arg(1 - x e^{-iD})
// Km1 = K - 1 is computed via expm1/log1p so the bracketed integrands stay
// fully accurate as x -> 0, where K -> 1 and the phase factors approach
// pure cosines whose Delta-integral cancels to O(x).
struct KernelPoint {
    double K, Km1, phi;
};

KernelPoint kernel_at(double x, double delta, double kexp) {
    KernelPoint k;
    const double c = std::cos(delta);
    const double tm1 = x * (x - 2.0 * c);  // ksq - 1, exact at small x
    k.Km1 = std::expm1(kexp * std::log1p(tm1));
    k.K = 1.0 + k.Km1;
    k.phi = std::atan2(x * std::sin(delta), 1.0 - x * c);
    return k;
}

// Inner Delta-integrals of the bracketed shape integrands. The subtraction
// of cos(Delta) (resp. cos(2 Delta)), whose integral over (0, pi) is zero,
// removes the small-x catastrophic cancellation without changing the value.
// Inner integrals oscillate around zero, so convergence is judged against
// an O(1) absolute scale (the integrands are O(1) pointwise away from the
// x -> 1 edge); a purely relative criterion would chase cancellation noise.
constexpr double kInnerFloor = 1.0;
constexpr int kInnerMaxLevel = 11;

double inner_J2(double x, double kexp, double tol, long long& evals) {
    TanhSinhResult r = tanh_sinh(
        [&](double t, double) {
            const double d = kPi * t;
            const KernelPoint k = kernel_at(x, d, kexp);
            return k.Km1 * std::cos(d + 2.0 * k.phi) -
                   2.0 * std::sin(d + k.phi) * std::sin(k.phi);
        },
        tol, kInnerFloor, kInnerMaxLevel);
    evals += r.evaluations;
    return kPi * r.value;
}

double inner_J3(double x, double kexp, double tol, long long& evals) {
    TanhSinhResult r = tanh_sinh(
        [&](double t, double) {
            const double d = kPi * t;
            const KernelPoint k = kernel_at(x, d, kexp);
            return k.K * std::cos(2.0 * k.phi) +
                   k.Km1 * std::cos(2.0 * d + 2.0 * k.phi) -
                   2.0 * std::sin(2.0 * d + k.phi) * std::sin(k.phi);
        },
        tol, kInnerFloor, kInnerMaxLevel);
    evals += r.evaluations;
    return kPi * r.value;
}

// Radially scaled J1 kernel integral (same object quad_J1 uses internally);
// value at alpha21 is -(gamma/(2 pi)) times the J1 residue.
double inner_J1(double x, double kexp, double tol, long long& evals) {
    TanhSinhResult r = tanh_sinh(
        [&](double t, double) {
            const double d = kPi * t;
            const KernelPoint k = kernel_at(x, d, kexp);
            return k.K;
        },
        tol, kInnerFloor, kInnerMaxLevel);
    evals += r.evaluations;
    return 2.0 * kPi * r.value;
}

}  // namespace

ProbeIntegral probe_integral_from_string(const std::string& s) {
    if (s == "J1" || s == "j1") return ProbeIntegral::J1_control;
    if (s == "J2" || s == "j2") return ProbeIntegral::J2;
    if (s == "J3" || s == "j3") return ProbeIntegral::J3;
    if (s == "I2_10_21-analog" || s == "I2-analog" || s == "analog")
        return ProbeIntegral::I2_10_21_analog;
    throw std::invalid_argument("unknown probe integral id: " + s);
}

const char* probe_integral_name(ProbeIntegral id) {
    switch (id) {
        case ProbeIntegral::J1_control: return "J1";
        case ProbeIntegral::J2: return "J2";
        case ProbeIntegral::J3: return "J3";
        case ProbeIntegral::I2_10_21_analog: return "I2_10_21-analog";
    }
    return "?";
}

QuadResult probe_shape(ProbeIntegral id, double alpha, const Params& p,
                       double tol) {
    if (classify_phase(p.gamma) != Phase::subcritical)
        throw PhaseError("probe_shape: requires the subcritical phase");
    if (!(alpha < 0.0))
        throw QuadDomainError("probe_shape: requires alpha < 0");
    const double g = p.gamma;
    const double kexp = -0.5 * g * g;  // exponent on the squared distance
    const double inner_tol = std::max(tol * 0.1, 1e-10);
    long long evals = 0;

    // Outer convergence also gets an absolute floor: near alpha21 the shape
    // value crosses zero, and chasing relative digits of a ~1e-3 result
    // costs exponentially more inner refinement than the probe needs.
    auto outer = [&](auto&& xfactor, auto&& inner) {
        return tanh_sinh(
            [&](double x, double) {
                return xfactor(x) * inner(x, kexp, inner_tol, evals);
            },
            tol, 1e-4);
    };

    TanhSinhResult r;
    switch (id) {
        case ProbeIntegral::J2:
            r = outer(
                [&](double x) {
                    return std::pow(x, -g * alpha - 2.0) +
                           std::pow(x, -g * alpha);
                },
                inner_J2);
            break;
        case ProbeIntegral::J3:
            r = outer(
                [&](double x) { return std::pow(x, -g * alpha - 1.0); },
                inner_J3);
            break;
        case ProbeIntegral::I2_10_21_analog: {
            QuadResult a = probe_shape(ProbeIntegral::J2, alpha, p, tol);
            QuadResult b = probe_shape(ProbeIntegral::J3, alpha, p, tol);
            QuadResult out;
            out.value = a.value + b.value;
            out.error_estimate = a.error_estimate + b.error_estimate;
            out.evaluations = a.evaluations + b.evaluations;
            out.method = "tanh-sinh";
            return out;
        }
        case ProbeIntegral::J1_control:
            r = outer(
                [&](double x) { return std::pow(x, -g * alpha - 1.0); },
                inner_J1);
            break;
    }
    QuadResult out;
    out.value = r.value;
    out.error_estimate = r.error_estimate;
    out.evaluations = evals;
    out.method = "tanh-sinh";
    return out;
}

ProbeReport regularity_probe(ProbeIntegral id, const Params& p, double window,
                             double tol) {
    if (classify_phase(p.gamma) != Phase::subcritical)
        throw PhaseError("regularity_probe: requires the subcritical phase");
    if (!(window > 0.0 && window <= 1.0))
        throw std::invalid_argument(
            "regularity_probe: window must lie in (0, 1]");

    const double g = p.gamma;
    const double a21 = alpha21(p);
    ProbeReport rep;
    rep.integral_id = probe_integral_name(id);
    rep.window = window;
    rep.pole_location = a21;

    for (int k = 0; k <= 6; ++k) {
        const double delta = window * std::pow(2.0, -k);
        const double alpha = a21 - delta;
        // (alpha - alpha21) * J(alpha) = -(2 pi / gamma) * shape(alpha):
        // the radial pole factor 1/(2 gamma (alpha21 - alpha)) times the
        // offset -(delta) cancels exactly, so the product is evaluated
        // without ever forming the near-singular J itself.
        QuadResult s = probe_shape(id, alpha, p, tol);
        rep.offsets.push_back(delta);
        rep.products.push_back(-(2.0 * kPi / g) * s.value);
        rep.evaluations += s.evaluations;
    }

    // Least-squares slope of log|product| against log offset.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    double scale = 0.0;
    for (double v : rep.products) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < rep.offsets.size(); ++i) {
        const double av = std::abs(rep.products[i]);
        if (av < 1e-14 * scale || av == 0.0)
            continue;  // below noise floor; treat as vanished
        const double lx = std::log(rep.offsets[i]);
        const double ly = std::log(av);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n >= 2) {
        rep.slope = (static_cast<double>(n) * sxy - sx * sy) /
                    (static_cast<double>(n) * sxx - sx * sx);
    } else {
        // Everything vanished to the floor: maximally regular.
        rep.slope = 10.0;
    }
    // Linear-in-offset extrapolation of the product to offset 0 using the
    // two smallest offsets (offset halves each step: P0 ~ 2 P6 - P5).
    const std::size_t m = rep.products.size();
    rep.limit_estimate =
        2.0 * rep.products[m - 1] - rep.products[m - 2];
    rep.passes = rep.slope >= 0.9;
    return rep;
}

double probe_limit_reference(ProbeIntegral id, const Params& p) {
    if (classify_phase(p.gamma) != Phase::subcritical) {
        throw PhaseError("probe_limit_reference: requires the subcritical phase");
    }
    const double r1 = residue_J1(p).integral_normalized;
    const double g2 = p.gamma * p.gamma;
    const double pair_fraction = (2.0 - g2) / (4.0 - g2);
    switch (id) {
        case ProbeIntegral::J1_control:
            return r1;
        case ProbeIntegral::J2:
            return -pair_fraction * r1;
        case ProbeIntegral::J3:
            return pair_fraction * r1;
        case ProbeIntegral::I2_10_21_analog:
        default:
            return 0.0;
    }
}

}  // namespace hem
