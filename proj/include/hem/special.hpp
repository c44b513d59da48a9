#pragma once

// Complex gamma / log-gamma and signed-log trigonometric helpers.
//
// Everything downstream (Selberg closed forms, residue chains) consumes
// gamma exclusively through log-space ratios, so the primitives here are
// log_gamma (branch-tracked Lanczos) and signed-log factors for the real
// axis. Target accuracy: >= 1e-13 relative for |z| <= 50 away from poles.

#include <complex>
#include <stdexcept>
#include <string>

namespace hem {

using cplx = std::complex<double>;

// Thrown when gamma (or a gamma-backed closed form) is evaluated exactly at
// a nonpositive integer. Carries the pole index n (argument == -n, n >= 0).
struct GammaPoleError : std::domain_error {
    long long index;
    explicit GammaPoleError(long long n)
        : std::domain_error("gamma pole at z = -" + std::to_string(n)),
          index(n) {}
};

// True if x is within tol of an integer; snaps classification, not values.
bool near_integer(double x, double tol = 1e-12);
long long nearest_integer(double x);

// Principal-branch log Gamma: continuous on the cut plane, exact real values
// on the positive axis. Throws GammaPoleError at nonpositive integers.
cplx log_gamma(cplx z);

// Gamma via exp(log_gamma). Throws GammaPoleError at nonpositive integers.
cplx gamma_fn(cplx z);

// A real number carried as sign * exp(log_abs); sign in {-1, 0, +1}.
// Used to multiply long products of gamma/sine factors on the real axis
// without overflow. sign == 0 means exact zero (log_abs = -inf by convention).
struct LogSigned {
    double log_abs = 0.0;
    int sign = 1;

    static LogSigned zero();
    static LogSigned one();
    static LogSigned of(double x);

    LogSigned operator*(const LogSigned& o) const;
    LogSigned operator/(const LogSigned& o) const;
    double value() const; // sign * exp(log_abs); 0 if sign == 0
};

// log|Gamma(x)| with sign of Gamma(x), real x not a nonpositive integer.
LogSigned log_gamma_signed(double x);
// log|sin(pi x)| with sign; exact zero at integer x.
LogSigned log_sin_pi_signed(double x);
// log|cos(pi x)| with sign; exact zero at half-integer x.
LogSigned log_cos_pi_signed(double x);

} // namespace hem
