#pragma once

// Tanh-sinh (double-exponential) quadrature on (0,1) for integrands with
// algebraic endpoint singularities. The integrand receives both the
// abscissa x and the distance to the right endpoint 1-x at full relative
// precision, so factors like x^{p} (1-x)^{q} can be evaluated without
// cancellation at nodes exponentially close to the endpoints.

#include <cmath>
#include <cstdint>
#include <functional>

namespace hem {

struct TanhSinhResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long long evaluations = 0;
    bool converged = false;
};

// f(x, 1-x) on (0,1). tol is a relative tolerance against the running
// value (with an absolute floor abs_floor for integrals legitimately near
// zero, e.g. oscillatory angular factors).
TanhSinhResult tanh_sinh(const std::function<double(double, double)>& f,
                         double tol, double abs_floor = 1e-300,
                         int max_level = 12);

// Convenience: integrate over (lo, hi) by affine change of variables.
TanhSinhResult tanh_sinh_ab(const std::function<double(double)>& f, double lo,
                            double hi, double tol, double abs_floor = 1e-300,
                            int max_level = 12);

} // namespace hem
