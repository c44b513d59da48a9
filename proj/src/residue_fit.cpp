#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "hem/quadrature.hpp"

namespace hem {

std::vector<double> default_offsets(double window) {
    if (!(window > 0.0))
        throw std::invalid_argument("default_offsets: window must be > 0");
    std::vector<double> out;
    out.reserve(7);
    for (int k = 0; k <= 6; ++k) out.push_back(window * std::pow(2.0, -k));
    return out;
}

ResidueFit residue_extrapolate(const std::function<double(double)>& f,
                               double pole, std::vector<double> offsets) {
    if (offsets.empty()) offsets = default_offsets();
    if (offsets.size() < 3)
        throw std::invalid_argument(
            "residue_extrapolate: need at least 3 offsets for the "
            "3-parameter model");
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        if (!(offsets[i] > 0.0))
            throw std::invalid_argument(
                "residue_extrapolate: offsets must be positive");
        if (i > 0 && !(offsets[i] < offsets[i - 1]))
            throw std::invalid_argument(
                "residue_extrapolate: offsets must decrease strictly toward "
                "the pole");
    }

    // Model: f(pole - d) ~ -R/d + C + D*d, so that f(x) ~ R/(x - pole).
    // Solved by 3x3 normal equations in long double; the basis spans two
    // decades of d, which is mild enough that no orthogonalization is
    // needed at this precision.
    const std::size_t n = offsets.size();
    long double ata[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    long double aty[3] = {0, 0, 0};
    std::vector<long double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = offsets[i];
        const long double y = f(pole - d);
        ys[i] = y;
        const long double phi[3] = {-1.0L / d, 1.0L, d};
        for (int r = 0; r < 3; ++r) {
            aty[r] += phi[r] * y;
            for (int c = 0; c < 3; ++c) ata[r][c] += phi[r] * phi[c];
        }
    }

    // Gaussian elimination with partial pivoting on the 3x3 system.
    long double m[3][4];
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) m[r][c] = ata[r][c];
        m[r][3] = aty[r];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0L)
            throw std::runtime_error(
                "residue_extrapolate: singular normal equations");
        if (piv != col)
            for (int c = col; c < 4; ++c) std::swap(m[piv][c], m[col][c]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const long double fac = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= fac * m[col][c];
        }
    }
    const long double R = m[0][3] / m[0][0];
    const long double C = m[1][3] / m[1][1];
    const long double D = m[2][3] / m[2][2];

    ResidueFit fit;
    fit.pole_location = pole;
    fit.residue = static_cast<double>(R);
    fit.finite_part = static_cast<double>(C);
    fit.sample_offsets = offsets;

    long double ss = 0.0L;
    long double scale = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const long double d = offsets[i];
        const long double model = -R / d + C + D * d;
        const long double r = ys[i] - model;
        ss += r * r;
        scale = std::max(scale, std::abs(ys[i]));
    }
    fit.fit_residual = static_cast<double>(
        std::sqrt(ss / static_cast<long double>(n)) /
        std::max(scale, 1.0L));
    // A clean simple pole fits to ~ the accuracy of the samples; a relative
    // residual this large means the data does not look like -R/d + C + D*d
    // (higher-order pole, nonanalytic remainder, or noisy samples).
    fit.ill_conditioned = !(fit.fit_residual <= 1e-3);
    return fit;
}

} // namespace hem
