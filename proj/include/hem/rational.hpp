#pragma once
// Exact Gaussian-rational scalars: (p + q*i)/r with 64-bit components.
// All arithmetic is overflow-checked; the operator algebra keeps numbers
// tiny, so hitting Overflow means a logic error upstream, not a capacity
// problem to paper over.

#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hem {

using i64 = std::int64_t;

struct Overflow : std::runtime_error {
    Overflow() : std::runtime_error("exact integer arithmetic overflow") {}
};

inline i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline i64 checked_sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
}

inline i64 gcd_nonneg(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// (p + q*i) / r, invariants: r > 0, gcd(p, q, r) = 1, zero is 0/1.
struct GaussRat {
    i64 p = 0, q = 0, r = 1;

    GaussRat() = default;
    GaussRat(i64 num) : p(num), q(0), r(1) {}
    GaussRat(i64 re_num, i64 im_num, i64 den) : p(re_num), q(im_num), r(den) { normalize(); }

    static GaussRat frac(i64 num, i64 den) { return GaussRat(num, 0, den); }
    static GaussRat imag_unit() { return GaussRat(0, 1, 1); }

    void normalize() {
        if (r == 0) throw std::domain_error("GaussRat: zero denominator");
        if (r < 0) { p = checked_sub(0, p); q = checked_sub(0, q); r = checked_sub(0, r); }
        if (p == 0 && q == 0) { r = 1; return; }
        i64 g = gcd_nonneg(gcd_nonneg(p, q), r);
        p /= g; q /= g; r /= g;
    }

    bool is_zero() const { return p == 0 && q == 0; }
    bool is_real() const { return q == 0; }
    bool is_one() const { return p == 1 && q == 0 && r == 1; }

    GaussRat operator-() const { GaussRat z; z.p = checked_sub(0, p); z.q = checked_sub(0, q); z.r = r; return z; }

    friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
        GaussRat z;
        z.p = checked_add(checked_mul(a.p, b.r), checked_mul(b.p, a.r));
        z.q = checked_add(checked_mul(a.q, b.r), checked_mul(b.q, a.r));
        z.r = checked_mul(a.r, b.r);
        z.normalize();
        return z;
    }
    friend GaussRat operator-(const GaussRat& a, const GaussRat& b) { return a + (-b); }
    friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
        GaussRat z;
        z.p = checked_sub(checked_mul(a.p, b.p), checked_mul(a.q, b.q));
        z.q = checked_add(checked_mul(a.p, b.q), checked_mul(a.q, b.p));
        z.r = checked_mul(a.r, b.r);
        z.normalize();
        return z;
    }
    friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
        if (b.is_zero()) throw std::domain_error("GaussRat: division by zero");
        // a/b = a * conj(b) * r_b / |b_num|^2
        i64 n2 = checked_add(checked_mul(b.p, b.p), checked_mul(b.q, b.q));
        GaussRat conj_num;  // (b.p - b.q i) * b.r / n2
        conj_num.p = checked_mul(b.p, b.r);
        conj_num.q = checked_sub(0, checked_mul(b.q, b.r));
        conj_num.r = n2;
        conj_num.normalize();
        return a * conj_num;
    }
    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.p == b.p && a.q == b.q && a.r == b.r;
    }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

    std::complex<double> to_complex() const {
        return {static_cast<double>(p) / static_cast<double>(r),
                static_cast<double>(q) / static_cast<double>(r)};
    }

    // "3", "-1/2", "i", "-i/3", "(1+2*i)/5"
    std::string str() const {
        auto frac_str = [this](i64 n) {
            std::string s = std::to_string(n);
            if (r != 1) s += "/" + std::to_string(r);
            return s;
        };
        if (q == 0) return frac_str(p);
        if (p == 0) {
            std::string s = (q == 1) ? "i" : (q == -1) ? "-i" : std::to_string(q) + "*i";
            if (r != 1) s += "/" + std::to_string(r);
            return s;
        }
        std::string s = "(" + std::to_string(p) + (q > 0 ? "+" : "-");
        i64 aq = q > 0 ? q : -q;
        s += (aq == 1) ? "i" : std::to_string(aq) + "*i";
        s += ")";
        if (r != 1) s += "/" + std::to_string(r);
        return s;
    }
};

}  // namespace hem
