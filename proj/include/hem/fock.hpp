#pragma once
// Polynomial Fock space for the free-field computations. A state is a
// polynomial in the mode variables phi_1, phi_2, ... and (bulk sector only)
// their conjugates phib_1, phib_2, ..., with CoefField coefficients. The
// level of a monomial is sum(n * exponent) over all its variables; creation
// operators raise it, annihilation operators lower it.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "hem/coeff.hpp"

namespace hem {

enum class Sector { bulk, boundary };

// var index: +n is phi_n, -n is phib_n (bulk only). Exponents positive.
struct FockMono {
    std::vector<std::pair<int, int>> vars;  // sorted by print position, no zero exponents

    static int position(int idx) {
        // interleave phi_1 < phib_1 < phi_2 < phib_2 < ...
        int n = idx > 0 ? idx : -idx;
        return 2 * (n - 1) + (idx > 0 ? 0 : 1);
    }

    int level() const {
        int l = 0;
        for (auto& [idx, e] : vars) l += (idx > 0 ? idx : -idx) * e;
        return l;
    }
    int exponent(int idx) const {
        for (auto& [i, e] : vars)
            if (i == idx) return e;
        return 0;
    }
    FockMono with_exponent(int idx, int e) const;  // e = 0 removes the variable

    std::string str() const;  // "1", "phi1^2*phib1", ...
    friend bool operator==(const FockMono& x, const FockMono& y) { return x.vars == y.vars; }
};

// graded lexicographic: level first, then the exponent sequence along the
// fixed variable order above; affects canonical printing only
struct FockMonoLess {
    bool operator()(const FockMono& x, const FockMono& y) const;
};

struct FockPoly {
    Sector sector = Sector::bulk;
    std::map<FockMono, CoefField, FockMonoLess> terms;  // no zero coefficients

    static FockPoly zero(Sector s);
    static FockPoly one(Sector s);                      // the vacuum polynomial 1
    static FockPoly variable(Sector s, int idx);        // phi_n or phib_n

    bool is_zero() const { return terms.empty(); }
    int level() const;  // max monomial level, 0 for the zero polynomial

    void add_term(const FockMono& m, const CoefField& c);

    FockPoly operator-() const;
    friend FockPoly operator+(const FockPoly& x, const FockPoly& y);
    friend FockPoly operator-(const FockPoly& x, const FockPoly& y);
    friend FockPoly operator*(const FockPoly& x, const FockPoly& y);
    FockPoly scaled(const CoefField& c) const;
    friend bool operator==(const FockPoly& x, const FockPoly& y);  // exact
    friend bool operator!=(const FockPoly& x, const FockPoly& y) { return !(x == y); }

    FockPoly derivative(int idx) const;  // d/d phi_idx
    FockPoly times_var(int idx) const;

    bool imag_free() const;

    std::string str() const;
    // canonical JSON object {monomial: coefficient-string}, keys sorted by
    // the serializer, value strings canonical per CoefField::str
    std::map<std::string, std::string> to_json_map() const;
};

// numeric image of a FockPoly after substituting (a, b)
using NumericFockPoly = std::map<std::string, std::complex<double>>;
NumericFockPoly substitute(const FockPoly& p, std::complex<double> a, std::complex<double> b);

}  // namespace hem
