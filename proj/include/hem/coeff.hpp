#pragma once
// Exact coefficient field for the operator algebra: rational functions in
// the insertion weight symbol `a` (the paper-facing alpha) and the coupling
// symbol `b`, with Gaussian-rational number coefficients. The background
// charge enters as Q = b + 1/b, so denominators that are powers of b are the
// generic case; general polynomial denominators are supported with a
// cross-multiplication equality test, which is exact regardless of whether
// a gcd was found.

#include <complex>
#include <map>
#include <string>

#include "hem/rational.hpp"

namespace hem {

// Monomial a^da * b^db; db may be negative while a term participates in
// intermediate Laurent arithmetic, but normalized CoefFields store true
// polynomials (db >= 0) in both numerator and denominator.
struct Mono2 {
    int da = 0;
    int db = 0;
    friend bool operator<(const Mono2& x, const Mono2& y) {
        if (x.da != y.da) return x.da < y.da;
        return x.db < y.db;
    }
    friend bool operator==(const Mono2& x, const Mono2& y) { return x.da == y.da && x.db == y.db; }
};

struct Poly2 {
    std::map<Mono2, GaussRat> t;  // no explicit zeros

    static Poly2 constant(const GaussRat& c);
    static Poly2 var_a();
    static Poly2 var_b(int power = 1);  // power may be negative (Laurent)

    bool is_zero() const { return t.empty(); }
    bool is_monomial() const { return t.size() == 1; }

    void add_term(const Mono2& m, const GaussRat& c);

    Poly2 operator-() const;
    friend Poly2 operator+(const Poly2& x, const Poly2& y);
    friend Poly2 operator-(const Poly2& x, const Poly2& y);
    friend Poly2 operator*(const Poly2& x, const Poly2& y);
    friend bool operator==(const Poly2& x, const Poly2& y) { return x.t == y.t; }

    Poly2 shift_b(int k) const;  // multiply by b^k
    int min_db() const;          // over all terms; 0 for the zero polynomial
    std::complex<double> eval(std::complex<double> a, std::complex<double> bv) const;
    std::string str() const;
};

// num/den, den != 0. Canonical form: both polynomials in (a,b), the shared
// power of b cancelled, den monic under the (da,db) lexicographic leading
// term, and den = 1 whenever it is a monomial (monomial division is exact).
struct CoefField {
    Poly2 num, den;

    CoefField() : num(), den(Poly2::constant(GaussRat(1))) {}
    CoefField(i64 c) : num(Poly2::constant(GaussRat(c))), den(Poly2::constant(GaussRat(1))) {}
    CoefField(const GaussRat& c) : num(Poly2::constant(c)), den(Poly2::constant(GaussRat(1))) {}
    CoefField(const Poly2& n, const Poly2& d);

    static CoefField sym_a();                 // the symbol a
    static CoefField sym_b(int power = 1);    // b^power, power may be negative
    static CoefField imag_unit();
    static CoefField Q();                     // b + 1/b
    static CoefField central_charge();        // 1 + 6 Q^2
    static CoefField kac12();                 // a_{1,2} = -1/b
    static CoefField kac21();                 // a_{2,1} = -b

    bool is_zero() const { return num.is_zero(); }

    void normalize();

    CoefField operator-() const;
    friend CoefField operator+(const CoefField& x, const CoefField& y);
    friend CoefField operator-(const CoefField& x, const CoefField& y);
    friend CoefField operator*(const CoefField& x, const CoefField& y);
    friend CoefField operator/(const CoefField& x, const CoefField& y);
    friend bool operator==(const CoefField& x, const CoefField& y);  // cross-multiplied, exact
    friend bool operator!=(const CoefField& x, const CoefField& y) { return !(x == y); }

    bool imag_free() const;  // all Gaussian-rational coefficients real

    // Throws SubstitutionPole when den vanishes at the point.
    std::complex<double> eval(std::complex<double> a, std::complex<double> b) const;

    std::string str() const;
};

struct SubstitutionPole : std::domain_error {
    explicit SubstitutionPole(const std::string& what) : std::domain_error(what) {}
};

}  // namespace hem
