#include "hem/coeff.hpp"

#include <cmath>
#include <sstream>

namespace hem {

Poly2 Poly2::constant(const GaussRat& c) {
    Poly2 p;
    if (!c.is_zero()) p.t[{0, 0}] = c;
    return p;
}
Poly2 Poly2::var_a() {
    Poly2 p;
    p.t[{1, 0}] = GaussRat(1);
    return p;
}
Poly2 Poly2::var_b(int power) {
    Poly2 p;
    p.t[{0, power}] = GaussRat(1);
    return p;
}

void Poly2::add_term(const Mono2& m, const GaussRat& c) {
    if (c.is_zero()) return;
    auto it = t.find(m);
    if (it == t.end()) {
        t[m] = c;
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) t.erase(it);
    }
}

Poly2 Poly2::operator-() const {
    Poly2 z;
    for (auto& [m, c] : t) z.t[m] = -c;
    return z;
}
Poly2 operator+(const Poly2& x, const Poly2& y) {
    Poly2 z = x;
    for (auto& [m, c] : y.t) z.add_term(m, c);
    return z;
}
Poly2 operator-(const Poly2& x, const Poly2& y) { return x + (-y); }
Poly2 operator*(const Poly2& x, const Poly2& y) {
    Poly2 z;
    for (auto& [mx, cx] : x.t)
        for (auto& [my, cy] : y.t)
            z.add_term({mx.da + my.da, mx.db + my.db}, cx * cy);
    return z;
}

Poly2 Poly2::shift_b(int k) const {
    Poly2 z;
    for (auto& [m, c] : t) z.t[{m.da, m.db + k}] = c;
    return z;
}

int Poly2::min_db() const {
    if (t.empty()) return 0;
    int m = t.begin()->first.db;
    for (auto& [mm, c] : t) m = std::min(m, mm.db);
    return m;
}

std::complex<double> Poly2::eval(std::complex<double> a, std::complex<double> bv) const {
    std::complex<double> acc = 0.0;
    for (auto& [m, c] : t) {
        std::complex<double> term = c.to_complex();
        term *= std::pow(a, m.da);
        term *= std::pow(bv, m.db);
        acc += term;
    }
    return acc;
}

std::string Poly2::str() const {
    if (t.empty()) return "0";
    // highest term first reads naturally
    std::ostringstream os;
    bool first = true;
    for (auto it = t.rbegin(); it != t.rend(); ++it) {
        const Mono2& m = it->first;
        GaussRat c = it->second;
        std::string cs = c.str();
        bool neg = (cs.size() && cs[0] == '-' && cs.find('(') == std::string::npos);
        if (first) {
            first = false;
            if (neg) { os << "-"; cs = cs.substr(1); }
        } else {
            if (neg) { os << " - "; cs = cs.substr(1); }
            else os << " + ";
        }
        std::string vars;
        if (m.da > 0) vars += (m.da == 1) ? "a" : "a^" + std::to_string(m.da);
        if (m.db != 0) {
            if (!vars.empty()) vars += "*";
            vars += (m.db == 1) ? "b" : "b^" + std::to_string(m.db);
        }
        if (vars.empty()) {
            os << cs;
        } else if (cs == "1") {
            os << vars;
        } else {
            os << cs << "*" << vars;
        }
    }
    return os.str();
}

CoefField::CoefField(const Poly2& n, const Poly2& d) : num(n), den(d) {
    if (den.is_zero()) throw std::domain_error("CoefField: zero denominator");
    normalize();
}

CoefField CoefField::sym_a() { return CoefField(Poly2::var_a(), Poly2::constant(GaussRat(1))); }
CoefField CoefField::sym_b(int power) {
    return CoefField(Poly2::var_b(power), Poly2::constant(GaussRat(1)));
}
CoefField CoefField::imag_unit() {
    return CoefField(Poly2::constant(GaussRat::imag_unit()), Poly2::constant(GaussRat(1)));
}
CoefField CoefField::Q() { return sym_b(1) + sym_b(-1); }
CoefField CoefField::central_charge() {
    CoefField q = Q();
    return CoefField(6) * q * q + CoefField(1);
}
CoefField CoefField::kac12() { return -sym_b(-1); }
CoefField CoefField::kac21() { return -sym_b(1); }

void CoefField::normalize() {
    if (num.is_zero()) {
        den = Poly2::constant(GaussRat(1));
        return;
    }
    // clear the shared Laurent shift so both sides are true polynomials
    int shift = std::min(num.min_db(), den.min_db());
    if (shift != 0) {
        num = num.shift_b(-shift);
        den = den.shift_b(-shift);
    }
    // monomial denominators divide exactly (after the shift the denominator
    // monomial is c*b^k and every numerator term has db >= 0; cancel what we can)
    if (den.is_monomial()) {
        const auto& [dm, dc] = *den.t.begin();
        int k = dm.db;  // da of a denominator arising here is always 0 in practice,
                        // but handle it uniformly: require term exponents to cover it
        bool divisible = true;
        for (auto& [m, c] : num.t)
            if (m.da < dm.da || m.db < k) { divisible = false; break; }
        if (divisible) {
            Poly2 z;
            for (auto& [m, c] : num.t) z.t[{m.da - dm.da, m.db - k}] = c / dc;
            num = z;
            den = Poly2::constant(GaussRat(1));
            return;
        }
    }
    // make the denominator monic under the (da, db) lex order
    GaussRat lead = den.t.rbegin()->second;
    if (!lead.is_one()) {
        Poly2 n2, d2;
        for (auto& [m, c] : num.t) n2.t[m] = c / lead;
        for (auto& [m, c] : den.t) d2.t[m] = c / lead;
        num = n2;
        den = d2;
    }
}

CoefField CoefField::operator-() const {
    CoefField z = *this;
    z.num = -z.num;
    return z;
}
CoefField operator+(const CoefField& x, const CoefField& y) {
    return CoefField(x.num * y.den + y.num * x.den, x.den * y.den);
}
CoefField operator-(const CoefField& x, const CoefField& y) { return x + (-y); }
CoefField operator*(const CoefField& x, const CoefField& y) {
    return CoefField(x.num * y.num, x.den * y.den);
}
CoefField operator/(const CoefField& x, const CoefField& y) {
    if (y.is_zero()) throw std::domain_error("CoefField: division by zero");
    return CoefField(x.num * y.den, x.den * y.num);
}
bool operator==(const CoefField& x, const CoefField& y) {
    return x.num * y.den == y.num * x.den;
}

bool CoefField::imag_free() const {
    for (auto& [m, c] : num.t)
        if (!c.is_real()) return false;
    for (auto& [m, c] : den.t)
        if (!c.is_real()) return false;
    return true;
}

std::complex<double> CoefField::eval(std::complex<double> a, std::complex<double> b) const {
    std::complex<double> d = den.eval(a, b);
    if (std::abs(d) < 1e-300) {
        throw SubstitutionPole("substitution hits a pole of coefficient " + str());
    }
    return num.eval(a, b) / d;
}

std::string CoefField::str() const {
    if (num.is_zero()) return "0";
    bool dtriv = (den.is_monomial() && den.t.begin()->first.da == 0 &&
                  den.t.begin()->first.db == 0 && den.t.begin()->second.is_one());
    std::string ns = num.str();
    if (dtriv) return ns;
    std::string ds = den.str();
    std::string l = (num.t.size() > 1) ? "(" + ns + ")" : ns;
    std::string r = (den.t.size() > 1) ? "(" + ds + ")" : ds;
    return l + "/" + r;
}

}  // namespace hem
