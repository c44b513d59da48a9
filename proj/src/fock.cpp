#include "hem/fock.hpp"

#include <algorithm>
#include <sstream>

namespace hem {

FockMono FockMono::with_exponent(int idx, int e) const {
    FockMono z;
    bool placed = false;
    for (auto& [i, ex] : vars) {
        if (i == idx) {
            placed = true;
            if (e > 0) z.vars.push_back({i, e});
        } else {
            z.vars.push_back({i, ex});
        }
    }
    if (!placed && e > 0) z.vars.push_back({idx, e});
    std::sort(z.vars.begin(), z.vars.end(), [](auto& x, auto& y) {
        return position(x.first) < position(y.first);
    });
    return z;
}

std::string FockMono::str() const {
    if (vars.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (auto& [idx, e] : vars) {
        if (!first) os << "*";
        first = false;
        os << (idx > 0 ? "phi" : "phib") << (idx > 0 ? idx : -idx);
        if (e > 1) os << "^" << e;
    }
    return os.str();
}

bool FockMonoLess::operator()(const FockMono& x, const FockMono& y) const {
    int lx = x.level(), ly = y.level();
    if (lx != ly) return lx < ly;
    // lex on (position, exponent) pairs; both vectors sorted by position
    size_t i = 0, j = 0;
    while (i < x.vars.size() && j < y.vars.size()) {
        int px = FockMono::position(x.vars[i].first);
        int py = FockMono::position(y.vars[j].first);
        if (px != py) return px < py;  // earlier variable present = smaller under lex-from-front
        if (x.vars[i].second != y.vars[j].second) return x.vars[i].second < y.vars[j].second;
        ++i;
        ++j;
    }
    return x.vars.size() < y.vars.size();
}

FockPoly FockPoly::zero(Sector s) {
    FockPoly p;
    p.sector = s;
    return p;
}
FockPoly FockPoly::one(Sector s) {
    FockPoly p;
    p.sector = s;
    p.terms[FockMono{}] = CoefField(1);
    return p;
}
FockPoly FockPoly::variable(Sector s, int idx) {
    if (s == Sector::boundary && idx < 0)
        throw std::domain_error("boundary sector has no conjugate modes");
    FockPoly p;
    p.sector = s;
    FockMono m;
    m.vars.push_back({idx, 1});
    p.terms[m] = CoefField(1);
    return p;
}

int FockPoly::level() const {
    int l = 0;
    for (auto& [m, c] : terms) l = std::max(l, m.level());
    return l;
}

void FockPoly::add_term(const FockMono& m, const CoefField& c) {
    if (c.is_zero()) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        terms[m] = c;
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

FockPoly FockPoly::operator-() const {
    FockPoly z = *this;
    for (auto& [m, c] : z.terms) c = -c;
    return z;
}
FockPoly operator+(const FockPoly& x, const FockPoly& y) {
    if (x.sector != y.sector) throw std::domain_error("sector mismatch");
    FockPoly z = x;
    for (auto& [m, c] : y.terms) z.add_term(m, c);
    return z;
}
FockPoly operator-(const FockPoly& x, const FockPoly& y) { return x + (-y); }
FockPoly operator*(const FockPoly& x, const FockPoly& y) {
    if (x.sector != y.sector) throw std::domain_error("sector mismatch");
    FockPoly z = FockPoly::zero(x.sector);
    for (auto& [mx, cx] : x.terms) {
        for (auto& [my, cy] : y.terms) {
            FockMono m = mx;
            for (auto& [idx, e] : my.vars) m = m.with_exponent(idx, m.exponent(idx) + e);
            z.add_term(m, cx * cy);
        }
    }
    return z;
}
FockPoly FockPoly::scaled(const CoefField& c) const {
    FockPoly z = FockPoly::zero(sector);
    if (c.is_zero()) return z;
    for (auto& [m, cc] : terms) z.terms[m] = cc * c;
    return z;
}
bool operator==(const FockPoly& x, const FockPoly& y) {
    if (x.sector != y.sector) return false;
    if (x.terms.size() != y.terms.size()) return false;
    auto ix = x.terms.begin();
    auto iy = y.terms.begin();
    for (; ix != x.terms.end(); ++ix, ++iy) {
        if (!(ix->first == iy->first)) return false;
        if (ix->second != iy->second) return false;
    }
    return true;
}

FockPoly FockPoly::derivative(int idx) const {
    FockPoly z = FockPoly::zero(sector);
    for (auto& [m, c] : terms) {
        int e = m.exponent(idx);
        if (e == 0) continue;
        z.add_term(m.with_exponent(idx, e - 1), c * CoefField(e));
    }
    return z;
}
FockPoly FockPoly::times_var(int idx) const {
    if (sector == Sector::boundary && idx < 0)
        throw std::domain_error("boundary sector has no conjugate modes");
    FockPoly z = FockPoly::zero(sector);
    for (auto& [m, c] : terms) z.terms[m.with_exponent(idx, m.exponent(idx) + 1)] = c;
    return z;
}

bool FockPoly::imag_free() const {
    for (auto& [m, c] : terms)
        if (!c.imag_free()) return false;
    return true;
}

std::string FockPoly::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print highest level first: reverse canonical order
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        std::string cs = it->second.str();
        bool neg = (!cs.empty() && cs[0] == '-' &&
                    cs.find('+') == std::string::npos && cs.find(" - ") == std::string::npos);
        if (first) {
            first = false;
            if (neg) { os << "-"; cs = cs.substr(1); }
        } else if (neg) {
            os << " - ";
            cs = cs.substr(1);
        } else {
            os << " + ";
        }
        bool needs_paren = (cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos);
        std::string ms = it->first.str();
        if (ms == "1") {
            os << (needs_paren ? "(" + cs + ")" : cs);
        } else if (cs == "1") {
            os << ms;
        } else {
            os << (needs_paren ? "(" + cs + ")" : cs) << "*" << ms;
        }
    }
    return os.str();
}

std::map<std::string, std::string> FockPoly::to_json_map() const {
    std::map<std::string, std::string> out;
    for (auto& [m, c] : terms) out[m.str()] = c.str();
    return out;
}

NumericFockPoly substitute(const FockPoly& p, std::complex<double> a, std::complex<double> b) {
    NumericFockPoly out;
    for (auto& [m, c] : p.terms) {
        std::complex<double> v = c.eval(a, b);  // throws SubstitutionPole naming the coefficient
        if (v != std::complex<double>(0.0, 0.0)) out[m.str()] = v;
    }
    return out;
}

}  // namespace hem
