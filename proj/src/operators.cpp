#include "hem/operators.hpp"

#include <algorithm>
#include <sstream>

namespace hem {

namespace {
const CoefField kHalfI = CoefField::imag_unit() * CoefField(GaussRat(1, 0, 2));
}

FockPoly apply_heisenberg(const FockPoly& p, int n, bool antiholo, const CoefField& alpha) {
    if (p.sector == Sector::boundary && antiholo)
        throw std::domain_error("no antiholomorphic modes in the boundary sector");
    if (n == 0) return p.scaled(kHalfI * alpha);
    int k = n > 0 ? n : -n;
    if (p.sector == Sector::boundary) {
        if (n > 0) return p.derivative(k).scaled(kHalfI);
        return (p.derivative(k) - p.times_var(k).scaled(CoefField(2 * k))).scaled(kHalfI);
    }
    // bulk: holo family differentiates phi and multiplies phi; tilde family
    // differentiates phib on the annihilation side and multiplies phib
    int dvar = antiholo ? -k : k;
    int cvar = antiholo ? k : -k;  // the conjugate slot entering the creation half
    if (n > 0) return p.derivative(dvar).scaled(kHalfI);
    return (p.derivative(cvar) - p.times_var(dvar).scaled(CoefField(2 * k))).scaled(kHalfI);
}

CoefField conformal_weight(const CoefField& alpha) {
    CoefField half(GaussRat(1, 0, 2));
    return alpha * half * (CoefField::Q() - alpha * half);
}

FockPoly apply_virasoro(const FockPoly& p, int n, bool antiholo, const CoefField& alpha) {
    if (p.is_zero()) return p;
    const CoefField I = CoefField::imag_unit();
    if (n == 0) {
        FockPoly acc = p.scaled(conformal_weight(alpha));
        int N = p.level();
        for (int m = 1; m <= N; ++m) {
            FockPoly t = apply_heisenberg(apply_heisenberg(p, m, antiholo, alpha), -m, antiholo, alpha);
            acc = acc + t.scaled(CoefField(2));
        }
        return acc;
    }
    FockPoly acc =
        apply_heisenberg(p, n, antiholo, alpha).scaled(I * (alpha - CoefField(n + 1) * CoefField::Q()));
    int M = p.level() + std::abs(n) + 1;
    for (int m = -M; m <= M; ++m) {
        if (m == 0 || m == n) continue;
        FockPoly inner = apply_heisenberg(p, m, antiholo, alpha);
        if (inner.is_zero()) continue;
        acc = acc + apply_heisenberg(inner, n - m, antiholo, alpha);
    }
    return acc;
}

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
    for (int x : parts)
        if (x <= 0) throw std::domain_error("partition parts must be positive");
    if (!std::is_sorted(parts.rbegin(), parts.rend()))
        throw std::domain_error("partition parts must be non-increasing");
}
int Partition::size() const {
    int s = 0;
    for (int x : parts) s += x;
    return s;
}
std::string Partition::str() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
    os << ")";
    return os.str();
}

std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    std::vector<int> cur;
    // parts non-increasing, bounded by previous part
    auto rec = [&](auto&& self, int rem, int maxp) -> void {
        if (rem == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(rem, maxp); p >= 1; --p) {
            cur.push_back(p);
            self(self, rem - p, p);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

FockPoly descendant(Sector s, const Partition& nu, const Partition& nubar) {
    if (s == Sector::boundary && nubar.length() > 0)
        throw std::domain_error("boundary descendants carry no antiholomorphic partition");
    FockPoly v = FockPoly::one(s);
    for (int part : nu.parts) v = apply_virasoro(v, -part, false);
    for (int part : nubar.parts) v = apply_virasoro(v, -part, true);
    if (!v.imag_free())
        throw VerificationFailure("vacuum descendant L_{-" + nu.str() + "} tL_{-" + nubar.str() +
                                  "} |1> has a coefficient with nonzero imaginary part");
    return v;
}

FockPoly singular_op_level2(const FockPoly& p, bool antiholo, const CoefField& alpha) {
    FockPoly l2 = apply_virasoro(p, -2, antiholo, alpha);
    FockPoly l11 = apply_virasoro(apply_virasoro(p, -1, antiholo, alpha), -1, antiholo, alpha);
    return l2.scaled(alpha * alpha) + l11;
}

SingularVectorResult singular_vector_level2(Sector s) {
    SingularVectorResult res;
    const CoefField a = CoefField::sym_a();
    const CoefField root12 = CoefField::kac12();
    const CoefField root21 = CoefField::kac21();
    const CoefField factor = a * a * (a - root12) * (a - root12) * (a - root21) * (a - root21);

    FockPoly vac = FockPoly::one(s);
    if (s == Sector::boundary) {
        res.value = singular_op_level2(vac);
        res.other_order = res.value;
        // 2 a (a - a12)(a - a21) phi2
        res.factored_form = FockPoly::variable(s, 2).scaled(
            CoefField(2) * a * (a - root12) * (a - root21));
        res.orders_agree = true;
        res.factorization_ok = (res.value == res.factored_form);
        return res;
    }
    FockPoly s0 = singular_op_level2(vac, false);
    res.value = singular_op_level2(s0, true);
    FockPoly ts0 = singular_op_level2(vac, true);
    res.other_order = singular_op_level2(ts0, false);
    res.orders_agree = (res.value == res.other_order);
    // a^2 (a-a12)^2 (a-a21)^2 (4 phi2 phib2 - 1)
    FockPoly quad = FockPoly::variable(s, 2).times_var(-2).scaled(CoefField(4)) - FockPoly::one(s);
    res.factored_form = quad.scaled(factor);
    res.factorization_ok = (res.value == res.factored_form);
    if (!res.value.imag_free())
        throw VerificationFailure("level-2 singular vector is not i-free");
    return res;
}

std::vector<FockMono> basis_monomials(Sector s, int max_level) {
    std::vector<FockMono> out;
    auto add_from = [&](const Partition& mu, const Partition& mubar) {
        FockMono m;
        for (int part : mu.parts) m = m.with_exponent(part, m.exponent(part) + 1);
        for (int part : mubar.parts) m = m.with_exponent(-part, m.exponent(-part) + 1);
        out.push_back(m);
    };
    for (int total = 0; total <= max_level; ++total) {
        if (s == Sector::boundary) {
            for (auto& mu : partitions_of(total)) add_from(mu, Partition{});
        } else {
            for (int holo = 0; holo <= total; ++holo) {
                for (auto& mu : partitions_of(holo))
                    for (auto& mub : partitions_of(total - holo)) add_from(mu, mub);
            }
        }
    }
    return out;
}

void commutator_check(Sector s, int m, int n, int max_level) {
    const CoefField cc = CoefField::central_charge();
    const CoefField central =
        (m + n == 0) ? cc * CoefField(GaussRat(static_cast<i64>(m) * m * m - m, 0, 12))
                     : CoefField(0);
    auto check_family = [&](bool anti) {
        for (const FockMono& mono : basis_monomials(s, max_level)) {
            FockPoly p = FockPoly::zero(s);
            p.terms[mono] = CoefField(1);
            FockPoly lhs = apply_virasoro(apply_virasoro(p, n, anti), m, anti) -
                           apply_virasoro(apply_virasoro(p, m, anti), n, anti);
            FockPoly rhs = apply_virasoro(p, m + n, anti).scaled(CoefField(m - n));
            if (m + n == 0) rhs = rhs + p.scaled(central);
            if (!(lhs == rhs)) {
                std::ostringstream os;
                os << "Virasoro commutator mismatch: [L_" << m << ", L_" << n << "] on "
                   << mono.str() << (anti ? " (tilde family)" : "") << "\n  got      "
                   << lhs.str() << "\n  expected " << rhs.str();
                throw VerificationFailure(os.str());
            }
        }
    };
    check_family(false);
    if (s == Sector::bulk) {
        check_family(true);
        // the two chiral halves must commute
        for (const FockMono& mono : basis_monomials(s, max_level)) {
            FockPoly p = FockPoly::zero(s);
            p.terms[mono] = CoefField(1);
            FockPoly lhs = apply_virasoro(apply_virasoro(p, n, true), m, false) -
                           apply_virasoro(apply_virasoro(p, m, false), n, true);
            if (!lhs.is_zero()) {
                std::ostringstream os;
                os << "[L_" << m << ", tL_" << n << "] != 0 on " << mono.str();
                throw VerificationFailure(os.str());
            }
        }
    }
}

}  // namespace hem
