#pragma once
// Free-field representation acting on FockPoly states.
//
// Bulk holomorphic modes:   A_n = (i/2) d/dphi_n          (n > 0)
//                           A_-n = (i/2)(d/dphib_n - 2n phi_n)
//                           A_0 = (i/2) a
// Bulk antiholomorphic:     tA_n = (i/2) d/dphib_n,  tA_-n = (i/2)(d/dphi_n - 2n phib_n)
// Boundary (real modes):    A_n = (i/2) d/dphi_n,   A_-n = (i/2)(d/dphi_n - 2n phi_n)
//
// Virasoro via normal-ordered quadratic form:
//   L_n = i(a - (n+1)Q) A_n + sum_{m != 0, n} A_{n-m} A_m     (n != 0)
//   L_0 = Delta_a + 2 sum_{m >= 1} A_{-m} A_m
// The m-sum is finite on polynomials; we iterate m over [-(N+|n|+1), N+|n|+1]
// where N = level(p), one slot wider than the support bound, and tests pin
// that the extra slot contributes zero.

#include <optional>

#include "hem/fock.hpp"

namespace hem {

// n may be any integer including 0; antiholo selects the tilde family (bulk only).
FockPoly apply_heisenberg(const FockPoly& p, int n, bool antiholo = false,
                          const CoefField& alpha = CoefField::sym_a());

FockPoly apply_virasoro(const FockPoly& p, int n, bool antiholo = false,
                        const CoefField& alpha = CoefField::sym_a());

CoefField conformal_weight(const CoefField& alpha);  // Delta_a = (a/2)(Q - a/2)

// Partition = non-increasing positive parts.
struct Partition {
    std::vector<int> parts;
    explicit Partition(std::vector<int> p = {});
    int size() const;    // sum of parts (the level)
    int length() const { return static_cast<int>(parts.size()); }
    std::string str() const;
};
std::vector<Partition> partitions_of(int n);

// L_{-nu} (antiholo: tL_{-nubar}) applied to the vacuum: largest part acts first.
// Descendants of the vacuum are checked i-free before returning.
FockPoly descendant(Sector s, const Partition& nu, const Partition& nubar);

// S0 = a^2 L_{-2} + (L_{-1})^2, and the tilde version in the bulk
FockPoly singular_op_level2(const FockPoly& p, bool antiholo = false,
                            const CoefField& alpha = CoefField::sym_a());

struct SingularVectorResult {
    FockPoly value;          // bulk: tS0 S0 |1>; boundary: S0 |1>
    FockPoly other_order;    // bulk: S0 tS0 |1>; boundary: same as value
    FockPoly factored_form;  // the closed product it must equal
    bool orders_agree = false;
    bool factorization_ok = false;
};
SingularVectorResult singular_vector_level2(Sector s);

// Verifies [L_m, L_n] = (m-n) L_{m+n} + (c/12)(m^3-m) delta_{m+n,0}
// on every monomial of level <= max_level; bulk also checks the tilde copy
// and [L_m, tL_n] = 0. Throws VerificationFailure on the first mismatch.
struct VerificationFailure : std::runtime_error {
    explicit VerificationFailure(const std::string& w) : std::runtime_error(w) {}
};
void commutator_check(Sector s, int m, int n, int max_level);

// All sector monomials of level <= max_level (pairs of partitions in the bulk).
std::vector<FockMono> basis_monomials(Sector s, int max_level);

}  // namespace hem
