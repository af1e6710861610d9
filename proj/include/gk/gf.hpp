#ifndef GK_GF_HPP
#define GK_GF_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gk/error.hpp"

namespace gk {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Largest supported extension degree. Towers additionally cap p^m at 2^24.
inline constexpr int kMaxDegree = 16;

/// Element of F_{p^m} as a coefficient vector in the power basis of the
/// modulus root, low degree first, zero-padded beyond degree m-1.
/// Arithmetic lives on FieldTower; elements of different towers must not mix.
struct FieldElem {
    std::array<std::uint8_t, kMaxDegree> c{};

    bool operator==(const FieldElem&) const = default;
    bool is_zero() const {
        for (auto x : c)
            if (x) return false;
        return true;
    }
};

/// The tower F_p < D = F_{p^d} < E = F_{p^e} < M = F_{p^m} with m even,
/// m/e odd (e = gcd(k,m), d = gcd(k+m/2,m), e = 2d), q = p^k, Q = p^{m/2},
/// r = p^{k+m/2}. Immutable after construction; safe to share across threads.
class FieldTower {
public:
    /// Builds the tower, selecting the modulus (lexicographically smallest
    /// monic irreducible, coefficients compared low-degree-first) when not
    /// given, and the smallest primitive element under the same ordering.
    static FieldTower make(int p, int m, int k);
    static FieldTower make(int p, int m, int k, const std::vector<int>& modulus);

    int p() const { return p_; }
    int m() const { return m_; }
    int k() const { return k_; }
    int e() const { return e_; }
    int d() const { return d_; }
    u64 q() const { return q_; }
    u64 Q() const { return Q_; }
    u64 r() const { return r_; }
    u64 field_order() const { return pm_; }      // p^m
    u64 unit_order() const { return pm_ - 1; }   // p^m - 1;
    const std::vector<int>& modulus() const { return modulus_; }
    const FieldElem& generator() const { return gen_; }

    FieldElem zero() const { return FieldElem{}; }
    FieldElem one() const;
    FieldElem from_coeffs(std::span<const int> coeffs) const;
    /// Element with coefficient 1 at degree j (the basis vector t^j).
    FieldElem basis_elem(int j) const;
    /// Packs/unpacks the coefficient vector as an integer in [0, p^m).
    u64 to_code(const FieldElem& a) const;
    FieldElem from_code(u64 code) const;

    FieldElem add(const FieldElem& a, const FieldElem& b) const;
    FieldElem sub(const FieldElem& a, const FieldElem& b) const;
    FieldElem neg(const FieldElem& a) const;
    FieldElem mul(const FieldElem& a, const FieldElem& b) const;
    FieldElem inv(const FieldElem& a) const;   // throws DivisionByZero on 0
    FieldElem pow(const FieldElem& a, i64 n) const;
    FieldElem frobenius(const FieldElem& a, int i) const;  // a^{p^i}, i mod m

    /// g^n for any integer n (table-backed at desk scale).
    FieldElem gen_pow(i64 n) const;

    /// True iff a lies in F_{p^s}; s must divide m.
    bool in_subfield(const FieldElem& a, int s) const;

    /// True iff nonzero a is a t-th power in M^x, via a^((p^m-1)/gcd(t, p^m-1)) = 1.
    bool is_kth_power(const FieldElem& a, u64 t) const;

    /// All x with x^t = c (c != 0): empty, or exactly gcd(t, p^m-1) roots.
    /// Found via discrete log on the fixed generator (baby-step/giant-step).
    std::vector<FieldElem> roots_of_power_equation(const FieldElem& c, u64 t) const;
    /// Exponent-space version: solutions y of y*t = target (mod p^m-1),
    /// i.e. exponents of the roots of x^t = g^target. Sorted ascending.
    std::vector<u64> roots_of_power_equation_exp(u64 target_exp, u64 t) const;

    /// Discrete log base g of a nonzero element (BSGS, table size ceil(sqrt(N))).
    u64 dlog(const FieldElem& a) const;

    /// Empty tower; usable only after assignment from make().
    FieldTower() = default;

    /// All p^s elements of the subfield F_{p^s}, s | m, in generator-power order
    /// (zero first, then g^{j*(p^m-1)/(p^s-1)} for ascending j).
    std::vector<FieldElem> subfield_elements(int s) const;

private:
    void init_tables();

    int p_ = 0, m_ = 0, k_ = 0, e_ = 0, d_ = 0;
    u64 q_ = 0, Q_ = 0, r_ = 0, pm_ = 0;
    std::vector<int> modulus_;          // c_0..c_m, monic
    FieldElem gen_;
    // t^{m+j} reduced, j = 0..m-2
    std::array<FieldElem, kMaxDegree> red_{};
    // column-major images of the basis under x -> x^{p^i}, i = 0..m-1
    std::vector<std::array<FieldElem, kMaxDegree>> frob_images_;
    std::vector<FieldElem> unit_pow_;   // g^j for all j < p^m-1
    // BSGS baby table: packed codes of g^j, j < bsgs_s_, sorted by code
    std::vector<std::pair<u64, u32>> baby_;
    u64 bsgs_s_ = 0;
    FieldElem giant_step_;              // g^{-s}
};

/// Computes (gcd(p^i-1, p^m-1), gcd(p^i+1, p^m-1)) and checks them against
/// the closed forms p^gcd(i,m)-1 and 1 / 2 / p^gcd(i,m)+1 (by parity of
/// m/gcd(i,m) and p); throws InternalCheck on mismatch.
std::pair<u64, u64> gcd_lemma_check(int i, int m, int p);

bool is_prime_u64(u64 n);
u64 pow_u64(u64 base, u64 exp);  // throws ScaleTooLarge on overflow

} // namespace gk

#endif
