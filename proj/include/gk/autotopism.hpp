#ifndef GK_AUTOTOPISM_HPP
#define GK_AUTOTOPISM_HPP

#include <optional>
#include <tuple>

#include "gk/nuclei.hpp"
#include "gk/semifield.hpp"

namespace gk {

/// Compact exponent form of a monomial autotopism. The pair (X, Y) with
/// X C Y = C is stored through X = diag(g^x1 t^{p^i}, g^x2 t^{p^i}) and the
/// transport factor P with Y = P^{-1}:
///   form Diagonal:      P(x, y) = (g^y1 x^{p^i}, g^y2 y^{p^i})
///   form Antidiagonal:  P(x, y) = (g^y1 y^{p^i}, g^y2 x^{p^i})
/// Under c -> X c Y the product law is (X_a X_b, Y_b Y_a), which on the
/// P side is plain composition P_a P_b; keys compose by exponent arithmetic.
struct AutKey {
    int i = 0;
    Form form = Form::Diagonal;
    u64 x1 = 0, x2 = 0;  // X scalars
    u64 y1 = 0, y2 = 0;  // P scalars

    bool operator==(const AutKey&) const = default;
    bool operator<(const AutKey& o) const {
        auto t = [](const AutKey& k) {
            return std::tuple(k.i, int(k.form), k.y1, k.y2, k.x1, k.x2);
        };
        return t(*this) < t(o);
    }
};

struct AutKeyHash {
    size_t operator()(const AutKey& k) const noexcept {
        u64 h = (u64(k.i) << 1) | u64(k.form);
        auto mix = [&](u64 v) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        };
        mix(k.x1);
        mix(k.x2);
        mix(k.y1);
        mix(k.y2);
        return size_t(h);
    }
};

/// A constructed (not necessarily verified) autotopism with matrix forms.
struct Autotopism {
    AutKey key;
    MatFp X, Y;
    bool verified = false;
};

AutKey identity_key();
AutKey compose_keys(const FieldTower& T, const AutKey& a, const AutKey& b);
AutKey invert_key(const FieldTower& T, const AutKey& a);

/// Matrix forms of a key.
MatFp key_X(const GkParams& P, const AutKey& k);
MatFp key_Y(const GkParams& P, const AutKey& k);
Autotopism key_autotopism(const GkParams& P, const AutKey& k);

/// Recovers the key of a monomial pair (X diagonal, Y the inverse of a
/// diagonal or antidiagonal monomial pair of the same p-degree), if it has
/// that shape.
std::optional<AutKey> key_from_matrices(const GkParams& P, const MatFp& X, const MatFp& Y);

struct Admissible {
    int i = 0;
    Form form = Form::Diagonal;
    u64 alpha_exp = 0;  // witness root of alpha^{r-1} = A^{p^i -/+ 1}
    u64 delta_exp = 0;  // B^{p^i -/+ 1} / alpha^{q+1}, a member of D^x
};

/// Indices i with both conditions satisfiable: alpha exists for the A-side
/// power equation and some root makes delta land in D^x. Every root is
/// tried; the first working root (by exponent) is the recorded witness.
std::vector<Admissible> admissible_indices(const GkParams& P, Form form);

/// The (p^e - 1) pairs (gamma, eps) in E^x x D^x factoring the delta
/// condition for the given form, as generator exponents, sorted.
std::vector<std::pair<u64, u64>> delta_factorizations(const GkParams& P, u64 delta_exp,
                                                      Form form);

Autotopism construct_diagonal(const GkParams& P, int i, const FieldElem& alpha,
                              const FieldElem& d2, const FieldElem& gamma,
                              const FieldElem& eps);
Autotopism construct_antidiagonal(const GkParams& P, int i, const FieldElem& alpha,
                                  const FieldElem& c2, const FieldElem& gamma,
                                  const FieldElem& eps);

struct VerifyResult {
    bool ok = false;
    MatFp witness;  // matrix of the induced (u,v) -> (w,t) map when ok
};
/// Definition-level check: X c Y lies in the spread set for every basis
/// member and the induced coordinate map is a bijection.
VerifyResult verify_autotopism(const SpreadSet& C, const MatFp& X, const MatFp& Y);

/// Group operations; products are re-verified (ConventionMismatch when the
/// composed pair fails, which would indicate an order-of-composition bug).
Autotopism compose_autotopisms(const GkParams& P, const SpreadSet& C, const Autotopism& a,
                               const Autotopism& b);
Autotopism invert_autotopism(const GkParams& P, const SpreadSet& C, const Autotopism& a);

enum class VerifyMode { Full, Sampled };
struct VerifyPolicy {
    VerifyMode mode = VerifyMode::Full;
    u64 samples_per_family = 10000;  // Sampled mode
    u64 seed = 12345;
    int threads = 1;
};

struct FamilyInfo {
    int i = 0;
    Form form = Form::Diagonal;
    u64 alpha_exp = 0, delta_exp = 0;
    u64 count = 0;
    u64 verified = 0;
    u64 failed = 0;
};

struct GroupInventory {
    std::vector<AutKey> elements;  // canonical order
    std::vector<FamilyInfo> families;
    u64 order = 0;
    u64 duplicates = 0;
    u64 verified_count = 0;
    u64 failed_count = 0;
    bool fully_verified = false;
    int i0 = 0;          // minimal positive admissible diagonal index (0 if none)
    int case_label = 1;  // 1 or 2 by whether A^2 is an (r-1)-st power
};

GroupInventory enumerate_group(const GkParams& P, const SpreadSet& C,
                               const VerifyPolicy& policy);

struct StructureReport {
    u64 order = 0;
    int case_label = 1;
    int i0 = 0;
    std::vector<int> admissible_diag, admissible_anti;
    bool matches_theorem_shape = false;

    bool abelian = false;
    std::optional<std::pair<AutKey, AutKey>> noncommuting_witness;
    u64 generator_count = 0;
    bool generators_generate = false;

    u64 index0_subgroup_order = 0;
    bool index0_subgroup_normal = false;
    u64 quotient_order = 0;
    bool quotient_cyclic = false;

    u64 diag0_order = 0;
    u64 diag0_exponent = 0;
    bool diag0_matches_invariants = false;  // order-divisor histogram of Z_{p^m-1} x Z_{p^e-1}

    bool all_X_semilinear_over_D = false;
    bool all_Y_semilinear_over_E = false;
    bool all_monomial = false;

    u64 derived1_order = 0;
    u64 derived2_order = 0;
    int derived_length = 0;
    bool solvable = false;
};

StructureReport structure_report(const GkParams& P, const GroupInventory& inv, int threads,
                                 u64 seed);

/// Exhaustive sweep over the monomial ansatz at one (i, form): free scalars
/// range over (M^x)^2, the remaining scalars come from the forced-witness
/// root extractions, and every candidate is submitted to the spread-set
/// verifier. Returns exactly the verified keys, sorted. Requires p^m <= 3^6.
std::vector<AutKey> ansatz_exhaustive_oracle(const GkParams& P, const SpreadSet& C, int i,
                                             Form form, int threads);

} // namespace gk

#endif
