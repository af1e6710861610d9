#ifndef GK_SEMIFIELD_HPP
#define GK_SEMIFIELD_HPP

#include <string>
#include <utility>

#include "gk/linmap.hpp"

namespace gk {

/// Validated parameter set (A, B) over a tower: B a non-square in M^x,
/// A*B in F_Q^x. A being a non-square follows and is asserted.
struct GkParams {
    FieldTower tower;
    FieldElem A, B;
    u64 a_exp = 0, b_exp = 0;  // discrete logs of A, B base g
};

GkParams validate_gk_params(const FieldTower& tower, const FieldElem& A, const FieldElem& B);

/// Convention for the second coordinate of the product. The two displayed
/// forms differ in one term; only the spread-set form is commutative, so it
/// is authoritative. The literal theorem form is kept for the discrepancy
/// report.
enum class SecondCoord { SpreadSet2, TheoremLiteral };

/// (x,y) o (u,v) with the authoritative (commutative) second coordinate.
std::pair<FieldElem, FieldElem> gk_multiply(const GkParams& P, const FieldElem& x,
                                            const FieldElem& y, const FieldElem& u,
                                            const FieldElem& v);
std::pair<FieldElem, FieldElem> gk_multiply_variant(const GkParams& P, const FieldElem& x,
                                                    const FieldElem& y, const FieldElem& u,
                                                    const FieldElem& v, SecondCoord conv);

struct ConventionReport {
    bool spreadset2_commutative = false;
    bool theorem_literal_commutative = false;
    u64 trials = 0;
    u64 seed = 0;
};
/// Randomized commutativity probe of both second-coordinate conventions.
ConventionReport convention_report(const GkParams& P, u64 trials, u64 seed);

/// n x n matrix (n = 2m) of (x,y) -> (x,y) o (u,v) in the concatenated basis.
MatFp spread_matrix(const GkParams& P, const FieldElem& u, const FieldElem& v);

/// The spread set C = {R_{u,v}} as an F_p-space of dimension 2m with an
/// exact membership solver. Immutable after construction.
class SpreadSet {
public:
    explicit SpreadSet(const GkParams& P);

    const GkParams& params() const { return params_; }
    int n() const { return n_; }
    int dim() const { return 2 * params_.tower.m(); }
    const std::vector<MatFp>& basis() const { return basis_; }

    /// The unique (u, v) with M = R_{u,v}, if M lies in the spread set.
    std::optional<std::pair<FieldElem, FieldElem>> membership(const MatFp& M) const;

    /// Membership of an externally flattened matrix; coords receives the
    /// (u,v) coordinate digits (length 2m) when the result is true.
    bool membership_digits(const std::uint8_t* flat, std::uint8_t* coords) const;

    /// Residual of a flattened n x n matrix after elimination against the
    /// spread basis (length n^2; all zero iff the matrix is a member).
    void reduce_digits(const std::uint8_t* flat, std::uint8_t* residual) const;

private:
    GkParams params_;
    int n_;
    std::vector<MatFp> basis_;                 // 2m matrices
    std::vector<std::vector<std::uint8_t>> rref_;  // 2m rows of length n^2
    std::vector<int> pivots_;
    std::vector<std::vector<std::uint8_t>> transform_;  // E with E*B = rref
};

SpreadSet build_spread_set(const GkParams& P);

enum class S3Mode { Full, Sampled };
struct S3Policy {
    S3Mode mode = S3Mode::Full;
    u64 samples = 100000;  // Sampled mode only
    u64 seed = 12345;
    int threads = 1;
};
struct S3Report {
    S3Mode mode = S3Mode::Full;
    u64 members_checked = 0;
    /// Codes (u_code * p^m + v_code) of singular members found, sorted.
    std::vector<u64> counterexamples;
    bool mrd() const { return counterexamples.empty(); }
};
/// Checks that nonzero members of the spread set are invertible (axiom S3;
/// equivalently the rank-metric code is MRD).
S3Report check_s3(const SpreadSet& C, const S3Policy& policy);

/// Presemifield on F_p^n stored through its n left-multiplication structure
/// matrices: z * w = sum_i z_i (S_i w).
struct Presemifield {
    int n = 0;
    int p = 0;
    std::vector<MatFp> left_mult;
    std::string label;
    bool commutative = false;

    std::vector<std::uint8_t> mult(const std::vector<std::uint8_t>& z,
                                   const std::vector<std::uint8_t>& w) const;
};

/// The GK presemifield itself (structure matrices = spread basis).
Presemifield gk_presemifield(const GkParams& P);

/// Semifield from the presemifield: z * w defined by
/// (x o e) * (e o y) = x o y, with identity e o e.
Presemifield kaplansky(const GkParams& P, const std::pair<FieldElem, FieldElem>& e);

/// Coordinate helpers between M x M pairs and F_p^{2m} digit vectors.
std::vector<std::uint8_t> pair_to_vec(const FieldTower& T, const FieldElem& x, const FieldElem& y);
std::pair<FieldElem, FieldElem> vec_to_pair(const FieldTower& T, const std::vector<std::uint8_t>& v);

} // namespace gk

#endif
