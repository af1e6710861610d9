#ifndef GK_LINMAP_HPP
#define GK_LINMAP_HPP

#include <optional>
#include <vector>

#include "gk/gf.hpp"

namespace gk {

/// Dense matrix over F_p, row-major, entries reduced mod p.
class MatFp {
public:
    MatFp() = default;
    MatFp(int n_rows, int n_cols, int p)
        : rows_(n_rows), cols_(n_cols), p_(p), a_(size_t(n_rows) * n_cols, 0) {}

    static MatFp identity(int n, int p);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int p() const { return p_; }
    std::uint8_t& at(int r, int c) { return a_[size_t(r) * cols_ + c]; }
    std::uint8_t at(int r, int c) const { return a_[size_t(r) * cols_ + c]; }
    const std::vector<std::uint8_t>& data() const { return a_; }
    std::vector<std::uint8_t>& data() { return a_; }

    bool operator==(const MatFp&) const = default;
    bool is_zero() const;

    MatFp operator+(const MatFp& o) const;
    MatFp operator-(const MatFp& o) const;
    MatFp operator*(const MatFp& o) const;
    MatFp scaled(int c) const;

    int rank() const;
    bool invertible() const { return rows_ == cols_ && rank() == rows_; }
    MatFp inverse() const;                    // throws SingularMatrix
    /// Basis of the right null space {x : Mx = 0}, as columns.
    std::vector<std::vector<std::uint8_t>> kernel() const;

    /// Row-major flattening (copy of the raw digits).
    std::vector<std::uint8_t> flatten() const { return a_; }

private:
    int rows_ = 0, cols_ = 0, p_ = 0;
    std::vector<std::uint8_t> a_;
};

/// F_p-linear map on M as a reduced linearized polynomial
/// x -> sum a_i x^{p^i}, coefficient vector of length m.
struct LinPoly {
    std::vector<FieldElem> a;

    bool operator==(const LinPoly&) const = default;
    bool is_zero() const {
        for (const auto& x : a)
            if (!x.is_zero()) return false;
        return true;
    }
    /// Index of the single nonzero coefficient, if the map is a monomial.
    std::optional<int> monomial_degree() const {
        int idx = -1;
        for (int i = 0; i < int(a.size()); ++i)
            if (!a[i].is_zero()) {
                if (idx >= 0) return std::nullopt;
                idx = i;
            }
        if (idx < 0) return std::nullopt;
        return idx;
    }
};

LinPoly linpoly_zero(const FieldTower& T);
LinPoly linpoly_identity(const FieldTower& T);
/// The monomial map x -> coeff * x^{p^i}.
LinPoly linpoly_monomial(const FieldTower& T, const FieldElem& coeff, int i);

FieldElem eval(const FieldTower& T, const LinPoly& f, const FieldElem& x);
LinPoly add(const FieldTower& T, const LinPoly& f, const LinPoly& g);
/// Reduced composition f(g(x)); exponents live in Z/mZ.
LinPoly compose(const FieldTower& T, const LinPoly& f, const LinPoly& g);

/// m x m matrix with M * coords(x) = coords(f(x)) in the power basis.
MatFp to_matrix(const FieldTower& T, const LinPoly& f);
/// Unique reduced linearized polynomial with the given matrix (Moore solve).
LinPoly from_matrix(const FieldTower& T, const MatFp& M);

/// The smallest j in [0, s) with f(lambda x) = lambda^{p^j} f(x) for all
/// lambda in F_{p^s}: equivalently all nonzero coefficients sit on indices
/// congruent to j mod s. Zero map reports 0. s must divide m.
std::optional<int> semilinear_over(const FieldTower& T, const LinPoly& f, int s);

/// f(x) = x u^q + x^q u.
LinPoly q_binomial_map(const FieldTower& T, const FieldElem& u);
/// f(x) = x^r v + A x v^r.
LinPoly r_binomial_map(const FieldTower& T, const FieldElem& v, const FieldElem& A);

enum class Form : std::uint8_t { Diagonal = 0, Antidiagonal = 1 };

/// 2x2 array of linearized polynomials acting on M x M as
/// (x, y) -> (f1(x) + f2(y), f3(x) + f4(y)).
struct SemilinearPair {
    LinPoly f1, f2, f3, f4;
    /// Set when all entries are monomials of common p-degree i in the named form.
    std::optional<std::pair<int, Form>> tag;
};

/// 2m x 2m block matrix of the pair in the concatenated power basis.
MatFp to_matrix2(const FieldTower& T, const SemilinearPair& P);

/// m x m matrix of x -> x^{p^i}.
MatFp frobenius_matrix(const FieldTower& T, int i);
/// m x m matrix of x -> c x.
MatFp multiplication_matrix(const FieldTower& T, const FieldElem& c);
/// m x m matrix of x -> c x^{p^i}.
MatFp monomial_matrix(const FieldTower& T, const FieldElem& c, int i);

/// Splits a 2m x 2m matrix into its four m x m blocks [f1 f2; f3 f4].
std::array<MatFp, 4> split_blocks(const FieldTower& T, const MatFp& M);

} // namespace gk

#endif
