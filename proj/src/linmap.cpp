#include "gk/linmap.hpp"

#include <array>

namespace gk {

MatFp MatFp::identity(int n, int p) {
    MatFp I(n, n, p);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

bool MatFp::is_zero() const {
    for (auto x : a_)
        if (x) return false;
    return true;
}

MatFp MatFp::operator+(const MatFp& o) const {
    MatFp r(rows_, cols_, p_);
    for (size_t i = 0; i < a_.size(); ++i) {
        int s = a_[i] + o.a_[i];
        r.a_[i] = std::uint8_t(s >= p_ ? s - p_ : s);
    }
    return r;
}

MatFp MatFp::operator-(const MatFp& o) const {
    MatFp r(rows_, cols_, p_);
    for (size_t i = 0; i < a_.size(); ++i) {
        int s = a_[i] - o.a_[i];
        r.a_[i] = std::uint8_t(s < 0 ? s + p_ : s);
    }
    return r;
}

MatFp MatFp::operator*(const MatFp& o) const {
    MatFp r(rows_, o.cols_, p_);
    for (int i = 0; i < rows_; ++i) {
        for (int t = 0; t < cols_; ++t) {
            u32 v = a_[size_t(i) * cols_ + t];
            if (!v) continue;
            const std::uint8_t* orow = &o.a_[size_t(t) * o.cols_];
            std::uint8_t* rrow = &r.a_[size_t(i) * o.cols_];
            for (int j = 0; j < o.cols_; ++j) {
                u32 s = rrow[j] + v * orow[j];
                rrow[j] = std::uint8_t(s % u32(p_));
            }
        }
    }
    return r;
}

MatFp MatFp::scaled(int c) const {
    int cc = ((c % p_) + p_) % p_;
    MatFp r(rows_, cols_, p_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = std::uint8_t(a_[i] * cc % p_);
    return r;
}

namespace {

int mod_inverse(int a, int p) {
    int r = 1, base = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return r;
}

// In-place row echelon; returns rank. When inv != nullptr the same row ops
// are applied to it (must start as identity, square case only).
int echelon(MatFp& M, MatFp* inv) {
    int p = M.p(), rank = 0;
    for (int col = 0; col < M.cols() && rank < M.rows(); ++col) {
        int sel = -1;
        for (int i = rank; i < M.rows(); ++i)
            if (M.at(i, col)) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != rank)
            for (int j = 0; j < M.cols(); ++j) {
                std::swap(M.at(sel, j), M.at(rank, j));
                if (inv) std::swap(inv->at(sel, j), inv->at(rank, j));
            }
        int piv_inv = mod_inverse(M.at(rank, col), p);
        if (piv_inv != 1)
            for (int j = 0; j < M.cols(); ++j) {
                M.at(rank, j) = std::uint8_t(M.at(rank, j) * piv_inv % p);
                if (inv) inv->at(rank, j) = std::uint8_t(inv->at(rank, j) * piv_inv % p);
            }
        for (int i = 0; i < M.rows(); ++i) {
            if (i == rank) continue;
            int c = M.at(i, col);
            if (!c) continue;
            for (int j = 0; j < M.cols(); ++j) {
                int s = M.at(i, j) - c * M.at(rank, j) % p;
                M.at(i, j) = std::uint8_t(s < 0 ? s + p : s);
                if (inv) {
                    int s2 = inv->at(i, j) - c * inv->at(rank, j) % p;
                    inv->at(i, j) = std::uint8_t(s2 < 0 ? s2 + p : s2);
                }
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace

int MatFp::rank() const {
    MatFp tmp = *this;
    return echelon(tmp, nullptr);
}

MatFp MatFp::inverse() const {
    if (rows_ != cols_) throw Error(Errc::SingularMatrix, "inverse of non-square matrix");
    MatFp tmp = *this;
    MatFp inv = identity(rows_, p_);
    if (echelon(tmp, &inv) != rows_)
        throw Error(Errc::SingularMatrix, "matrix is singular");
    return inv;
}

std::vector<std::vector<std::uint8_t>> MatFp::kernel() const {
    MatFp tmp = *this;
    echelon(tmp, nullptr);
    // locate pivot columns
    std::vector<int> pivot_of_col(cols_, -1);
    int r = 0;
    for (int col = 0; col < cols_ && r < rows_; ++col) {
        if (tmp.at(r, col)) {
            pivot_of_col[col] = r;
            ++r;
        }
    }
    std::vector<std::vector<std::uint8_t>> basis;
    for (int col = 0; col < cols_; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        std::vector<std::uint8_t> v(cols_, 0);
        v[col] = 1;
        for (int c2 = 0; c2 < cols_; ++c2) {
            int pr = pivot_of_col[c2];
            if (pr >= 0) v[c2] = std::uint8_t((p_ - tmp.at(pr, col) % p_) % p_);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

LinPoly linpoly_zero(const FieldTower& T) {
    LinPoly f;
    f.a.assign(size_t(T.m()), T.zero());
    return f;
}

LinPoly linpoly_identity(const FieldTower& T) {
    LinPoly f = linpoly_zero(T);
    f.a[0] = T.one();
    return f;
}

LinPoly linpoly_monomial(const FieldTower& T, const FieldElem& coeff, int i) {
    LinPoly f = linpoly_zero(T);
    f.a[size_t(((i % T.m()) + T.m()) % T.m())] = coeff;
    return f;
}

FieldElem eval(const FieldTower& T, const LinPoly& f, const FieldElem& x) {
    FieldElem acc = T.zero();
    FieldElem xp = x;
    for (int i = 0; i < T.m(); ++i) {
        if (!f.a[i].is_zero()) acc = T.add(acc, T.mul(f.a[i], xp));
        if (i + 1 < T.m()) xp = T.frobenius(xp, 1);
    }
    return acc;
}

LinPoly add(const FieldTower& T, const LinPoly& f, const LinPoly& g) {
    LinPoly h = linpoly_zero(T);
    for (int i = 0; i < T.m(); ++i) h.a[i] = T.add(f.a[i], g.a[i]);
    return h;
}

LinPoly compose(const FieldTower& T, const LinPoly& f, const LinPoly& g) {
    LinPoly h = linpoly_zero(T);
    int m = T.m();
    for (int i = 0; i < m; ++i) {
        if (f.a[i].is_zero()) continue;
        for (int j = 0; j < m; ++j) {
            if (g.a[j].is_zero()) continue;
            int t = (i + j) % m;
            h.a[t] = T.add(h.a[t], T.mul(f.a[i], T.frobenius(g.a[j], i)));
        }
    }
    return h;
}

MatFp to_matrix(const FieldTower& T, const LinPoly& f) {
    int m = T.m();
    MatFp M(m, m, T.p());
    for (int j = 0; j < m; ++j) {
        FieldElem img = eval(T, f, T.basis_elem(j));
        for (int i = 0; i < m; ++i) M.at(i, j) = img.c[i];
    }
    return M;
}

LinPoly from_matrix(const FieldTower& T, const MatFp& M) {
    int m = T.m();
    if (M.rows() != m || M.cols() != m)
        throw Error(Errc::DimensionMismatch, "from_matrix needs an m x m matrix");
    // Solve the Moore system sum_i a_i b_j^{p^i} = y_j over M, b_j the power basis.
    std::vector<std::vector<FieldElem>> A(m, std::vector<FieldElem>(m + 1));
    for (int j = 0; j < m; ++j) {
        FieldElem bj = T.basis_elem(j);
        for (int i = 0; i < m; ++i) A[j][i] = T.frobenius(bj, i);
        FieldElem y = T.zero();
        for (int i = 0; i < m; ++i) y.c[i] = M.at(i, j);
        A[j][m] = y;
    }
    // Gaussian elimination over the field M
    int row = 0;
    std::vector<int> piv_col(m, -1);
    for (int col = 0; col < m && row < m; ++col) {
        int sel = -1;
        for (int i = row; i < m; ++i)
            if (!A[i][col].is_zero()) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(A[sel], A[row]);
        FieldElem inv = T.inv(A[row][col]);
        for (int j = col; j <= m; ++j) A[row][j] = T.mul(A[row][j], inv);
        for (int i = 0; i < m; ++i) {
            if (i == row || A[i][col].is_zero()) continue;
            FieldElem c = A[i][col];
            for (int j = col; j <= m; ++j)
                A[i][j] = T.sub(A[i][j], T.mul(c, A[row][j]));
        }
        piv_col[row] = col;
        ++row;
    }
    if (row != m) throw Error(Errc::InternalCheck, "Moore matrix singular");
    LinPoly f = linpoly_zero(T);
    for (int i = 0; i < m; ++i) f.a[size_t(piv_col[i])] = A[i][m];
    return f;
}

std::optional<int> semilinear_over(const FieldTower& T, const LinPoly& f, int s) {
    if (s <= 0 || T.m() % s != 0) throw Error(Errc::SNotDivisor, "s must divide m");
    int j = -1;
    for (int i = 0; i < T.m(); ++i) {
        if (f.a[i].is_zero()) continue;
        int res = i % s;
        if (j < 0)
            j = res;
        else if (j != res)
            return std::nullopt;
    }
    return j < 0 ? 0 : j;
}

LinPoly q_binomial_map(const FieldTower& T, const FieldElem& u) {
    LinPoly f = linpoly_zero(T);
    f.a[0] = T.frobenius(u, T.k());
    size_t kq = size_t(T.k() % T.m());
    f.a[kq] = T.add(f.a[kq], u);
    return f;
}

LinPoly r_binomial_map(const FieldTower& T, const FieldElem& v, const FieldElem& A) {
    LinPoly f = linpoly_zero(T);
    int ri = (T.k() + T.m() / 2) % T.m();
    f.a[size_t(ri)] = T.add(f.a[size_t(ri)], v);
    FieldElem vr = T.frobenius(v, T.k() + T.m() / 2);
    f.a[0] = T.add(f.a[0], T.mul(A, vr));
    return f;
}

MatFp to_matrix2(const FieldTower& T, const SemilinearPair& P) {
    int m = T.m(), n = 2 * m;
    MatFp M(n, n, T.p());
    const LinPoly* blocks[4] = {&P.f1, &P.f2, &P.f3, &P.f4};
    for (int b = 0; b < 4; ++b) {
        int r0 = (b / 2) * m, c0 = (b % 2) * m;
        MatFp B = to_matrix(T, *blocks[b]);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) M.at(r0 + i, c0 + j) = B.at(i, j);
    }
    return M;
}

MatFp frobenius_matrix(const FieldTower& T, int i) {
    int m = T.m();
    MatFp M(m, m, T.p());
    for (int j = 0; j < m; ++j) {
        FieldElem img = T.frobenius(T.basis_elem(j), i);
        for (int t = 0; t < m; ++t) M.at(t, j) = img.c[t];
    }
    return M;
}

MatFp multiplication_matrix(const FieldTower& T, const FieldElem& c) {
    int m = T.m();
    MatFp M(m, m, T.p());
    for (int j = 0; j < m; ++j) {
        FieldElem img = T.mul(c, T.basis_elem(j));
        for (int t = 0; t < m; ++t) M.at(t, j) = img.c[t];
    }
    return M;
}

MatFp monomial_matrix(const FieldTower& T, const FieldElem& c, int i) {
    int m = T.m();
    MatFp M(m, m, T.p());
    for (int j = 0; j < m; ++j) {
        FieldElem img = T.mul(c, T.frobenius(T.basis_elem(j), i));
        for (int t = 0; t < m; ++t) M.at(t, j) = img.c[t];
    }
    return M;
}

std::array<MatFp, 4> split_blocks(const FieldTower& T, const MatFp& M) {
    int m = T.m();
    if (M.rows() != 2 * m || M.cols() != 2 * m)
        throw Error(Errc::DimensionMismatch, "expected a 2m x 2m matrix");
    std::array<MatFp, 4> out{MatFp(m, m, T.p()), MatFp(m, m, T.p()), MatFp(m, m, T.p()),
                             MatFp(m, m, T.p())};
    for (int b = 0; b < 4; ++b) {
        int r0 = (b / 2) * m, c0 = (b % 2) * m;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) out[b].at(i, j) = M.at(r0 + i, c0 + j);
    }
    return out;
}

} // namespace gk
