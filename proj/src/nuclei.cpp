#include "gk/nuclei.hpp"

#include <algorithm>

namespace gk {

namespace {

MatFp twisted_scalar_matrix(const FieldTower& T, const FieldElem& a, int twist) {
    int m = T.m(), n = 2 * m;
    MatFp Y(n, n, T.p());
    MatFp up = multiplication_matrix(T, a);
    MatFp dn = multiplication_matrix(T, T.frobenius(a, twist));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Y.at(i, j) = up.at(i, j);
            Y.at(m + i, m + j) = dn.at(i, j);
        }
    return Y;
}

u64 matrix_mult_order(const MatFp& M, u64 cap) {
    MatFp I = MatFp::identity(M.rows(), M.p());
    MatFp cur = M;
    for (u64 t = 1; t <= cap; ++t) {
        if (cur == I) return t;
        cur = cur * M;
    }
    return 0;
}

NucleusReport solve(const SpreadSet& C, Side side) {
    const FieldTower& T = C.params().tower;
    int p = T.p(), n = C.n(), nb = C.dim();
    size_t len = size_t(n) * n;

    // Constraint system over the n^2 unknown entries of Y: for every basis
    // member c_j, the product c_j Y (middle) / Y c_j (right) must reduce to
    // zero against the spread basis. Columns are indexed by unit matrices.
    MatFp sys(nb * n * n, n * n, p);
    std::vector<std::uint8_t> flat(len), residual(len);
    for (int t = 0; t < n; ++t) {
        for (int bcol = 0; bcol < n; ++bcol) {
            int col = t * n + bcol;
            for (int j = 0; j < nb; ++j) {
                const MatFp& cj = C.basis()[size_t(j)];
                std::fill(flat.begin(), flat.end(), 0);
                if (side == Side::Middle) {
                    // c_j * E_{t,bcol}: column bcol of the product is column t of c_j
                    for (int i = 0; i < n; ++i) flat[size_t(i) * n + bcol] = cj.at(i, t);
                } else {
                    // E_{t,bcol} * c_j: row t of the product is row bcol of c_j
                    for (int i = 0; i < n; ++i) flat[size_t(t) * n + i] = cj.at(bcol, i);
                }
                C.reduce_digits(flat.data(), residual.data());
                for (size_t rr = 0; rr < len; ++rr)
                    sys.at(j * int(len) + int(rr), col) = residual[rr];
            }
        }
    }

    auto null_basis = sys.kernel();
    NucleusReport rep;
    rep.side = side;
    rep.dimension = int(null_basis.size());
    if (rep.dimension > 24)
        throw Error(Errc::ScaleTooLarge, "nucleus solution space too large to enumerate");

    // enumerate the full solution space in lexicographic coefficient order
    u64 count = pow_u64(u64(p), u64(rep.dimension));
    rep.space.reserve(count);
    for (u64 code = 0; code < count; ++code) {
        MatFp Y(n, n, p);
        u64 cc = code;
        for (int b = 0; b < rep.dimension; ++b) {
            int digit = int(cc % u64(p));
            cc /= u64(p);
            if (!digit) continue;
            for (size_t j = 0; j < len; ++j) {
                int s = Y.data()[j] + digit * null_basis[size_t(b)][j];
                Y.data()[j] = std::uint8_t(s % p);
            }
        }
        rep.space.push_back(std::move(Y));
    }

    // units, field checks, generator
    std::vector<const MatFp*> units;
    for (const auto& Y : rep.space)
        if (!Y.is_zero() && Y.invertible()) units.push_back(&Y);
    rep.unit_count = units.size();
    rep.is_field = (rep.unit_count + 1 == count);
    // closure under multiplication (addition holds: it is a linear space)
    auto in_space = [&](const MatFp& M) {
        return std::find(rep.space.begin(), rep.space.end(), M) != rep.space.end();
    };
    for (size_t i = 0; i < units.size() && rep.is_field; ++i)
        for (size_t j = i; j < units.size(); ++j)
            if (!in_space(*units[i] * *units[j])) {
                rep.is_field = false;
                break;
            }
    int s = 0;
    u64 q = 1;
    while (q - 1 < rep.unit_count + 1) {
        q *= u64(p);
        ++s;
        if (q - 1 == rep.unit_count) break;
    }
    if (q - 1 == rep.unit_count) {
        rep.s = s;
        rep.field_size = q;
    }
    u64 best = 0;
    for (auto* u : units) {
        u64 ord = matrix_mult_order(*u, rep.unit_count + 1);
        if (ord > best) {
            best = ord;
            rep.generator = *u;
        }
    }

    // exact matrix-set comparison with the predicted family
    auto predicted = nucleus_predicted(C.params(), side);
    auto key = [](const MatFp& M) { return M.flatten(); };
    std::vector<std::vector<std::uint8_t>> a, b;
    for (const auto& M : rep.space) a.push_back(key(M));
    for (const auto& M : predicted) b.push_back(key(M));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    rep.matches_predicted = (a == b);
    return rep;
}

}  // namespace

std::vector<MatFp> nucleus_predicted(const GkParams& P, Side side) {
    const FieldTower& T = P.tower;
    int s = side == Side::Right ? T.d() : T.e();
    int twist = side == Side::Right ? 0 : T.d();
    std::vector<MatFp> out;
    for (const FieldElem& a : T.subfield_elements(s))
        out.push_back(twisted_scalar_matrix(T, a, twist));
    return out;
}

NucleusReport middle_nucleus(const SpreadSet& C) { return solve(C, Side::Middle); }
NucleusReport right_nucleus(const SpreadSet& C) { return solve(C, Side::Right); }

} // namespace gk
