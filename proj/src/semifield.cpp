#include "gk/semifield.hpp"

#include <algorithm>
#include <random>

#include "gk/parallel.hpp"

namespace gk {

GkParams validate_gk_params(const FieldTower& tower, const FieldElem& A, const FieldElem& B) {
    if (B.is_zero() || tower.is_kth_power(B, 2))
        throw Error(Errc::BNotNonSquare, "B must be a non-square in M^x");
    if (A.is_zero()) throw Error(Errc::ABNotInFQ, "A must be nonzero");
    FieldElem AB = tower.mul(A, B);
    if (AB.is_zero() || !tower.in_subfield(AB, tower.m() / 2))
        throw Error(Errc::ABNotInFQ, "A*B must lie in F_Q^x");
    // Implied by the two checks above; decided by direct computation.
    if (tower.is_kth_power(A, 2))
        throw Error(Errc::InternalCheck, "A turned out to be a square despite valid (A, B)");
    GkParams P;
    P.tower = tower;
    P.A = A;
    P.B = B;
    P.a_exp = tower.dlog(A);
    P.b_exp = tower.dlog(B);
    return P;
}

std::pair<FieldElem, FieldElem> gk_multiply_variant(const GkParams& P, const FieldElem& x,
                                                    const FieldElem& y, const FieldElem& u,
                                                    const FieldElem& v, SecondCoord conv) {
    const FieldTower& T = P.tower;
    int k = T.k(), half = T.m() / 2;
    auto fq = [&](const FieldElem& a) { return T.frobenius(a, k); };
    auto fr = [&](const FieldElem& a) { return T.frobenius(a, k + half); };
    // first coordinate: x^q u + x u^q + B (y^q v + y v^q)
    FieldElem first = T.add(T.mul(fq(x), u), T.mul(x, fq(u)));
    first = T.add(first, T.mul(P.B, T.add(T.mul(fq(y), v), T.mul(y, fq(v)))));
    FieldElem second;
    if (conv == SecondCoord::SpreadSet2) {
        // x^r v + A x v^r + A y^r u + y u^r
        second = T.add(T.mul(fr(x), v), T.mul(P.A, T.mul(x, fr(v))));
        second = T.add(second, T.mul(P.A, T.mul(fr(y), u)));
        second = T.add(second, T.mul(y, fr(u)));
    } else {
        // literal theorem form: x^r v + y u^r + A (y v^r + y^r u)
        second = T.add(T.mul(fr(x), v), T.mul(y, fr(u)));
        second = T.add(second, T.mul(P.A, T.add(T.mul(y, fr(v)), T.mul(fr(y), u))));
    }
    return {first, second};
}

std::pair<FieldElem, FieldElem> gk_multiply(const GkParams& P, const FieldElem& x,
                                            const FieldElem& y, const FieldElem& u,
                                            const FieldElem& v) {
    return gk_multiply_variant(P, x, y, u, v, SecondCoord::SpreadSet2);
}

ConventionReport convention_report(const GkParams& P, u64 trials, u64 seed) {
    const FieldTower& T = P.tower;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> dist(0, T.field_order() - 1);
    ConventionReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.spreadset2_commutative = true;
    rep.theorem_literal_commutative = true;
    for (u64 t = 0; t < trials; ++t) {
        FieldElem x = T.from_code(dist(rng)), y = T.from_code(dist(rng));
        FieldElem u = T.from_code(dist(rng)), v = T.from_code(dist(rng));
        if (gk_multiply_variant(P, x, y, u, v, SecondCoord::SpreadSet2) !=
            gk_multiply_variant(P, u, v, x, y, SecondCoord::SpreadSet2))
            rep.spreadset2_commutative = false;
        if (gk_multiply_variant(P, x, y, u, v, SecondCoord::TheoremLiteral) !=
            gk_multiply_variant(P, u, v, x, y, SecondCoord::TheoremLiteral))
            rep.theorem_literal_commutative = false;
    }
    return rep;
}

MatFp spread_matrix(const GkParams& P, const FieldElem& u, const FieldElem& v) {
    const FieldTower& T = P.tower;
    int m = T.m(), n = 2 * m;
    MatFp M(n, n, T.p());
    for (int j = 0; j < m; ++j) {
        FieldElem b = T.basis_elem(j);
        auto [r1, r2] = gk_multiply(P, b, T.zero(), u, v);
        for (int i = 0; i < m; ++i) {
            M.at(i, j) = r1.c[i];
            M.at(m + i, j) = r2.c[i];
        }
        auto [s1, s2] = gk_multiply(P, T.zero(), b, u, v);
        for (int i = 0; i < m; ++i) {
            M.at(i, m + j) = s1.c[i];
            M.at(m + i, m + j) = s2.c[i];
        }
    }
    return M;
}

SpreadSet::SpreadSet(const GkParams& P) : params_(P), n_(2 * P.tower.m()) {
    const FieldTower& T = params_.tower;
    int m = T.m(), p = T.p();
    basis_.reserve(2 * m);
    for (int j = 0; j < m; ++j) basis_.push_back(spread_matrix(params_, T.basis_elem(j), T.zero()));
    for (int j = 0; j < m; ++j) basis_.push_back(spread_matrix(params_, T.zero(), T.basis_elem(j)));

    size_t len = size_t(n_) * n_;
    int nb = 2 * m;
    std::vector<std::vector<std::uint8_t>> rows(nb);
    transform_.assign(nb, std::vector<std::uint8_t>(nb, 0));
    for (int i = 0; i < nb; ++i) {
        rows[i] = basis_[i].flatten();
        transform_[i][i] = 1;
    }
    auto inv_mod = [&](int a) {
        int r = 1, base = a % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return r;
    };
    int rank = 0;
    for (size_t col = 0; col < len && rank < nb; ++col) {
        int sel = -1;
        for (int i = rank; i < nb; ++i)
            if (rows[i][col]) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(rows[sel], rows[rank]);
        std::swap(transform_[sel], transform_[rank]);
        int pi = inv_mod(rows[rank][col]);
        if (pi != 1) {
            for (auto& x : rows[rank]) x = std::uint8_t(x * pi % p);
            for (auto& x : transform_[rank]) x = std::uint8_t(x * pi % p);
        }
        for (int i = 0; i < nb; ++i) {
            if (i == rank) continue;
            int c = rows[i][col];
            if (!c) continue;
            for (size_t j = 0; j < len; ++j) {
                int s = rows[i][j] - c * rows[rank][j] % p;
                rows[i][j] = std::uint8_t(s < 0 ? s + p : s);
            }
            for (int j = 0; j < nb; ++j) {
                int s = transform_[i][j] - c * transform_[rank][j] % p;
                transform_[i][j] = std::uint8_t(s < 0 ? s + p : s);
            }
        }
        pivots_.push_back(int(col));
        ++rank;
    }
    if (rank != nb)
        throw Error(Errc::DimensionMismatch, "spread set dimension below 2m");
    rref_ = std::move(rows);
}

bool SpreadSet::membership_digits(const std::uint8_t* flat, std::uint8_t* coords) const {
    const int p = params_.tower.p();
    const int nb = int(rref_.size());
    const size_t len = size_t(n_) * n_;
    std::uint8_t w[32 * 32];
    std::copy(flat, flat + len, w);
    std::uint8_t mu[32];
    for (int i = 0; i < nb; ++i) {
        int c = w[pivots_[i]];
        mu[i] = std::uint8_t(c);
        if (c) {
            const std::uint8_t* row = rref_[i].data();
            for (size_t j = 0; j < len; ++j) {
                int s = w[j] - c * row[j] % p;
                w[j] = std::uint8_t(s < 0 ? s + p : s);
            }
        }
    }
    for (size_t j = 0; j < len; ++j)
        if (w[j]) return false;
    if (coords) {
        for (int j = 0; j < nb; ++j) {
            u32 acc = 0;
            for (int i = 0; i < nb; ++i) acc += u32(mu[i]) * transform_[i][j];
            coords[j] = std::uint8_t(acc % u32(p));
        }
    }
    return true;
}

void SpreadSet::reduce_digits(const std::uint8_t* flat, std::uint8_t* residual) const {
    const int p = params_.tower.p();
    const int nb = int(rref_.size());
    const size_t len = size_t(n_) * n_;
    std::copy(flat, flat + len, residual);
    for (int i = 0; i < nb; ++i) {
        int c = residual[pivots_[i]];
        if (c) {
            const std::uint8_t* row = rref_[i].data();
            for (size_t j = 0; j < len; ++j) {
                int s = residual[j] - c * row[j] % p;
                residual[j] = std::uint8_t(s < 0 ? s + p : s);
            }
        }
    }
}

std::optional<std::pair<FieldElem, FieldElem>> SpreadSet::membership(const MatFp& M) const {
    if (M.rows() != n_ || M.cols() != n_)
        throw Error(Errc::DimensionMismatch, "membership query has wrong shape");
    std::uint8_t coords[32];
    if (!membership_digits(M.data().data(), coords)) return std::nullopt;
    const FieldTower& T = params_.tower;
    int m = T.m();
    FieldElem u{}, v{};
    for (int j = 0; j < m; ++j) {
        u.c[j] = coords[j];
        v.c[j] = coords[m + j];
    }
    return std::make_pair(u, v);
}

SpreadSet build_spread_set(const GkParams& P) { return SpreadSet(P); }

namespace {

// rank of the linear combination sum_j digits[j] * basis[j] without
// materializing a MatFp; buffers supplied by the caller.
bool comb_is_singular(const SpreadSet& C, const std::uint8_t* digits, std::uint8_t* scratch) {
    const auto& basis = C.basis();
    int n = C.n(), p = C.params().tower.p();
    size_t len = size_t(n) * n;
    u32 acc[32 * 32];
    std::fill(acc, acc + len, 0u);
    for (size_t b = 0; b < basis.size(); ++b) {
        u32 d = digits[b];
        if (!d) continue;
        const std::uint8_t* src = basis[b].data().data();
        for (size_t j = 0; j < len; ++j) acc[j] += d * src[j];
    }
    for (size_t j = 0; j < len; ++j) scratch[j] = std::uint8_t(acc[j] % u32(p));
    // in-place rank
    auto At = [&](int r, int c) -> std::uint8_t& { return scratch[size_t(r) * n + c]; };
    auto inv_mod = [&](int a) {
        int r = 1, base = a % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return r;
    };
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int sel = -1;
        for (int i = rank; i < n; ++i)
            if (At(i, col)) {
                sel = i;
                break;
            }
        if (sel < 0) return true;  // rank deficit
        if (sel != rank)
            for (int j = col; j < n; ++j) std::swap(At(sel, j), At(rank, j));
        int pi = inv_mod(At(rank, col));
        for (int i = rank + 1; i < n; ++i) {
            int c = At(i, col);
            if (!c) continue;
            int f = c * pi % p;
            for (int j = col; j < n; ++j) {
                int s = At(i, j) - f * At(rank, j) % p;
                At(i, j) = std::uint8_t(s < 0 ? s + p : s);
            }
        }
        ++rank;
    }
    return rank < n;
}

void code_to_digits(u64 code, int p, int count, std::uint8_t* digits) {
    for (int i = 0; i < count; ++i) {
        digits[i] = std::uint8_t(code % u64(p));
        code /= u64(p);
    }
}

}  // namespace

S3Report check_s3(const SpreadSet& C, const S3Policy& policy) {
    const FieldTower& T = C.params().tower;
    int p = T.p(), m = T.m();
    int nb = 2 * m;
    S3Report rep;
    rep.mode = policy.mode;
    if (policy.mode == S3Mode::Full) {
        u64 total = pow_u64(u64(p), u64(nb));
        int nchunks = chunk_count(1, total, policy.threads);
        auto bad = std::vector<std::vector<u64>>(size_t(nchunks));
        parallel_chunks(1, total, policy.threads, [&](int chunk, u64 b, u64 e) {
            std::uint8_t digits[32];
            std::uint8_t scratch[32 * 32];
            for (u64 code = b; code < e; ++code) {
                code_to_digits(code, p, nb, digits);
                if (comb_is_singular(C, digits, scratch)) bad[size_t(chunk)].push_back(code);
            }
        });
        rep.members_checked = total - 1;
        for (auto& v : bad) rep.counterexamples.insert(rep.counterexamples.end(), v.begin(), v.end());
        std::sort(rep.counterexamples.begin(), rep.counterexamples.end());
    } else {
        std::mt19937_64 rng(policy.seed);
        u64 total = pow_u64(u64(p), u64(nb));
        std::uniform_int_distribution<u64> dist(1, total - 1);
        std::vector<u64> codes;
        // all basis members
        for (int j = 0; j < nb; ++j) codes.push_back(pow_u64(u64(p), u64(j)));
        // all E^x-scalar multiples of one random member: R_{u,v} * diag(c, c-bar)
        // realized through the membership coordinates of the product
        u64 probe = dist(rng);
        {
            std::uint8_t digits[32];
            code_to_digits(probe, p, nb, digits);
            MatFp M(C.n(), C.n(), p);
            for (int b = 0; b < nb; ++b)
                if (digits[b]) M = M + C.basis()[size_t(b)].scaled(digits[b]);
            for (const FieldElem& c : T.subfield_elements(T.e())) {
                if (c.is_zero()) continue;
                FieldElem cb = T.frobenius(c, T.d());
                MatFp Y(C.n(), C.n(), p);
                MatFp up = multiplication_matrix(T, c), dn = multiplication_matrix(T, cb);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        Y.at(i, j) = up.at(i, j);
                        Y.at(m + i, m + j) = dn.at(i, j);
                    }
                auto uv = C.membership(M * Y);
                if (uv) {
                    u64 cu = T.to_code(uv->first), cv = T.to_code(uv->second);
                    u64 codeuv = cu + cv * T.field_order();
                    if (codeuv) codes.push_back(codeuv);
                }
            }
        }
        for (u64 s = 0; s < policy.samples; ++s) codes.push_back(dist(rng));
        int nchunks = chunk_count(0, codes.size(), policy.threads);
        auto bad = std::vector<std::vector<u64>>(size_t(nchunks));
        parallel_chunks(0, codes.size(), policy.threads, [&](int chunk, u64 b, u64 e) {
            std::uint8_t digits[32];
            std::uint8_t scratch[32 * 32];
            for (u64 idx = b; idx < e; ++idx) {
                code_to_digits(codes[idx], p, nb, digits);
                if (comb_is_singular(C, digits, scratch)) bad[size_t(chunk)].push_back(codes[idx]);
            }
        });
        rep.members_checked = codes.size();
        for (auto& v : bad) rep.counterexamples.insert(rep.counterexamples.end(), v.begin(), v.end());
        std::sort(rep.counterexamples.begin(), rep.counterexamples.end());
        rep.counterexamples.erase(
            std::unique(rep.counterexamples.begin(), rep.counterexamples.end()),
            rep.counterexamples.end());
    }
    return rep;
}

std::vector<std::uint8_t> pair_to_vec(const FieldTower& T, const FieldElem& x, const FieldElem& y) {
    int m = T.m();
    std::vector<std::uint8_t> v(size_t(2 * m));
    for (int i = 0; i < m; ++i) {
        v[size_t(i)] = x.c[i];
        v[size_t(m + i)] = y.c[i];
    }
    return v;
}

std::pair<FieldElem, FieldElem> vec_to_pair(const FieldTower& T, const std::vector<std::uint8_t>& v) {
    int m = T.m();
    FieldElem x{}, y{};
    for (int i = 0; i < m; ++i) {
        x.c[i] = v[size_t(i)];
        y.c[i] = v[size_t(m + i)];
    }
    return {x, y};
}

std::vector<std::uint8_t> Presemifield::mult(const std::vector<std::uint8_t>& z,
                                             const std::vector<std::uint8_t>& w) const {
    std::vector<u32> acc(size_t(n), 0);
    for (int i = 0; i < n; ++i) {
        u32 zi = z[size_t(i)];
        if (!zi) continue;
        const MatFp& S = left_mult[size_t(i)];
        for (int r = 0; r < n; ++r) {
            u32 dot = 0;
            for (int c = 0; c < n; ++c) dot += u32(S.at(r, c)) * w[size_t(c)];
            acc[size_t(r)] += zi * (dot % u32(p));
        }
    }
    auto out = std::vector<std::uint8_t>(size_t(n));
    for (int r = 0; r < n; ++r) out[size_t(r)] = std::uint8_t(acc[size_t(r)] % u32(p));
    return out;
}

Presemifield gk_presemifield(const GkParams& P) {
    const FieldTower& T = P.tower;
    Presemifield S;
    S.n = 2 * T.m();
    S.p = T.p();
    S.commutative = true;
    S.label = "gk";
    for (int j = 0; j < T.m(); ++j)
        S.left_mult.push_back(spread_matrix(P, T.basis_elem(j), T.zero()));
    for (int j = 0; j < T.m(); ++j)
        S.left_mult.push_back(spread_matrix(P, T.zero(), T.basis_elem(j)));
    return S;
}

Presemifield kaplansky(const GkParams& P, const std::pair<FieldElem, FieldElem>& e) {
    const FieldTower& T = P.tower;
    if (e.first.is_zero() && e.second.is_zero())
        throw Error(Errc::ZeroParameter, "kaplansky needs a nonzero base point");
    MatFp Re = spread_matrix(P, e.first, e.second);  // also L_e by commutativity
    MatFp Re_inv;
    try {
        Re_inv = Re.inverse();
    } catch (const Error&) {
        throw Error(Errc::SingularTranslation, "R_e singular at the chosen base point");
    }
    int n = 2 * T.m();
    Presemifield S;
    S.n = n;
    S.p = T.p();
    S.commutative = true;
    S.label = "gk-kaplansky";
    // z * w = x o y with x = Re^{-1} z, y = Le^{-1} w; left mult by z is
    // L_x Le^{-1} = spread_matrix(Re^{-1} z) * Re^{-1} using commutativity.
    for (int j = 0; j < n; ++j) {
        std::vector<std::uint8_t> unit(size_t(n), 0);
        unit[size_t(j)] = 1;
        auto x = std::vector<std::uint8_t>(size_t(n));
        for (int r2 = 0; r2 < n; ++r2) {
            u32 dot = 0;
            for (int c2 = 0; c2 < n; ++c2) dot += u32(Re_inv.at(r2, c2)) * unit[size_t(c2)];
            x[size_t(r2)] = std::uint8_t(dot % u32(T.p()));
        }
        auto [xf, xs] = vec_to_pair(T, x);
        S.left_mult.push_back(spread_matrix(P, xf, xs) * Re_inv);
    }
    return S;
}

} // namespace gk
