#include "gk/gf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gk {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotPrime: return "NotPrime";
        case Errc::MNotEven: return "MNotEven";
        case Errc::QuotientNotOdd: return "QuotientNotOdd";
        case Errc::ReducibleModulus: return "ReducibleModulus";
        case Errc::ScaleTooLarge: return "ScaleTooLarge";
        case Errc::SNotDivisor: return "SNotDivisor";
        case Errc::ZeroInput: return "ZeroInput";
        case Errc::DivisionByZero: return "DivisionByZero";
        case Errc::SingularMatrix: return "SingularMatrix";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::BNotNonSquare: return "BNotNonSquare";
        case Errc::ABNotInFQ: return "ABNotInFQ";
        case Errc::TowerInvalid: return "TowerInvalid";
        case Errc::NonAdmissible: return "NonAdmissible";
        case Errc::ZeroParameter: return "ZeroParameter";
        case Errc::ConventionMismatch: return "ConventionMismatch";
        case Errc::SingularTranslation: return "SingularTranslation";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::InternalCheck: return "InternalCheck";
    }
    return "Unknown";
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

u64 pow_u64(u64 base, u64 exp) {
    u64 r = 1;
    while (exp) {
        if (exp & 1) {
            if (base != 0 && r > UINT64_MAX / base)
                throw Error(Errc::ScaleTooLarge, "integer power overflow");
            r *= base;
        }
        exp >>= 1;
        if (exp) {
            if (base != 0 && base > UINT64_MAX / base)
                throw Error(Errc::ScaleTooLarge, "integer power overflow");
            base *= base;
        }
    }
    return r;
}

namespace {

std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Dense polynomial arithmetic mod (monic f, p) used only during construction.
using Poly = std::vector<int>;  // low degree first, length m (reduced)

Poly poly_mulmod(const Poly& a, const Poly& b, const std::vector<int>& f, int p, int m) {
    std::vector<long long> acc(2 * m - 1, 0);
    for (int i = 0; i < m; ++i)
        if (a[i])
            for (int j = 0; j < m; ++j) acc[i + j] += (long long)a[i] * b[j];
    for (int i = 2 * m - 2; i >= m; --i) {
        long long c = acc[i] % p;
        if (c) {
            for (int j = 0; j < m; ++j) acc[i - m + j] -= c * f[j];
        }
    }
    Poly out(m);
    for (int j = 0; j < m; ++j) out[j] = int(((acc[j] % p) + p) % p);
    return out;
}

Poly poly_powmod(Poly a, u64 e, const std::vector<int>& f, int p, int m) {
    Poly r(m, 0);
    r[0] = 1;
    while (e) {
        if (e & 1) r = poly_mulmod(r, a, f, p, m);
        a = poly_mulmod(a, a, f, p, m);
        e >>= 1;
    }
    return r;
}

int poly_deg(const std::vector<int>& a) {
    for (int i = int(a.size()) - 1; i >= 0; --i)
        if (a[i]) return i;
    return -1;
}

std::vector<int> poly_gcd(std::vector<int> a, std::vector<int> b, int p) {
    auto inv_mod = [&](int x) {
        int r = 1, base = x % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return r;
    };
    while (true) {
        int db = poly_deg(b);
        if (db < 0) return a;
        int da = poly_deg(a);
        if (da < db) {
            std::swap(a, b);
            continue;
        }
        int bi = inv_mod(b[db]);
        while (da >= db) {
            int c = int((long long)a[da] * bi % p);
            for (int i = 0; i <= db; ++i)
                a[da - db + i] = int((((long long)a[da - db + i] - (long long)c * b[i]) % p + p) % p);
            da = poly_deg(a);
        }
        std::swap(a, b);
    }
}

bool poly_irreducible(const std::vector<int>& f, int p, int m) {
    if (f[0] == 0) return false;  // divisible by x
    Poly x(m, 0);
    if (m == 1) return true;
    x[1] = 1;
    // iterated p-th powers of x mod f
    std::vector<Poly> xp(m);
    Poly cur = x;
    for (int j = 0; j < m; ++j) {
        cur = poly_powmod(cur, u64(p), f, p, m);
        xp[j] = cur;
    }
    if (xp[m - 1] != x) return false;
    for (u64 ell : prime_factors(u64(m))) {
        int j = int(u64(m) / ell);
        std::vector<int> diff = xp[j - 1];
        diff[1] = ((diff[1] - 1) % p + p) % p;
        auto g = poly_gcd(f, diff, p);
        if (poly_deg(g) != 0) return false;
    }
    return true;
}

}  // namespace

FieldElem FieldTower::one() const {
    FieldElem r{};
    r.c[0] = 1;
    return r;
}

FieldElem FieldTower::from_coeffs(std::span<const int> coeffs) const {
    if (int(coeffs.size()) > m_)
        throw Error(Errc::InvalidArgument, "coefficient vector longer than m");
    FieldElem r{};
    for (size_t i = 0; i < coeffs.size(); ++i)
        r.c[i] = std::uint8_t(((coeffs[i] % p_) + p_) % p_);
    return r;
}

FieldElem FieldTower::basis_elem(int j) const {
    if (j < 0 || j >= m_) throw Error(Errc::InvalidArgument, "basis index out of range");
    FieldElem r{};
    r.c[j] = 1;
    return r;
}

u64 FieldTower::to_code(const FieldElem& a) const {
    u64 code = 0;
    for (int i = m_ - 1; i >= 0; --i) code = code * u64(p_) + a.c[i];
    return code;
}

FieldElem FieldTower::from_code(u64 code) const {
    FieldElem r{};
    for (int i = 0; i < m_; ++i) {
        r.c[i] = std::uint8_t(code % u64(p_));
        code /= u64(p_);
    }
    if (code) throw Error(Errc::InvalidArgument, "element code out of range");
    return r;
}

FieldElem FieldTower::add(const FieldElem& a, const FieldElem& b) const {
    FieldElem r{};
    for (int i = 0; i < m_; ++i) {
        int s = a.c[i] + b.c[i];
        r.c[i] = std::uint8_t(s >= p_ ? s - p_ : s);
    }
    return r;
}

FieldElem FieldTower::sub(const FieldElem& a, const FieldElem& b) const {
    FieldElem r{};
    for (int i = 0; i < m_; ++i) {
        int s = a.c[i] - b.c[i];
        r.c[i] = std::uint8_t(s < 0 ? s + p_ : s);
    }
    return r;
}

FieldElem FieldTower::neg(const FieldElem& a) const {
    FieldElem r{};
    for (int i = 0; i < m_; ++i) r.c[i] = std::uint8_t(a.c[i] ? p_ - a.c[i] : 0);
    return r;
}

FieldElem FieldTower::mul(const FieldElem& a, const FieldElem& b) const {
    u32 acc[2 * kMaxDegree - 1] = {};
    for (int i = 0; i < m_; ++i) {
        u32 ai = a.c[i];
        if (!ai) continue;
        for (int j = 0; j < m_; ++j) acc[i + j] += ai * b.c[j];
    }
    for (int i = 2 * m_ - 2; i >= m_; --i) {
        u32 c = acc[i] % u32(p_);
        if (c) {
            const FieldElem& red = red_[i - m_];  // reduced form of t^i
            for (int j = 0; j < m_; ++j) acc[j] += c * red.c[j];
        }
    }
    FieldElem r{};
    for (int j = 0; j < m_; ++j) r.c[j] = std::uint8_t(acc[j] % u32(p_));
    return r;
}

FieldElem FieldTower::pow(const FieldElem& a, i64 n) const {
    if (a.is_zero()) {
        if (n < 0) throw Error(Errc::DivisionByZero, "pow(0, n) with n < 0");
        return n == 0 ? one() : zero();
    }
    u64 e;
    u64 N = unit_order();
    if (n < 0) {
        u64 mag = u64(-(n + 1)) + 1;  // |n| without overflow on INT64_MIN
        e = N - 1 - ((mag - 1) % N);
        e %= N;
    } else {
        e = u64(n) % N;
    }
    FieldElem r = one(), base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

FieldElem FieldTower::inv(const FieldElem& a) const {
    if (a.is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero");
    return pow(a, i64(unit_order()) - 1);
}

FieldElem FieldTower::frobenius(const FieldElem& a, int i) const {
    int ii = ((i % m_) + m_) % m_;
    if (ii == 0) return a;
    const auto& img = frob_images_[ii];
    FieldElem r{};
    u32 acc[kMaxDegree] = {};
    for (int j = 0; j < m_; ++j) {
        u32 aj = a.c[j];
        if (!aj) continue;
        for (int t = 0; t < m_; ++t) acc[t] += aj * img[j].c[t];
    }
    for (int t = 0; t < m_; ++t) r.c[t] = std::uint8_t(acc[t] % u32(p_));
    return r;
}

FieldElem FieldTower::gen_pow(i64 n) const {
    u64 N = unit_order();
    u64 e = u64(((n % i64(N)) + i64(N)) % i64(N));
    if (!unit_pow_.empty()) return unit_pow_[e];
    return pow(gen_, i64(e));
}

bool FieldTower::in_subfield(const FieldElem& a, int s) const {
    if (s <= 0 || m_ % s != 0) throw Error(Errc::SNotDivisor, "s must divide m");
    return frobenius(a, s) == a;
}

bool FieldTower::is_kth_power(const FieldElem& a, u64 t) const {
    if (a.is_zero()) throw Error(Errc::ZeroInput, "is_kth_power(0, t)");
    if (t == 0) throw Error(Errc::InvalidArgument, "t must be >= 1");
    u64 N = unit_order();
    u64 g = std::gcd(t % N == 0 ? N : t % N, N);
    return pow(a, i64(N / g)) == one();
}

std::vector<u64> FieldTower::roots_of_power_equation_exp(u64 target_exp, u64 t) const {
    u64 N = unit_order();
    u64 tt = t % N;
    target_exp %= N;
    if (tt == 0) {
        // x^t = x^0 = 1 on units: all of M^x if target is 1, none otherwise
        std::vector<u64> all;
        if (target_exp == 0) {
            all.resize(N);
            std::iota(all.begin(), all.end(), u64(0));
        }
        return all;
    }
    u64 g = std::gcd(tt, N);
    if (target_exp % g != 0) return {};
    u64 t1 = tt / g, N1 = N / g, tg = target_exp / g;
    // inverse of t1 mod N1 by extended euclid
    i64 r0 = i64(N1), r1 = i64(t1), s0 = 0, s1 = 1;
    while (r1) {
        i64 qq = r0 / r1;
        r0 -= qq * r1;
        std::swap(r0, r1);
        s0 -= qq * s1;
        std::swap(s0, s1);
    }
    u64 inv = u64(((s0 % i64(N1)) + i64(N1)) % i64(N1));
    u64 x0 = (unsigned __int128)(tg % N1) * inv % N1;
    std::vector<u64> out(g);
    for (u64 j = 0; j < g; ++j) out[j] = (x0 + j * N1) % N;
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FieldElem> FieldTower::roots_of_power_equation(const FieldElem& c, u64 t) const {
    if (c.is_zero()) throw Error(Errc::ZeroInput, "roots_of_power_equation(0, t)");
    u64 L = dlog(c);
    auto exps = roots_of_power_equation_exp(L, t);
    std::vector<FieldElem> out;
    out.reserve(exps.size());
    for (u64 e : exps) out.push_back(gen_pow(i64(e)));
    return out;
}

u64 FieldTower::dlog(const FieldElem& a) const {
    if (a.is_zero()) throw Error(Errc::ZeroInput, "dlog(0)");
    u64 N = unit_order();
    FieldElem cur = a;
    u64 steps = (N + bsgs_s_ - 1) / bsgs_s_;
    for (u64 i = 0; i <= steps; ++i) {
        u64 code = to_code(cur);
        auto it = std::lower_bound(baby_.begin(), baby_.end(), code,
                                   [](const std::pair<u64, u32>& e, u64 v) { return e.first < v; });
        if (it != baby_.end() && it->first == code) return (i * bsgs_s_ + it->second) % N;
        cur = mul(cur, giant_step_);
    }
    throw Error(Errc::InternalCheck, "discrete log not found");
}

std::vector<FieldElem> FieldTower::subfield_elements(int s) const {
    if (s <= 0 || m_ % s != 0) throw Error(Errc::SNotDivisor, "s must divide m");
    u64 sub = pow_u64(u64(p_), u64(s)) - 1;
    u64 step = unit_order() / sub;
    std::vector<FieldElem> out;
    out.reserve(sub + 1);
    out.push_back(zero());
    for (u64 j = 0; j < sub; ++j) out.push_back(gen_pow(i64(j * step)));
    return out;
}

void FieldTower::init_tables() {
    // frobenius images (red_ already set by make)
    frob_images_.assign(m_, {});
    for (int j = 0; j < m_; ++j) frob_images_[0][j] = basis_elem(j);
    if (m_ > 1) {
        for (int j = 0; j < m_; ++j) frob_images_[1][j] = pow(basis_elem(j), i64(p_));
        for (int i = 2; i < m_; ++i)
            for (int j = 0; j < m_; ++j) {
                // apply frobenius once more to the previous image
                const FieldElem& prev = frob_images_[i - 1][j];
                u32 acc[kMaxDegree] = {};
                for (int t = 0; t < m_; ++t) {
                    u32 a = prev.c[t];
                    if (!a) continue;
                    for (int s = 0; s < m_; ++s) acc[s] += a * frob_images_[1][t].c[s];
                }
                FieldElem r{};
                for (int s = 0; s < m_; ++s) r.c[s] = std::uint8_t(acc[s] % u32(p_));
                frob_images_[i][j] = r;
            }
    }
    // unit power table, skipped above 2^20 elements to bound memory
    u64 N = unit_order();
    unit_pow_.clear();
    if (pm_ <= (u64(1) << 20)) {
        unit_pow_.reserve(N);
        unit_pow_.push_back(one());
        for (u64 j = 1; j < N; ++j) unit_pow_.push_back(mul(unit_pow_.back(), gen_));
    }
    // BSGS structures
    bsgs_s_ = u64(std::ceil(std::sqrt(double(N))));
    if (bsgs_s_ == 0) bsgs_s_ = 1;
    baby_.clear();
    baby_.reserve(bsgs_s_);
    FieldElem b = one();
    for (u64 j = 0; j < bsgs_s_; ++j) {
        baby_.emplace_back(to_code(b), u32(j));
        b = mul(b, gen_);
    }
    std::sort(baby_.begin(), baby_.end());
    giant_step_ = pow(gen_, -i64(bsgs_s_));
}

FieldTower FieldTower::make(int p, int m, int k) {
    return make(p, m, k, {});
}

FieldTower FieldTower::make(int p, int m, int k, const std::vector<int>& modulus) {
    if (p < 2 || !is_prime_u64(u64(p)) || p == 2)
        throw Error(Errc::NotPrime, "p must be an odd prime");
    if (m <= 0 || m % 2 != 0) throw Error(Errc::MNotEven, "m must be even and positive");
    if (m > kMaxDegree) throw Error(Errc::ScaleTooLarge, "m exceeds supported degree");
    if (k < 1 || k > m - 1) throw Error(Errc::InvalidArgument, "k must lie in [1, m-1]");
    int e = std::gcd(k, m);
    if ((m / e) % 2 == 0)
        throw Error(Errc::QuotientNotOdd, "m/gcd(k,m) must be odd");
    u64 pm = pow_u64(u64(p), u64(m));
    if (pm > (u64(1) << 24)) throw Error(Errc::ScaleTooLarge, "p^m above desk-scale cap 2^24");

    FieldTower T;
    T.p_ = p;
    T.m_ = m;
    T.k_ = k;
    T.e_ = e;
    T.d_ = std::gcd(k + m / 2, m);
    T.q_ = pow_u64(u64(p), u64(k));
    T.Q_ = pow_u64(u64(p), u64(m / 2));
    T.r_ = pow_u64(u64(p), u64(k + m / 2));
    T.pm_ = pm;
    if (T.e_ != 2 * T.d_)
        throw Error(Errc::TowerInvalid, "e = 2d violated");

    if (!modulus.empty()) {
        if (int(modulus.size()) != m + 1)
            throw Error(Errc::InvalidArgument, "modulus must have degree exactly m");
        std::vector<int> f(m + 1);
        for (int i = 0; i <= m; ++i) f[i] = ((modulus[i] % p) + p) % p;
        if (f[m] != 1) throw Error(Errc::InvalidArgument, "modulus must be monic");
        if (!poly_irreducible(f, p, m))
            throw Error(Errc::ReducibleModulus, "modulus is reducible over F_p");
        T.modulus_ = f;
    } else {
        // lexicographically smallest: tuple (c_0,...,c_{m-1}) with c_0 most significant
        std::vector<int> f(m + 1, 0);
        f[m] = 1;
        bool found = false;
        for (u64 key = 0; key < pm && !found; ++key) {
            u64 kk = key;
            for (int i = 0; i < m; ++i) {
                u64 w = pow_u64(u64(p), u64(m - 1 - i));
                f[i] = int(kk / w);
                kk %= w;
            }
            if (poly_irreducible(f, p, m)) found = true;
        }
        if (!found) throw Error(Errc::InternalCheck, "no irreducible polynomial found");
        T.modulus_ = f;
    }

    // reduction + frobenius tables need the modulus only
    // temporary: need red_ before mul works; set up in two phases
    {
        FieldElem cur{};
        for (int j = 0; j < m; ++j) cur.c[j] = std::uint8_t(((-T.modulus_[j]) % p + p) % p);
        T.red_[0] = cur;
        for (int j = 1; j <= m - 2; ++j) {
            FieldElem next{};
            int top = cur.c[m - 1];
            for (int i = m - 1; i >= 1; --i) next.c[i] = cur.c[i - 1];
            next.c[0] = 0;
            if (top)
                for (int i = 0; i < m; ++i)
                    next.c[i] = std::uint8_t((next.c[i] + top * T.red_[0].c[i]) % p);
            T.red_[j] = next;
            cur = next;
        }
    }

    // smallest primitive element under the same ordering
    auto factors = prime_factors(pm - 1);
    bool got = false;
    for (u64 key = 1; key < pm && !got; ++key) {
        u64 kk = key;
        FieldElem a{};
        for (int i = 0; i < m; ++i) {
            u64 w = pow_u64(u64(p), u64(m - 1 - i));
            a.c[i] = std::uint8_t(kk / w);
            kk %= w;
        }
        bool ok = true;
        for (u64 ell : factors) {
            if (T.pow(a, i64((pm - 1) / ell)) == T.one()) {
                ok = false;
                break;
            }
        }
        if (ok) {
            T.gen_ = a;
            got = true;
        }
    }
    if (!got) throw Error(Errc::InternalCheck, "no primitive element found");

    T.init_tables();

    // generator order check
    if (T.pow(T.gen_, i64(pm - 1)) != T.one())
        throw Error(Errc::TowerInvalid, "generator order check failed");
    return T;
}

std::pair<u64, u64> gcd_lemma_check(int i, int m, int p) {
    if (i < 1 || m < 1) throw Error(Errc::InvalidArgument, "i, m must be >= 1");
    u64 pi = pow_u64(u64(p), u64(i)), pm = pow_u64(u64(p), u64(m));
    u64 g1 = std::gcd(pi - 1, pm - 1);
    u64 g2 = std::gcd(pi + 1, pm - 1);
    int g = std::gcd(i, m);
    u64 pg = pow_u64(u64(p), u64(g));
    u64 expect1 = pg - 1;
    u64 expect2;
    if ((m / g) % 2 == 1)
        expect2 = (p == 2) ? 1 : 2;
    else
        expect2 = pg + 1;
    if (g1 != expect1 || g2 != expect2)
        throw Error(Errc::InternalCheck, "gcd lemma closed form mismatch");
    return {g1, g2};
}

} // namespace gk
