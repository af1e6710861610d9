#include <doctest.h>

#include <random>

#include "gk/linmap.hpp"

using namespace gk;

namespace {
const FieldTower& tower362() {
    static FieldTower T = FieldTower::make(3, 6, 2);
    return T;
}

FieldElem relem(const FieldTower& T, std::mt19937_64& rng) {
    std::uniform_int_distribution<u64> dist(0, T.field_order() - 1);
    return T.from_code(dist(rng));
}

LinPoly rpoly(const FieldTower& T, std::mt19937_64& rng) {
    LinPoly f = linpoly_zero(T);
    for (int i = 0; i < T.m(); ++i) f.a[i] = relem(T, rng);
    return f;
}
}  // namespace

TEST_CASE("eval of the identity and additivity in coefficients") {
    const FieldTower& T = tower362();
    std::mt19937_64 rng(5);
    LinPoly id = linpoly_identity(T);
    for (int t = 0; t < 50; ++t) {
        FieldElem a = relem(T, rng);
        CHECK(eval(T, id, a) == a);
        LinPoly f = rpoly(T, rng), g = rpoly(T, rng);
        CHECK(eval(T, add(T, f, g), a) == T.add(eval(T, f, a), eval(T, g, a)));
    }
}

TEST_CASE("composition is evaluation composition and frobenius indices add") {
    const FieldTower& T = tower362();
    std::mt19937_64 rng(6);
    for (int t = 0; t < 30; ++t) {
        LinPoly f = rpoly(T, rng), g = rpoly(T, rng);
        LinPoly h = compose(T, f, g);
        for (int s = 0; s < 10; ++s) {
            FieldElem a = relem(T, rng);
            CHECK(eval(T, h, a) == eval(T, f, eval(T, g, a)));
        }
        CHECK(compose(T, linpoly_identity(T), f) == f);
    }
    // x^{p^i} o x^{p^j} = x^{p^{(i+j) mod m}}
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            LinPoly a = linpoly_monomial(T, T.one(), i);
            LinPoly b = linpoly_monomial(T, T.one(), j);
            CHECK(compose(T, a, b) == linpoly_monomial(T, T.one(), (i + j) % 6));
        }
}

TEST_CASE("composition associativity and matrix functoriality") {
    const FieldTower& T = tower362();
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        LinPoly f = rpoly(T, rng), g = rpoly(T, rng), h = rpoly(T, rng);
        CHECK(compose(T, compose(T, f, g), h) == compose(T, f, compose(T, g, h)));
        CHECK(to_matrix(T, compose(T, f, g)) == to_matrix(T, f) * to_matrix(T, g));
    }
}

TEST_CASE("to_matrix basics") {
    const FieldTower& T = tower362();
    CHECK(to_matrix(T, linpoly_zero(T)).is_zero());
    // c * x for c in F_p gives c * identity
    for (int c = 0; c < 3; ++c) {
        LinPoly f = linpoly_monomial(T, T.from_coeffs(std::vector<int>{c}), 0);
        CHECK(to_matrix(T, f) == MatFp::identity(6, 3).scaled(c));
    }
}

TEST_CASE("from_matrix round trips") {
    const FieldTower& T = tower362();
    std::mt19937_64 rng(9);
    CHECK(from_matrix(T, MatFp::identity(6, 3)) == linpoly_identity(T));
    CHECK(from_matrix(T, frobenius_matrix(T, 1)) == linpoly_monomial(T, T.one(), 1));
    for (int t = 0; t < 100; ++t) {
        LinPoly f = rpoly(T, rng);
        CHECK(from_matrix(T, to_matrix(T, f)) == f);
    }
    for (int t = 0; t < 20; ++t) {
        // random matrix round trip the other way
        MatFp M(6, 6, 3);
        for (auto& x : M.data()) x = std::uint8_t(rng() % 3);
        CHECK(to_matrix(T, from_matrix(T, M)) == M);
    }
}

TEST_CASE("rank, kernel, inverse") {
    const FieldTower& T = tower362();
    (void)T;
    std::mt19937_64 rng(10);
    CHECK(MatFp::identity(12, 3).rank() == 12);
    MatFp Z(5, 5, 3);
    CHECK(Z.kernel().size() == 5);
    int invertible_seen = 0;
    for (int t = 0; t < 40; ++t) {
        MatFp M(6, 6, 3);
        for (auto& x : M.data()) x = std::uint8_t(rng() % 3);
        int r = M.rank();
        CHECK(r + int(M.kernel().size()) == 6);
        if (r == 6) {
            ++invertible_seen;
            CHECK(M.inverse() * M == MatFp::identity(6, 3));
        } else {
            CHECK_THROWS_AS(M.inverse(), Error);
            for (const auto& v : M.kernel()) {
                std::vector<int> img(6, 0);
                for (int i = 0; i < 6; ++i)
                    for (int j = 0; j < 6; ++j) img[i] += M.at(i, j) * v[size_t(j)];
                for (int i = 0; i < 6; ++i) CHECK(img[i] % 3 == 0);
            }
        }
    }
    CHECK(invertible_seen > 0);
}

TEST_CASE("compose against a matrix-inverse oracle") {
    const FieldTower& T = tower362();
    std::mt19937_64 rng(12);
    int done = 0;
    while (done < 10) {
        LinPoly f = rpoly(T, rng);
        MatFp M = to_matrix(T, f);
        if (M.rank() != 6) continue;
        LinPoly finv = from_matrix(T, M.inverse());
        CHECK(compose(T, f, finv) == linpoly_identity(T));
        CHECK(compose(T, finv, f) == linpoly_identity(T));
        ++done;
    }
}

TEST_CASE("semilinearity detection") {
    const FieldTower& T = tower362();
    // a * x^{p^3} over E: residue 3 mod 2 = 1
    LinPoly f = linpoly_monomial(T, T.generator(), 3);
    CHECK(semilinear_over(T, f, 2) == 1);
    // x + x^p mixes residues mod 2
    LinPoly g = add(T, linpoly_identity(T), linpoly_monomial(T, T.one(), 1));
    CHECK_FALSE(semilinear_over(T, g, 2).has_value());
    // every map is semilinear over the prime field
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t) CHECK(semilinear_over(T, rpoly(T, rng), 1) == 0);
    CHECK_THROWS_AS(semilinear_over(T, f, 4), Error);
}

TEST_CASE("semilinear scalar commutation") {
    const FieldTower& T = tower362();
    std::mt19937_64 rng(14);
    // f semilinear over E with residue j: f(lambda x) = lambda^{p^j} f(x)
    for (int rep = 0; rep < 10; ++rep) {
        int j = int(rng() % 2);
        LinPoly f = linpoly_zero(T);
        for (int i = j; i < 6; i += 2) f.a[i] = relem(T, rng);
        auto res = semilinear_over(T, f, 2);
        REQUIRE(res.has_value());
        for (const FieldElem& lam : T.subfield_elements(2)) {
            FieldElem x = relem(T, rng);
            CHECK(eval(T, f, T.mul(lam, x)) ==
                  T.mul(T.frobenius(lam, *res), eval(T, f, x)));
        }
    }
}

TEST_CASE("binomial maps are bijective: full sweeps") {
    const FieldTower& T = tower362();
    CHECK(q_binomial_map(T, T.zero()).is_zero());
    // the non-square used by the shipped parameter set
    FieldElem A = T.gen_pow(279);
    for (u64 j = 0; j < T.unit_order(); ++j) {
        FieldElem u = T.gen_pow(i64(j));
        CHECK(to_matrix(T, q_binomial_map(T, u)).rank() == 6);
        CHECK(to_matrix(T, r_binomial_map(T, u, A)).rank() == 6);
    }
}

TEST_CASE("two-path evaluation of the q-binomial map") {
    const FieldTower& T = tower362();
    std::mt19937_64 rng(15);
    for (int t = 0; t < 100; ++t) {
        FieldElem u = relem(T, rng), x = relem(T, rng);
        FieldElem direct = T.add(T.mul(x, T.frobenius(u, T.k())),
                                 T.mul(T.frobenius(x, T.k()), u));
        CHECK(eval(T, q_binomial_map(T, u), x) == direct);
    }
}

TEST_CASE("block matrix of a semilinear pair") {
    const FieldTower& T = tower362();
    std::mt19937_64 rng(16);
    SemilinearPair P{rpoly(T, rng), rpoly(T, rng), rpoly(T, rng), rpoly(T, rng), {}};
    MatFp M = to_matrix2(T, P);
    CHECK(M.rows() == 12);
    auto blocks = split_blocks(T, M);
    CHECK(blocks[0] == to_matrix(T, P.f1));
    CHECK(blocks[1] == to_matrix(T, P.f2));
    CHECK(blocks[2] == to_matrix(T, P.f3));
    CHECK(blocks[3] == to_matrix(T, P.f4));
    // action agrees with componentwise evaluation on a random pair
    FieldElem x = relem(T, rng), y = relem(T, rng);
    std::vector<std::uint8_t> v(12);
    for (int i = 0; i < 6; ++i) {
        v[size_t(i)] = x.c[i];
        v[size_t(6 + i)] = y.c[i];
    }
    std::vector<int> img(12, 0);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) img[i] += M.at(i, j) * v[size_t(j)];
    FieldElem top = T.add(eval(T, P.f1, x), eval(T, P.f2, y));
    FieldElem bot = T.add(eval(T, P.f3, x), eval(T, P.f4, y));
    for (int i = 0; i < 6; ++i) {
        CHECK(img[i] % 3 == top.c[i]);
        CHECK(img[6 + i] % 3 == bot.c[i]);
    }
}

TEST_CASE("monomial matrices multiply as expected") {
    const FieldTower& T = tower362();
    std::mt19937_64 rng(18);
    for (int t = 0; t < 20; ++t) {
        FieldElem c = relem(T, rng);
        int i = int(rng() % 6);
        CHECK(monomial_matrix(T, c, i) ==
              multiplication_matrix(T, c) * frobenius_matrix(T, i));
    }
}
