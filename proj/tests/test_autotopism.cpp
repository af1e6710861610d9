#include <doctest.h>

#include <algorithm>
#include <random>
#include <unordered_set>

#include "gk/autotopism.hpp"

using namespace gk;

namespace {
struct Fixture {
    GkParams P;
    SpreadSet C;
};

const Fixture& fix362() {
    static Fixture f = [] {
        FieldTower T = FieldTower::make(3, 6, 2);
        GkParams P = validate_gk_params(T, T.gen_pow(279), T.gen_pow(1));
        SpreadSet C = build_spread_set(P);
        return Fixture{P, C};
    }();
    return f;
}

Autotopism random_family_element(const GkParams& P, const Admissible& ad,
                                 std::mt19937_64& rng) {
    const FieldTower& T = P.tower;
    auto fiber = delta_factorizations(P, ad.delta_exp, ad.form);
    auto [ge, ee] = fiber[rng() % fiber.size()];
    u64 free = rng() % T.unit_order();
    FieldElem alpha = T.gen_pow(i64(ad.alpha_exp));
    FieldElem fe = T.gen_pow(i64(free));
    FieldElem ga = T.gen_pow(i64(ge));
    FieldElem ep = T.gen_pow(i64(ee));
    return ad.form == Form::Diagonal ? construct_diagonal(P, ad.i, alpha, fe, ga, ep)
                                     : construct_antidiagonal(P, ad.i, alpha, fe, ga, ep);
}
}  // namespace

TEST_CASE("admissible indices at the shipped parameter sets") {
    const auto& [P, C] = fix362();
    auto diag = admissible_indices(P, Form::Diagonal);
    auto anti = admissible_indices(P, Form::Antidiagonal);
    std::vector<int> di, ai;
    for (const auto& a : diag) di.push_back(a.i);
    for (const auto& a : anti) ai.push_back(a.i);
    CHECK(di == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(ai == std::vector<int>{0, 1, 2, 3, 4, 5});
    // i = 0 diagonal admits the trivial witness
    CHECK(diag[0].alpha_exp == 0);
    CHECK(diag[0].delta_exp == 0);
    // every delta has exactly p^e - 1 factorizations
    for (const auto& a : diag)
        CHECK(delta_factorizations(P, a.delta_exp, a.form).size() == 8);
    for (const auto& a : anti)
        CHECK(delta_factorizations(P, a.delta_exp, a.form).size() == 8);

    // At p = 5 the i = m/2 = 3 diagonal family exists alongside i = 0: the
    // A*B in F_Q constraint couples the two admissibility conditions there.
    FieldTower T5 = FieldTower::make(5, 6, 2);
    GkParams P5 = validate_gk_params(T5, T5.gen_pow(-1), T5.gen_pow(1));
    auto diag5 = admissible_indices(P5, Form::Diagonal);
    auto anti5 = admissible_indices(P5, Form::Antidiagonal);
    REQUIRE(diag5.size() == 2);
    CHECK(diag5[0].i == 0);
    CHECK(diag5[1].i == 3);
    CHECK(anti5.empty());
    CHECK(delta_factorizations(P5, diag5[0].delta_exp, Form::Diagonal).size() == 24);
    CHECK(delta_factorizations(P5, diag5[1].delta_exp, Form::Diagonal).size() == 24);
}

TEST_CASE("identity autotopism from the trivial parameters") {
    const auto& [P, C] = fix362();
    const FieldTower& T = P.tower;
    Autotopism id = construct_diagonal(P, 0, T.one(), T.one(), T.one(), T.one());
    CHECK(id.key == identity_key());
    CHECK(id.X == MatFp::identity(12, 3));
    CHECK(id.Y == MatFp::identity(12, 3));
    auto vr = verify_autotopism(C, id.X, id.Y);
    CHECK(vr.ok);
    CHECK(vr.witness == MatFp::identity(12, 3));
}

TEST_CASE("constructed elements verify at every admissible family") {
    const auto& [P, C] = fix362();
    std::mt19937_64 rng(41);
    for (Form form : {Form::Diagonal, Form::Antidiagonal}) {
        for (const auto& ad : admissible_indices(P, form)) {
            for (int t = 0; t < 40; ++t) {
                Autotopism a = random_family_element(P, ad, rng);
                auto vr = verify_autotopism(C, a.X, a.Y);
                CHECK(vr.ok);
                CHECK(vr.witness.invertible());
            }
        }
    }
}

TEST_CASE("constructor rejections") {
    const auto& [P, C] = fix362();
    const FieldTower& T = P.tower;
    // zero parameters
    CHECK_THROWS_AS(construct_diagonal(P, 0, T.zero(), T.one(), T.one(), T.one()), Error);
    // gamma outside E
    try {
        construct_diagonal(P, 0, T.one(), T.one(), T.generator(), T.one());
        FAIL("expected NonAdmissible");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonAdmissible);
    }
    // alpha not a root of the A-side equation
    try {
        construct_diagonal(P, 1, T.one(), T.one(), T.one(), T.one());
        FAIL("expected NonAdmissible");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonAdmissible);
    }
    // (gamma, eps) outside the delta fiber
    auto diag = admissible_indices(P, Form::Diagonal);
    const auto& ad = diag[1];
    auto fiber = delta_factorizations(P, ad.delta_exp, Form::Diagonal);
    u64 stepE = T.unit_order() / 8;
    u64 bad_ge = 0;
    bool found = false;
    for (u64 a = 0; a < 8 && !found; ++a) {
        bool in = false;
        for (auto [ge, ee] : fiber)
            if (ge == a * stepE && ee == 0) in = true;
        if (!in) {
            bad_ge = a * stepE;
            found = true;
        }
    }
    REQUIRE(found);
    try {
        construct_diagonal(P, ad.i, T.gen_pow(i64(ad.alpha_exp)), T.one(),
                           T.gen_pow(i64(bad_ge)), T.one());
        FAIL("expected NonAdmissible");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonAdmissible);
    }
}

TEST_CASE("perturbed pairs fail verification") {
    const auto& [P, C] = fix362();
    const FieldTower& T = P.tower;
    std::mt19937_64 rng(43);
    auto diag = admissible_indices(P, Form::Diagonal);
    for (int t = 0; t < 20; ++t) {
        Autotopism a = random_family_element(P, diag[rng() % diag.size()], rng);
        AutKey bad = a.key;
        switch (rng() % 4) {
            case 0: bad.x1 = (bad.x1 + 1) % T.unit_order(); break;
            case 1: bad.x2 = (bad.x2 + 1) % T.unit_order(); break;
            case 2: bad.y1 = (bad.y1 + 1) % T.unit_order(); break;
            default: bad.y2 = (bad.y2 + 1) % T.unit_order(); break;
        }
        CHECK_FALSE(verify_autotopism(C, key_X(P, bad), key_Y(P, bad)).ok);
    }
    // random non-nucleus right perturbation of the identity pair
    MatFp I = MatFp::identity(12, 3);
    MatFp Y = I;
    Y.at(0, 7) = 1;
    CHECK_FALSE(verify_autotopism(C, I, Y).ok);
}

TEST_CASE("composition, inverses, and metadata") {
    const auto& [P, C] = fix362();
    const FieldTower& T = P.tower;
    std::mt19937_64 rng(47);
    auto diag = admissible_indices(P, Form::Diagonal);
    auto anti = admissible_indices(P, Form::Antidiagonal);
    for (int t = 0; t < 25; ++t) {
        const Admissible& ad1 = (t % 2 == 0) ? diag[rng() % diag.size()] : anti[rng() % anti.size()];
        const Admissible& ad2 = (t % 3 == 0) ? anti[rng() % anti.size()] : diag[rng() % diag.size()];
        Autotopism a = random_family_element(P, ad1, rng);
        Autotopism b = random_family_element(P, ad2, rng);
        Autotopism ab = compose_autotopisms(P, C, a, b);
        CHECK(ab.verified);
        CHECK(ab.key.i == (a.key.i + b.key.i) % T.m());
        CHECK(int(ab.key.form) == (int(a.key.form) ^ int(b.key.form)));
        Autotopism ai = invert_autotopism(P, C, a);
        Autotopism prod = compose_autotopisms(P, C, a, ai);
        CHECK(prod.key == identity_key());
        // key recovery from the matrices agrees
        auto k = key_from_matrices(P, ab.X, ab.Y);
        REQUIRE(k.has_value());
        CHECK(*k == ab.key);
    }
}

TEST_CASE("full enumeration at p = 3 matches the expected structure") {
    const auto& [P, C] = fix362();
    VerifyPolicy pol;
    pol.mode = VerifyMode::Full;
    pol.threads = 2;
    GroupInventory inv = enumerate_group(P, C, pol);
    CHECK(inv.order == 69888);
    CHECK(inv.duplicates == 0);
    CHECK(inv.case_label == 2);
    CHECK(inv.i0 == 1);
    CHECK(inv.fully_verified);
    CHECK(inv.failed_count == 0);
    CHECK(inv.families.size() == 12);
    for (const auto& f : inv.families) CHECK(f.count == 5824);

    StructureReport rep = structure_report(P, inv, 2, 1234);
    CHECK(rep.order == 69888);
    CHECK_FALSE(rep.abelian);
    CHECK(rep.noncommuting_witness.has_value());
    CHECK(rep.matches_theorem_shape);
    CHECK(rep.generators_generate);
    CHECK(rep.index0_subgroup_order == 11648);
    CHECK(rep.index0_subgroup_normal);
    CHECK(rep.quotient_order == 6);
    CHECK(rep.quotient_cyclic);
    CHECK(rep.diag0_order == 5824);
    CHECK(rep.diag0_exponent == 728);
    // the i=0 diagonal part is Z_2 x Z_4 x Z_728 (eight square roots of the
    // identity), not Z_{p^m-1} x Z_{p^e-1}
    CHECK_FALSE(rep.diag0_matches_invariants);
    CHECK(rep.all_X_semilinear_over_D);
    CHECK(rep.all_Y_semilinear_over_E);
    CHECK(rep.all_monomial);
    CHECK(rep.solvable);
    CHECK(rep.derived_length == 2);

    // group axioms: closure on 10^5 random pairs, inverses exhaustively
    std::mt19937_64 rng(53);
    std::unordered_set<AutKey, AutKeyHash> all(inv.elements.begin(), inv.elements.end());
    u64 closure_misses = 0;
    for (int t = 0; t < 100000; ++t) {
        const AutKey& a = inv.elements[rng() % inv.elements.size()];
        const AutKey& b = inv.elements[rng() % inv.elements.size()];
        if (!all.count(compose_keys(P.tower, a, b))) ++closure_misses;
    }
    CHECK(closure_misses == 0);
    u64 inverse_misses = 0;
    for (const AutKey& k : inv.elements)
        if (!all.count(invert_key(P.tower, k))) ++inverse_misses;
    CHECK(inverse_misses == 0);
    CHECK(all.count(identity_key()));

    // nucleus pairs embed into the inventory
    NucleusReport right = right_nucleus(C);
    NucleusReport mid = middle_nucleus(C);
    for (const auto& X : right.space) {
        if (X.is_zero()) continue;
        for (const auto& Y : mid.space) {
            if (Y.is_zero()) continue;
            auto k = key_from_matrices(P, X, Y);
            REQUIRE(k.has_value());
            CHECK(all.count(*k));
            CHECK(verify_autotopism(C, X, Y).ok);
        }
    }
}

TEST_CASE("sampled enumeration at p = 5: the extra i = m/2 family is real") {
    // The theorem's case-1 shape (only i = 0, abelian, Z_{p^m-1} x Z_{p^e-1})
    // does not hold here: a verified diagonal family at i = 3 doubles the
    // group, and even the i = 0 part has invariants Z_2 x Z_12 x Z_15624.
    FieldTower T = FieldTower::make(5, 6, 2);
    GkParams P = validate_gk_params(T, T.gen_pow(-1), T.gen_pow(1));
    SpreadSet C = build_spread_set(P);
    VerifyPolicy pol;
    pol.mode = VerifyMode::Sampled;
    pol.samples_per_family = 500;
    pol.seed = 2024;
    pol.threads = 2;
    GroupInventory inv = enumerate_group(P, C, pol);
    CHECK(inv.order == 749952);
    CHECK(inv.case_label == 1);
    CHECK(inv.i0 == 3);
    CHECK(inv.duplicates == 0);
    REQUIRE(inv.families.size() == 2);
    CHECK(inv.families[0].i == 0);
    CHECK(inv.families[1].i == 3);
    CHECK(inv.families[0].count == 374976);
    CHECK(inv.families[1].count == 374976);
    CHECK(inv.failed_count == 0);
    CHECK(inv.verified_count > 500);

    StructureReport rep = structure_report(P, inv, 2, 99);
    CHECK_FALSE(rep.abelian);
    CHECK_FALSE(rep.matches_theorem_shape);
    CHECK(rep.generators_generate);
    CHECK(rep.index0_subgroup_order == 374976);
    CHECK(rep.index0_subgroup_normal);
    CHECK(rep.quotient_order == 2);
    CHECK(rep.quotient_cyclic);
    CHECK(rep.diag0_order == 374976);
    CHECK(rep.diag0_exponent == 15624);
    CHECK_FALSE(rep.diag0_matches_invariants);
    CHECK(rep.all_monomial);
    CHECK(rep.all_X_semilinear_over_D);
    CHECK(rep.all_Y_semilinear_over_E);
    CHECK(rep.solvable);
    CHECK(rep.derived_length == 2);
}

TEST_CASE("oracle reproduces the constructed family at (0, diagonal)") {
    const auto& [P, C] = fix362();
    auto oracle = ansatz_exhaustive_oracle(P, C, 0, Form::Diagonal, 2);
    CHECK(oracle.size() == 5824);
    // compare against the constructed family
    auto diag = admissible_indices(P, Form::Diagonal);
    std::vector<AutKey> constructed;
    for (auto [ge, ee] : delta_factorizations(P, diag[0].delta_exp, Form::Diagonal))
        for (u64 free = 0; free < P.tower.unit_order(); ++free) {
            Autotopism a = construct_diagonal(P, 0, P.tower.gen_pow(i64(diag[0].alpha_exp)),
                                              P.tower.gen_pow(i64(free)),
                                              P.tower.gen_pow(i64(ge)), P.tower.gen_pow(i64(ee)));
            constructed.push_back(a.key);
        }
    std::sort(constructed.begin(), constructed.end());
    CHECK(oracle == constructed);
}

TEST_CASE("oracle scale guard") {
    FieldTower T = FieldTower::make(5, 6, 2);
    GkParams P = validate_gk_params(T, T.gen_pow(-1), T.gen_pow(1));
    SpreadSet C = build_spread_set(P);
    CHECK_THROWS_AS(ansatz_exhaustive_oracle(P, C, 0, Form::Diagonal, 1), Error);
}
