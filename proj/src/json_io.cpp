#include "gk/json_io.hpp"

namespace gk {

const char* form_name(Form f) { return f == Form::Diagonal ? "diagonal" : "antidiagonal"; }

Json tower_to_json(const FieldTower& T) {
    Json j;
    j["p"] = T.p();
    j["m"] = T.m();
    j["k"] = T.k();
    j["q"] = T.q();
    j["Q"] = T.Q();
    j["r"] = T.r();
    j["e"] = T.e();
    j["d"] = T.d();
    j["modulus"] = T.modulus();
    j["generator"] = elem_to_json(T, T.generator());
    return j;
}

Json elem_to_json(const FieldTower& T, const FieldElem& a) {
    std::vector<int> v(size_t(T.m()));
    for (int i = 0; i < T.m(); ++i) v[size_t(i)] = a.c[i];
    return Json(v);
}

Json linpoly_to_json(const FieldTower& T, const LinPoly& f) {
    Json arr = Json::array();
    for (const auto& a : f.a) arr.push_back(elem_to_json(T, a));
    return arr;
}

Json matfp_to_json(const MatFp& M) {
    Json j;
    j["n"] = M.rows();
    j["p"] = M.p();
    j["rows"] = M.flatten();
    return j;
}

Json params_to_json(const GkParams& P) {
    Json j = tower_to_json(P.tower);
    j["A"] = elem_to_json(P.tower, P.A);
    j["B"] = elem_to_json(P.tower, P.B);
    j["A_exp"] = P.a_exp;
    j["B_exp"] = P.b_exp;
    return j;
}

Json spread_export(const SpreadSet& C) {
    Json j;
    j["schema"] = 1;
    j["params"] = params_to_json(C.params());
    Json basis = Json::array();
    for (const auto& M : C.basis()) basis.push_back(M.flatten());
    j["basis"] = basis;
    return j;
}

Json s3_report_to_json(const S3Report& rep, const GkParams& P) {
    Json j;
    j["schema"] = 1;
    j["policy"] = rep.mode == S3Mode::Full ? "full" : "sampled";
    j["members_checked"] = rep.members_checked;
    j["singular_count"] = rep.counterexamples.size();
    Json ce = Json::array();
    const FieldTower& T = P.tower;
    for (u64 code : rep.counterexamples) {
        Json w;
        w["u"] = elem_to_json(T, T.from_code(code % T.field_order()));
        w["v"] = elem_to_json(T, T.from_code(code / T.field_order()));
        ce.push_back(w);
    }
    j["counterexamples"] = ce;
    j["mrd"] = rep.mrd();
    return j;
}

Json nucleus_report_to_json(const NucleusReport& rep, bool include_space) {
    Json j;
    j["schema"] = 1;
    j["side"] = rep.side == Side::Middle ? "middle" : "right";
    j["dimension"] = rep.dimension;
    j["unit_count"] = rep.unit_count;
    j["field_size"] = rep.field_size;
    j["s"] = rep.s;
    j["is_field"] = rep.is_field;
    j["matches_predicted"] = rep.matches_predicted;
    j["generator"] = matfp_to_json(rep.generator);
    if (include_space) {
        Json sp = Json::array();
        for (const auto& M : rep.space) sp.push_back(M.flatten());
        j["space"] = sp;
    }
    return j;
}

Json convention_report_to_json(const ConventionReport& rep) {
    Json j;
    j["spreadset2_commutative"] = rep.spreadset2_commutative;
    j["theorem_literal_commutative"] = rep.theorem_literal_commutative;
    j["authoritative"] = "spreadset2";
    j["trials"] = rep.trials;
    j["seed"] = rep.seed;
    return j;
}

Json autkey_to_json(const AutKey& k, bool with_matrices, const GkParams* P) {
    Json j;
    j["i"] = k.i;
    j["form"] = form_name(k.form);
    j["x"] = {k.x1, k.x2};
    j["y"] = {k.y1, k.y2};
    if (with_matrices && P) {
        j["X"] = matfp_to_json(key_X(*P, k));
        j["Y"] = matfp_to_json(key_Y(*P, k));
    }
    return j;
}

Json inventory_to_json(const GroupInventory& inv) {
    Json j;
    j["schema"] = 1;
    j["order"] = inv.order;
    j["case"] = inv.case_label;
    j["i0"] = inv.i0;
    j["duplicates"] = inv.duplicates;
    j["verified_count"] = inv.verified_count;
    j["failed_count"] = inv.failed_count;
    j["fully_verified"] = inv.fully_verified;
    Json fams = Json::array();
    for (const auto& f : inv.families) {
        Json fj;
        fj["i"] = f.i;
        fj["form"] = form_name(f.form);
        fj["alpha_exp"] = f.alpha_exp;
        fj["delta_exp"] = f.delta_exp;
        fj["count"] = f.count;
        fj["verified"] = f.verified;
        fj["failed"] = f.failed;
        fams.push_back(fj);
    }
    j["families"] = fams;
    return j;
}

Json structure_report_to_json(const StructureReport& rep) {
    Json j;
    j["schema"] = 1;
    j["order"] = rep.order;
    j["case"] = rep.case_label;
    j["i0"] = rep.i0;
    j["admissible_diagonal"] = rep.admissible_diag;
    j["admissible_antidiagonal"] = rep.admissible_anti;
    j["matches_theorem_shape"] = rep.matches_theorem_shape;
    j["abelian"] = rep.abelian;
    if (rep.noncommuting_witness) {
        j["noncommuting_witness"] = {autkey_to_json(rep.noncommuting_witness->first, false, nullptr),
                                     autkey_to_json(rep.noncommuting_witness->second, false, nullptr)};
    }
    j["generator_count"] = rep.generator_count;
    j["generators_generate"] = rep.generators_generate;
    j["index0_subgroup_order"] = rep.index0_subgroup_order;
    j["index0_subgroup_normal"] = rep.index0_subgroup_normal;
    j["quotient_order"] = rep.quotient_order;
    j["quotient_cyclic"] = rep.quotient_cyclic;
    j["diag0_order"] = rep.diag0_order;
    j["diag0_exponent"] = rep.diag0_exponent;
    j["diag0_matches_invariants"] = rep.diag0_matches_invariants;
    j["all_X_semilinear_over_D"] = rep.all_X_semilinear_over_D;
    j["all_Y_semilinear_over_E"] = rep.all_Y_semilinear_over_E;
    j["all_monomial"] = rep.all_monomial;
    j["derived1_order"] = rep.derived1_order;
    j["derived2_order"] = rep.derived2_order;
    j["derived_length"] = rep.derived_length;
    j["solvable"] = rep.solvable;
    return j;
}

} // namespace gk
