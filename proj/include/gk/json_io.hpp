#ifndef GK_JSON_IO_HPP
#define GK_JSON_IO_HPP

#include <json.hpp>

#include "gk/autotopism.hpp"

namespace gk {

using Json = nlohmann::ordered_json;

Json tower_to_json(const FieldTower& T);
Json elem_to_json(const FieldTower& T, const FieldElem& a);
Json linpoly_to_json(const FieldTower& T, const LinPoly& f);
Json matfp_to_json(const MatFp& M);

Json params_to_json(const GkParams& P);
Json spread_export(const SpreadSet& C);
Json s3_report_to_json(const S3Report& rep, const GkParams& P);
Json nucleus_report_to_json(const NucleusReport& rep, bool include_space);
Json convention_report_to_json(const ConventionReport& rep);
Json autkey_to_json(const AutKey& k, bool with_matrices, const GkParams* P);
Json inventory_to_json(const GroupInventory& inv);
Json structure_report_to_json(const StructureReport& rep);

const char* form_name(Form f);

} // namespace gk

#endif
