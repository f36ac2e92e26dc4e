#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "holo/foliation.hpp"
#include "holo/holmap.hpp"
#include "holo/quaddiff.hpp"
#include "holo/repvar.hpp"

namespace holo::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);
json point_to_json(const ProjPoint& p);  // [re, im] or "inf"
ProjPoint point_from_json(const json& j);
json complex_list(const std::vector<cplx>& zs);
std::vector<cplx> complex_list_from_json(const json& j);

json qd_to_json(const quaddiff::ParabolicQD& qd);
quaddiff::ParabolicQD qd_from_json(const json& j);

json character_to_json(const repvar::Character& ch);
repvar::Character character_from_json(const json& j);

json evaluation_to_json(const holmap::CharacterEvaluation& ev);
json jacobian_to_json(const holmap::JacobianReport& r);
json fiber_to_json(const holmap::FiberReport& r);
json probe_to_json(const holmap::ProbeReport& r);
json conjugacy_to_json(const foliation::ConjugacyReport& r);

std::string_view relation_name(repvar::RelationResult::Kind kind);

// Shortest decimal that round-trips the double.
std::string format_double(double x);

// RFC 4180: fields with separators, quotes or line breaks are quoted, quotes
// doubled, records end with CRLF.
std::string csv_field(std::string_view field);
std::string csv_record(const std::vector<std::string>& fields);

}  // namespace holo::io
