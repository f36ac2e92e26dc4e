#include "holo/io.hpp"

#include <charconv>
#include <cmath>

#include "holo/error.hpp"

namespace holo::io {

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::ConfigError, "complex numbers are written [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json point_to_json(const ProjPoint& p) { return p.infinite ? json("inf") : complex_to_json(p.z); }

ProjPoint point_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return ProjPoint::infinity();
    throw Error(ErrorKind::ConfigError, "the only string accepted for a point is \"inf\"");
  }
  return ProjPoint::finite(complex_from_json(j));
}

json complex_list(const std::vector<cplx>& zs) {
  json out = json::array();
  for (const auto& z : zs) out.push_back(complex_to_json(z));
  return out;
}

std::vector<cplx> complex_list_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ConfigError, "expected a list of [re, im] pairs");
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

json qd_to_json(const quaddiff::ParabolicQD& qd) {
  json pts = json::array();
  for (const auto& p : qd.config.punctures) pts.push_back(point_to_json(p));
  return {{"punctures", pts},
          {"residues", complex_list(qd.residues)},
          {"basepoint", complex_to_json(qd.config.basepoint)}};
}

quaddiff::ParabolicQD qd_from_json(const json& j) {
  if (!j.is_object() || !j.contains("punctures") || !j.contains("residues")) {
    throw Error(ErrorKind::ConfigError, "quadratic differential needs \"punctures\" and \"residues\"");
  }
  std::vector<ProjPoint> pts;
  for (const auto& e : j.at("punctures")) pts.push_back(point_from_json(e));
  std::optional<cplx> base;
  if (j.contains("basepoint")) base = complex_from_json(j.at("basepoint"));
  quaddiff::ParabolicQD qd;
  qd.config = surface::make_config(std::move(pts), base);
  qd.residues = complex_list_from_json(j.at("residues"));
  if (qd.residues.size() != qd.config.finite_points().size()) {
    throw Error(ErrorKind::DimensionMismatch, "one residue per finite puncture expected");
  }
  return qd;
}

json character_to_json(const repvar::Character& ch) {
  return {{"schema_version", kSchemaVersion},
          {"n", ch.peripheral_traces.size()},
          {"coordinates", complex_list(ch.coordinates())}};
}

repvar::Character character_from_json(const json& j) {
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw Error(ErrorKind::ConfigError, "unsupported character schema version");
  }
  const auto n = j.at("n").get<std::size_t>();
  const auto coords = complex_list_from_json(j.at("coordinates"));
  const std::size_t pairs = n * (n - 1) / 2;
  if (coords.size() != pairs + n) throw Error(ErrorKind::DimensionMismatch, "character length does not match n");
  repvar::Character ch;
  ch.pair_traces.assign(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(pairs));
  ch.peripheral_traces.assign(coords.begin() + static_cast<std::ptrdiff_t>(pairs), coords.end());
  return ch;
}

std::string_view relation_name(repvar::RelationResult::Kind kind) {
  switch (kind) {
    case repvar::RelationResult::Kind::Id: return "Id";
    case repvar::RelationResult::Kind::MinusId: return "MinusId";
    case repvar::RelationResult::Kind::Fail: return "Fail";
  }
  return "Fail";
}

json evaluation_to_json(const holmap::CharacterEvaluation& ev) {
  std::vector<cplx> normalized;
  json defects = json::array();
  for (const auto& m : ev.monodromies) normalized.push_back(m.matrix.trace());
  for (const auto& t : ev.raw_traces) defects.push_back(std::abs(t * t - 4.0));
  return {{"theta", complex_list(ev.theta.theta)},
          {"basepoint", complex_to_json(ev.basepoint)},
          {"loop_order", ev.loop_order},
          {"raw_traces", complex_list(ev.raw_traces)},
          {"peripheral_traces", complex_list(normalized)},
          {"trace_squared_defects", defects},
          {"max_parabolic_defect", ev.max_parabolic_defect},
          {"max_det_drift", ev.max_det_drift},
          {"relation",
           {{"kind", relation_name(ev.relation.kind)},
            {"defect", ev.relation.defect},
            {"relative_defect", ev.relation.relative_defect},
            {"amplification", ev.relation.amplification}}},
          {"nonelementary", ev.nonelementary},
          {"commutator_gap", ev.commutator_gap},
          {"character", character_to_json(ev.character)}};
}

json jacobian_to_json(const holmap::JacobianReport& r) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < r.jacobian.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < r.jacobian.cols(); ++k) row.push_back(complex_to_json(r.jacobian(i, k)));
    rows.push_back(row);
  }
  return {{"theta", complex_list(r.theta)},
          {"singular_values", r.singular_values},
          {"rank", r.rank},
          {"condition_ratio", r.condition_ratio},
          {"rank_threshold", r.threshold},
          {"fd_step", r.fd_step},
          {"cr_defect", r.cr_defect},
          {"jacobian", rows}};
}

json fiber_to_json(const holmap::FiberReport& r) {
  return {{"fiber_dimension", r.fiber_dimension},
          {"accessory_rank", r.accessory_rank},
          {"accessory_singular_values", r.accessory_singular_values},
          {"moduli_rank", r.moduli_rank},
          {"moduli_singular_values", r.moduli_singular_values}};
}

json probe_to_json(const holmap::ProbeReport& r) {
  return {{"seed", r.seed},
          {"radius", r.radius},
          {"sigma_min", r.sigma_min},
          {"requested", r.requested},
          {"evaluated", r.evaluated},
          {"skipped", r.skipped},
          {"resampled", r.resampled},
          {"violations", r.violations},
          {"min_ratio", r.min_ratio}};
}

json conjugacy_to_json(const foliation::ConjugacyReport& r) {
  return {{"samples", r.samples},
          {"points_checked", r.points_checked},
          {"max_residual", r.max_residual},
          {"max_diagonal_v", r.max_diagonal_v},
          {"tol", r.tol},
          {"passed", r.passed}};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_record(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) line += ',';
    line += csv_field(fields[k]);
  }
  line += "\r\n";
  return line;
}

}  // namespace holo::io
