#include "holo/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "holo/foliation.hpp"
#include "holo/io.hpp"

namespace holo::cli {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) config_error("unknown key \"" + key + "\" in " + where);
  }
}

double positive(const json& j, const std::string& key) {
  if (!j.is_number()) config_error(key + " must be a number");
  const double x = j.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) config_error(key + " must be positive and finite");
  return x;
}

std::size_t count_of(const json& j, const std::string& key) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<long long>() < 0)) {
    config_error(key + " must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

long integer_of(const json& j, const std::string& key) {
  if (!j.is_number_integer()) config_error(key + " must be an integer");
  return j.get<long>();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  config_error("format must be \"json\" or \"csv\"");
}

std::string fd(double x) { return io::format_double(x); }

json report_envelope(const std::string& command, const ExperimentConfig& cfg, int exit_code, const std::string& error,
                     json result, const std::string& timestamp) {
  return {{"schema_version", io::kSchemaVersion},
          {"command", command},
          {"config", config_to_json(cfg)},
          {"status", {{"ok", exit_code == kExitOk}, {"exit_code", exit_code}, {"error", error}}},
          {"result", std::move(result)},
          {"metadata", {{"timestamp", timestamp}, {"tool", "holonomy_lab"}}}};
}

std::string csv_of(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& r : rows) out += io::csv_record(r);
  return out;
}

std::vector<std::string> complex_row(const std::string& quantity, const std::string& index, cplx z) {
  return {quantity, index, fd(z.real()), fd(z.imag())};
}

const std::vector<std::string> kLongHeader{"quantity", "index", "re", "im"};

// ---- traces -------------------------------------------------------------

struct Outcome {
  int exit_code = kExitOk;
  std::string error;
  json result;
  std::vector<std::vector<std::string>> csv;
};

Outcome traces(const ExperimentConfig& cfg) {
  const auto surf = resolve_surface(cfg);
  const auto settings = settings_of(cfg);
  const auto qd = quaddiff::from_chart(surf.theta, surf.n, settings.basepoint);
  Outcome out;
  out.csv.push_back(kLongHeader);
  try {
    const auto ev = holmap::character_map(surf.theta, settings);
    out.result = {{"n", surf.n}, {"differential", io::qd_to_json(qd)}, {"evaluation", io::evaluation_to_json(ev)}};
    for (std::size_t k = 0; k < ev.raw_traces.size(); ++k) {
      out.csv.push_back(complex_row("raw_trace", std::to_string(ev.loop_order[k]), ev.raw_traces[k]));
    }
    for (std::size_t k = 0; k < ev.monodromies.size(); ++k) {
      out.csv.push_back(complex_row("peripheral_trace", std::to_string(ev.loop_order[k]), ev.monodromies[k].matrix.trace()));
    }
    const auto coords = ev.character.coordinates();
    for (std::size_t k = 0; k < coords.size(); ++k) out.csv.push_back(complex_row("character", std::to_string(k), coords[k]));
    out.csv.push_back({"max_parabolic_defect", "", fd(ev.max_parabolic_defect), "0"});
    out.csv.push_back({"relation_defect", std::string(io::relation_name(ev.relation.kind)), fd(ev.relation.defect), "0"});
    out.csv.push_back({"relation_relative_defect", "", fd(ev.relation.relative_defect), "0"});
    out.csv.push_back({"commutator_gap", "", fd(ev.commutator_gap), "0"});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ValidityError) throw;
    out.exit_code = kExitValidity;
    out.error = e.what();
    out.result = {{"n", surf.n}, {"differential", io::qd_to_json(qd)}};
  }
  return out;
}

// ---- jacobian / scan ----------------------------------------------------

struct GridRow {
  quaddiff::ParameterPoint theta;
  std::string status = "ok";
  std::optional<holmap::JacobianReport> jacobian;
  std::optional<holmap::FiberReport> fiber;
  std::size_t expected_rank = 0;
};

GridRow evaluate_row(const quaddiff::ParameterPoint& theta, std::size_t n, const holmap::Settings& settings) {
  GridRow row;
  row.theta = theta;
  row.expected_rank = quaddiff::ParameterPoint::dimension_for(n);
  if (n == 3) {
    row.status = "ZeroDimensionalDomain";
    return row;
  }
  try {
    row.jacobian = holmap::jacobian_fd(theta, settings);
    row.fiber = holmap::fiber_probe(*row.jacobian, n, settings.rank_threshold);
    if (row.jacobian->rank != row.expected_rank) row.status = "RankDeficient";
  } catch (const Error& e) {
    row.status = std::string(to_string(e.kind()));
    row.jacobian.reset();
    row.fiber.reset();
  }
  return row;
}

bool row_flagged(const GridRow& r) { return !r.jacobian && r.status != "ZeroDimensionalDomain"; }
bool row_full_rank(const GridRow& r) { return r.status == "ok" || r.status == "ZeroDimensionalDomain"; }

std::vector<std::string> row_header(std::size_t dim) {
  std::vector<std::string> h{"index"};
  for (std::size_t k = 0; k < dim; ++k) {
    h.push_back("theta" + std::to_string(k) + "_re");
    h.push_back("theta" + std::to_string(k) + "_im");
  }
  for (const char* c : {"status", "rank", "expected_rank", "condition_ratio", "cr_defect", "accessory_rank"}) h.push_back(c);
  for (std::size_t k = 0; k < dim; ++k) h.push_back("sigma" + std::to_string(k));
  h.push_back("fd_step");
  h.push_back("rank_threshold");
  return h;
}

std::vector<std::string> row_fields(std::size_t index, const GridRow& r, std::size_t dim, const holmap::Settings& s) {
  std::vector<std::string> f{std::to_string(index)};
  for (std::size_t k = 0; k < dim; ++k) {
    const cplx z = k < r.theta.theta.size() ? r.theta.theta[k] : cplx{};
    f.push_back(fd(z.real()));
    f.push_back(fd(z.imag()));
  }
  f.push_back(r.status);
  if (r.jacobian) {
    f.push_back(std::to_string(r.jacobian->rank));
    f.push_back(std::to_string(r.expected_rank));
    f.push_back(fd(r.jacobian->condition_ratio));
    f.push_back(fd(r.jacobian->cr_defect));
    f.push_back(r.fiber ? std::to_string(r.fiber->accessory_rank) : "");
    for (std::size_t k = 0; k < dim; ++k) {
      f.push_back(k < r.jacobian->singular_values.size() ? fd(r.jacobian->singular_values[k]) : "");
    }
  } else {
    const bool zero_dim = r.status == "ZeroDimensionalDomain";
    f.push_back(zero_dim ? "0" : "");
    f.push_back(std::to_string(r.expected_rank));
    for (std::size_t k = 0; k < 3 + dim; ++k) f.push_back("");
  }
  f.push_back(fd(s.fd_step));
  f.push_back(fd(s.rank_threshold));
  return f;
}

json row_json(const GridRow& r) {
  json j{{"theta", io::complex_list(r.theta.theta)}, {"status", r.status}, {"expected_rank", r.expected_rank}};
  if (r.jacobian) j["jacobian"] = io::jacobian_to_json(*r.jacobian);
  if (r.fiber) j["fiber"] = io::fiber_to_json(*r.fiber);
  return j;
}

Outcome jacobian(const ExperimentConfig& cfg) {
  const auto surf = resolve_surface(cfg);
  const auto dim = surf.theta.dimension();
  Outcome out;
  out.csv.push_back(row_header(dim));
  if (surf.n == 3) {
    GridRow row = evaluate_row(surf.theta, 3, settings_of(cfg));
    out.result = {{"n", 3}, {"domain", "ZeroDimensionalDomain"}, {"rank", 0}, {"expected_rank", 0}};
    out.csv.push_back(row_fields(0, row, dim, settings_of(cfg)));
    return out;
  }
  const auto settings = holmap::pinned_settings(surf.theta, settings_of(cfg));
  const auto row = evaluate_row(surf.theta, surf.n, settings);
  out.csv.push_back(row_fields(0, row, dim, settings));
  out.result = {{"n", surf.n}, {"basepoint", io::complex_to_json(*settings.basepoint)}, {"row", row_json(row)}};
  if (!row.jacobian) {
    out.exit_code = kExitValidity;
    out.error = row.status;
    return out;
  }
  if (cfg.probe.samples > 0) {
    const auto probe = holmap::injectivity_probe(surf.theta, cfg.probe.radius, cfg.probe.samples, cfg.seed, settings);
    out.result["probe"] = io::probe_to_json(probe);
  }
  if (row.jacobian->rank != row.expected_rank) {
    out.exit_code = kExitValidity;
    out.error = "rank " + std::to_string(row.jacobian->rank) + " below " + std::to_string(row.expected_rank);
  }
  return out;
}

std::vector<quaddiff::ParameterPoint> grid_points(const ExperimentConfig& cfg, std::size_t& n) {
  if (cfg.grid.kind == GridSpec::Kind::Explicit) {
    std::vector<quaddiff::ParameterPoint> pts;
    for (const auto& p : cfg.grid.points) pts.push_back({p});
    if (cfg.n) {
      n = *cfg.n;
    } else if (cfg.theta || cfg.punctures) {
      n = resolve_surface(cfg).n;
    } else if (!pts.empty()) {
      n = holmap::punctures_for_dimension(pts.front().dimension());
    } else {
      n = 3;
    }
    for (const auto& p : pts) {
      if (p.dimension() != quaddiff::ParameterPoint::dimension_for(n)) {
        throw Error(ErrorKind::DimensionMismatch, "grid point has the wrong dimension for n");
      }
    }
    return pts;
  }
  const auto surf = resolve_surface(cfg);
  n = surf.n;
  if (cfg.grid.kind == GridSpec::Kind::Center || n == 3) return {surf.theta};
  return holmap::cross_grid(surf.theta, cfg.grid.moduli_radius, cfg.grid.accessory_radius);
}

Outcome scan(const ExperimentConfig& cfg) {
  std::size_t n = 3;
  const auto pts = grid_points(cfg, n);
  const auto dim = quaddiff::ParameterPoint::dimension_for(n);
  const auto settings = settings_of(cfg);

  // Rows are computed in batches of hardware threads and stored by index.
  std::vector<GridRow> rows(pts.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < pts.size(); begin += workers) {
    const std::size_t end = std::min(pts.size(), begin + workers);
    std::vector<std::future<GridRow>> jobs;
    for (std::size_t k = begin; k < end; ++k) {
      jobs.push_back(std::async(std::launch::async, evaluate_row, pts[k], n, settings));
    }
    for (std::size_t k = begin; k < end; ++k) rows[k] = jobs[k - begin].get();
  }

  Outcome out;
  out.csv.push_back(row_header(dim));
  json jrows = json::array();
  std::size_t flagged = 0;
  std::size_t deficient = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.csv.push_back(row_fields(k, rows[k], dim, settings));
    jrows.push_back(row_json(rows[k]));
    if (row_flagged(rows[k])) ++flagged;
    else if (!row_full_rank(rows[k])) ++deficient;
  }
  out.result = {{"n", n}, {"rows", jrows}, {"flagged", flagged}, {"rank_deficient", deficient}};
  if (deficient > 0) {
    out.exit_code = kExitValidity;
    out.error = std::to_string(deficient) + " grid point(s) below full rank";
  }
  return out;
}

// ---- foliation ----------------------------------------------------------

Outcome foliation_cmd(const ExperimentConfig& cfg) {
  const auto& spec = cfg.foliation;
  Outcome out;
  out.csv.push_back(kLongHeader);
  const foliation::LeafState start{};
  json sweep = json::array();
  bool ok = true;
  for (long k = spec.k_min; k <= spec.k_max; ++k) {
    const auto closed = foliation::leaf_loop_monodromy(start, k);
    const auto numeric = foliation::leaf_loop_numeric(start, k, spec.samples_per_turn);
    const bool exact = closed.v == start.v - static_cast<double>(k);
    const double err = std::abs(numeric.v - closed.v);
    ok = ok && exact && err < spec.tol;
    sweep.push_back({{"k", k},
                     {"v_closed", io::complex_to_json(closed.v)},
                     {"v_numeric", io::complex_to_json(numeric.v)},
                     {"shift", io::complex_to_json(closed.v - start.v)},
                     {"closed_form_exact", exact},
                     {"numeric_error", err}});
    out.csv.push_back(complex_row("v_closed", std::to_string(k), closed.v));
    out.csv.push_back(complex_row("v_numeric", std::to_string(k), numeric.v));
    out.csv.push_back({"numeric_error", std::to_string(k), fd(err), "0"});
  }
  const auto fixed = foliation::conjugacy_check({{cplx{}, cplx(0, 1), cplx(1, 1)}}, spec.tol);
  const auto random = foliation::conjugacy_check(foliation::random_leaves(spec.leaves, cfg.seed), spec.tol);
  ok = ok && fixed.passed && random.passed;
  out.csv.push_back({"fixed_leaf_max_residual", "", fd(fixed.max_residual), "0"});
  out.csv.push_back({"random_leaves_max_residual", std::to_string(random.samples), fd(random.max_residual), "0"});
  out.csv.push_back({"diagonal_max_v", "", fd(std::max(fixed.max_diagonal_v, random.max_diagonal_v)), "0"});
  out.result = {{"start", {{"u", io::complex_to_json(start.u)}, {"v", io::complex_to_json(start.v)}}},
                {"k_sweep", sweep},
                {"fixed_leaf", io::conjugacy_to_json(fixed)},
                {"random_leaves", io::conjugacy_to_json(random)}};
  if (!ok) {
    out.exit_code = kExitValidity;
    out.error = "foliation checks exceeded tolerance";
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  try {
    if (!j.is_object()) config_error("configuration must be a JSON object");
    reject_unknown_keys(j,
                        {"schema_version", "n", "punctures", "accessory", "theta", "basepoint", "tolerances", "seed",
                         "format", "grid", "probe", "foliation"},
                        "configuration");
    ExperimentConfig cfg;
    if (j.contains("schema_version") && j.at("schema_version") != io::kSchemaVersion) {
      config_error("unsupported schema_version");
    }
    if (j.contains("n")) {
      cfg.n = count_of(j.at("n"), "n");
      if (*cfg.n < 3) throw Error(ErrorKind::TooFewPunctures, "n must be at least 3");
    }
    if (j.contains("punctures")) {
      if (!j.at("punctures").is_array()) config_error("punctures must be a list");
      std::vector<ProjPoint> pts;
      for (const auto& p : j.at("punctures")) pts.push_back(io::point_from_json(p));
      cfg.punctures = std::move(pts);
    }
    if (j.contains("accessory")) cfg.accessory = io::complex_list_from_json(j.at("accessory"));
    if (j.contains("theta")) cfg.theta = io::complex_list_from_json(j.at("theta"));
    if (j.contains("basepoint")) cfg.basepoint = io::complex_from_json(j.at("basepoint"));
    if (cfg.theta && cfg.punctures) config_error("give either theta or punctures, not both");
    if (cfg.accessory && !cfg.punctures) config_error("accessory is only meaningful together with punctures");

    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      if (!t.is_object()) config_error("tolerances must be an object");
      reject_unknown_keys(t,
                          {"ode_rel", "ode_abs", "fd_step", "rank_threshold", "parabolic_tol", "commutator_tol",
                           "relation_tol"},
                          "tolerances");
      auto set = [&](const char* key, double& field) {
        if (t.contains(key)) field = positive(t.at(key), key);
      };
      set("ode_rel", cfg.tol.ode_rel);
      set("ode_abs", cfg.tol.ode_abs);
      set("fd_step", cfg.tol.fd_step);
      set("rank_threshold", cfg.tol.rank_threshold);
      set("parabolic_tol", cfg.tol.parabolic_tol);
      set("commutator_tol", cfg.tol.commutator_tol);
      set("relation_tol", cfg.tol.relation_tol);
    }
    if (j.contains("seed")) {
      cfg.seed = count_of(j.at("seed"), "seed");
    }
    if (j.contains("format")) {
      if (!j.at("format").is_string()) config_error("format must be a string");
      parse_format(j.at("format").get<std::string>());
      cfg.format = j.at("format").get<std::string>();
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.is_array()) {
        cfg.grid.kind = GridSpec::Kind::Explicit;
        for (const auto& p : g) cfg.grid.points.push_back(io::complex_list_from_json(p));
      } else if (g.is_object()) {
        reject_unknown_keys(g, {"moduli_radius", "accessory_radius"}, "grid");
        cfg.grid.kind = GridSpec::Kind::Cross;
        if (g.contains("moduli_radius")) cfg.grid.moduli_radius = positive(g.at("moduli_radius"), "moduli_radius");
        if (g.contains("accessory_radius")) {
          cfg.grid.accessory_radius = positive(g.at("accessory_radius"), "accessory_radius");
        }
      } else {
        config_error("grid must be a list of chart points or a cross-grid object");
      }
    }
    if (j.contains("probe")) {
      const auto& p = j.at("probe");
      if (!p.is_object()) config_error("probe must be an object");
      reject_unknown_keys(p, {"radius", "samples"}, "probe");
      if (p.contains("radius")) cfg.probe.radius = positive(p.at("radius"), "probe.radius");
      if (p.contains("samples")) cfg.probe.samples = count_of(p.at("samples"), "probe.samples");
    }
    if (j.contains("foliation")) {
      const auto& f = j.at("foliation");
      if (!f.is_object()) config_error("foliation must be an object");
      reject_unknown_keys(f, {"leaves", "k_min", "k_max", "samples_per_turn", "tol"}, "foliation");
      if (f.contains("leaves")) cfg.foliation.leaves = count_of(f.at("leaves"), "foliation.leaves");
      if (f.contains("k_min")) cfg.foliation.k_min = integer_of(f.at("k_min"), "foliation.k_min");
      if (f.contains("k_max")) cfg.foliation.k_max = integer_of(f.at("k_max"), "foliation.k_max");
      if (f.contains("samples_per_turn")) {
        cfg.foliation.samples_per_turn = count_of(f.at("samples_per_turn"), "foliation.samples_per_turn");
        if (cfg.foliation.samples_per_turn < 5) config_error("foliation.samples_per_turn must be at least 5");
      }
      if (f.contains("tol")) cfg.foliation.tol = positive(f.at("tol"), "foliation.tol");
      if (cfg.foliation.k_min > cfg.foliation.k_max) config_error("foliation.k_min exceeds k_max");
    }
    return cfg;
  } catch (const json::exception& e) {
    config_error(e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    config_error("malformed JSON in " + path + ": " + e.what());
  }
  return parse_config(j);
}

json config_to_json(const ExperimentConfig& cfg) {
  json j{{"schema_version", cfg.schema_version}};
  j["n"] = cfg.n ? json(*cfg.n) : json(nullptr);
  if (cfg.punctures) {
    json pts = json::array();
    for (const auto& p : *cfg.punctures) pts.push_back(io::point_to_json(p));
    j["punctures"] = pts;
  }
  if (cfg.accessory) j["accessory"] = io::complex_list(*cfg.accessory);
  if (cfg.theta) j["theta"] = io::complex_list(*cfg.theta);
  j["basepoint"] = cfg.basepoint ? io::complex_to_json(*cfg.basepoint) : json(nullptr);
  j["tolerances"] = {{"ode_rel", cfg.tol.ode_rel},
                     {"ode_abs", cfg.tol.ode_abs},
                     {"fd_step", cfg.tol.fd_step},
                     {"rank_threshold", cfg.tol.rank_threshold},
                     {"parabolic_tol", cfg.tol.parabolic_tol},
                     {"commutator_tol", cfg.tol.commutator_tol},
                     {"relation_tol", cfg.tol.relation_tol}};
  j["seed"] = cfg.seed;
  j["format"] = cfg.format ? json(*cfg.format) : json(nullptr);
  switch (cfg.grid.kind) {
    case GridSpec::Kind::Center: j["grid"] = "center"; break;
    case GridSpec::Kind::Explicit: {
      json pts = json::array();
      for (const auto& p : cfg.grid.points) pts.push_back(io::complex_list(p));
      j["grid"] = pts;
      break;
    }
    case GridSpec::Kind::Cross:
      j["grid"] = {{"moduli_radius", cfg.grid.moduli_radius}, {"accessory_radius", cfg.grid.accessory_radius}};
      break;
  }
  j["probe"] = {{"radius", cfg.probe.radius}, {"samples", cfg.probe.samples}};
  j["foliation"] = {{"leaves", cfg.foliation.leaves},
                    {"k_min", cfg.foliation.k_min},
                    {"k_max", cfg.foliation.k_max},
                    {"samples_per_turn", cfg.foliation.samples_per_turn},
                    {"tol", cfg.foliation.tol}};
  return j;
}

ResolvedSurface resolve_surface(const ExperimentConfig& cfg) {
  ResolvedSurface out;
  if (cfg.theta) {
    out.n = holmap::punctures_for_dimension(cfg.theta->size());
    out.theta.theta = *cfg.theta;
  } else if (cfg.punctures) {
    const auto [normalized, mobius] = surface::normalize_punctures(*cfg.punctures);
    out.n = normalized.n();
    for (std::size_t k = 3; k < normalized.n(); ++k) out.theta.theta.push_back(normalized.punctures[k].z);
    const std::vector<cplx> acc = cfg.accessory.value_or(std::vector<cplx>(out.n - 3, cplx{}));
    if (acc.size() != out.n - 3) throw Error(ErrorKind::DimensionMismatch, "accessory needs n - 3 entries");
    out.theta.theta.insert(out.theta.theta.end(), acc.begin(), acc.end());
  } else {
    out.n = cfg.n.value_or(3);
    if (out.n != 3) config_error("theta or punctures are required for n > 3");
  }
  if (cfg.n && *cfg.n != out.n) throw Error(ErrorKind::DimensionMismatch, "n does not match the surface given");
  // Fails early on coincident moduli or an unusable basepoint.
  quaddiff::from_chart(out.theta, out.n, cfg.basepoint);
  return out;
}

holmap::Settings settings_of(const ExperimentConfig& cfg) {
  holmap::Settings s;
  s.ode.rel = cfg.tol.ode_rel;
  s.ode.abs = cfg.tol.ode_abs;
  s.parabolic_tol = cfg.tol.parabolic_tol;
  s.commutator_tol = cfg.tol.commutator_tol;
  s.relation_tol = cfg.tol.relation_tol;
  s.fd_step = cfg.tol.fd_step;
  s.rank_threshold = cfg.tol.rank_threshold;
  s.basepoint = cfg.basepoint;
  return s;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TooFewPunctures:
    case ErrorKind::DegenerateConfiguration:
    case ErrorKind::GeometryError:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::InvalidIndex:
    case ErrorKind::ConfigError:
      return kExitConfig;
    default:
      return kExitValidity;
  }
}

CommandResult run_command(const std::string& command, const ExperimentConfig& cfg, Format format,
                          const std::string& timestamp) {
  CommandResult result;
  Outcome outcome;
  try {
    if (command == "traces") outcome = traces(cfg);
    else if (command == "jacobian") outcome = jacobian(cfg);
    else if (command == "scan") outcome = scan(cfg);
    else if (command == "foliation") outcome = foliation_cmd(cfg);
    else config_error("unknown command " + command);
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.kind());
    result.message = e.what();
    if (result.exit_code == kExitConfig) return result;
    outcome = Outcome{};
    outcome.exit_code = result.exit_code;
    outcome.error = e.what();
  }
  result.exit_code = outcome.exit_code;
  result.message = outcome.error;
  if (format == Format::Json) {
    result.report = report_envelope(command, cfg, outcome.exit_code, outcome.error, outcome.result, timestamp).dump(2);
    result.report += '\n';
  } else {
    result.report = csv_of(outcome.csv);
  }
  return result;
}

int main(int argc, char** argv) {
  CLI::App app{"Holonomy of parabolic projective structures on punctured spheres"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format_flag;
  std::optional<std::uint64_t> seed;
  for (const auto& [name, about] : std::vector<std::pair<std::string, std::string>>{
           {"traces", "peripheral traces, relation and non-elementarity checks"},
           {"jacobian", "numerical Jacobian rank of the character map"},
           {"scan", "Jacobian reports over a chart grid"},
           {"foliation", "checks of the local Riccati model and gluing map"}}) {
    auto* sub = app.add_subcommand(name, about);
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", out_path, "report file (stdout when omitted)");
    sub->add_option("--format", format_flag, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "random seed, overrides the configuration");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  ExperimentConfig cfg;
  Format format = Format::Json;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!format_flag.empty()) cfg.format = format_flag;
    format = cfg.format ? parse_format(*cfg.format) : (command == "scan" ? Format::Csv : Format::Json);
  } catch (const Error& e) {
    std::cerr << "holonomy_lab: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }

  const auto result = run_command(command, cfg, format, utc_timestamp());
  if (!result.report.empty()) {
    if (out_path.empty()) {
      std::cout << result.report;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      out << result.report;
      if (!out) {
        std::cerr << "holonomy_lab: cannot write " << out_path << '\n';
        return kExitConfig;
      }
    }
  }
  if (!result.message.empty()) std::cerr << "holonomy_lab: " << result.message << '\n';
  return result.exit_code;
}

}  // namespace holo::cli
