#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holo/error.hpp"
#include "holo/holmap.hpp"

namespace holo::cli {

struct Tolerances {
  double ode_rel = 1e-10;
  double ode_abs = 1e-12;
  double fd_step = 1e-5;
  double rank_threshold = 1e-6;
  double parabolic_tol = 1e-8;
  double commutator_tol = 1e-6;
  double relation_tol = 1e-8;
};

struct GridSpec {
  enum class Kind { Center, Explicit, Cross };
  Kind kind = Kind::Center;
  std::vector<std::vector<cplx>> points;  // Explicit
  double moduli_radius = 0.1;             // Cross
  double accessory_radius = 0.5;          // Cross
};

struct ProbeSpec {
  double radius = 1e-2;
  std::size_t samples = 50;
};

struct FoliationSpec {
  std::size_t leaves = 100;
  long k_min = -2;
  long k_max = 2;
  std::size_t samples_per_turn = 64;
  double tol = 1e-9;
};

// Punctures are taken in the given order and normalized so that the first
// three go to (0, 1, inf). A basepoint, when given, is in normalized
// coordinates.
struct ExperimentConfig {
  int schema_version = 1;
  std::optional<std::size_t> n;
  std::optional<std::vector<ProjPoint>> punctures;
  std::optional<std::vector<cplx>> accessory;
  std::optional<std::vector<cplx>> theta;
  std::optional<cplx> basepoint;
  Tolerances tol;
  std::uint64_t seed = 0;
  std::optional<std::string> format;
  GridSpec grid;
  ProbeSpec probe;
  FoliationSpec foliation;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Echo of the effective configuration with every default filled in.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct ResolvedSurface {
  std::size_t n = 3;
  quaddiff::ParameterPoint theta;
};

ResolvedSurface resolve_surface(const ExperimentConfig& cfg);
holmap::Settings settings_of(const ExperimentConfig& cfg);

enum class Format { Json, Csv };

struct CommandResult {
  int exit_code = 0;
  std::string report;   // empty when no report could be produced
  std::string message;  // for stderr
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitValidity = 2;

int exit_code_for(ErrorKind kind);

// Runs one subcommand. `timestamp` lands only in the JSON metadata block.
CommandResult run_command(const std::string& command, const ExperimentConfig& cfg, Format format,
                          const std::string& timestamp);

// Entry point of the holonomy_lab executable.
int main(int argc, char** argv);

}  // namespace holo::cli
