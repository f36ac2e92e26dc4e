#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "holo/monodromy.hpp"
#include "holo/quaddiff.hpp"
#include "holo/repvar.hpp"

namespace holo::holmap {

struct Settings {
  monodromy::OdeTolerance ode{};
  double parabolic_tol = repvar::kParabolicTol;
  double commutator_tol = repvar::kCommutatorTol;
  double relation_tol = 1e-8;
  double fd_step = 1e-5;
  double rank_threshold = 1e-6;
  // Pinning the basepoint keeps the marking fixed across nearby charts.
  std::optional<cplx> basepoint;
};

// Character of one chart point plus the validity checks made on the way.
struct CharacterEvaluation {
  quaddiff::ParameterPoint theta;
  cplx basepoint{};
  std::vector<std::size_t> loop_order;               // puncture index of each loop
  std::vector<monodromy::TransferMatrix> monodromies;  // trace-+2 lifts, loop order
  std::vector<cplx> raw_traces;                      // traces before sign normalization
  repvar::Character character;
  repvar::RelationResult relation;
  double max_parabolic_defect = 0.0;  // max |tr^2 - 4|
  double max_det_drift = 0.0;
  double commutator_gap = 0.0;  // |tr[M_i, M_j] - 2| maximized over pairs
  bool nonelementary = false;
};

std::size_t punctures_for_dimension(std::size_t dimension);

// theta -> ParabolicQD -> peripheral loops -> monodromies -> trace-+2 lifts
// -> character. Throws ValidityError naming the failed check.
CharacterEvaluation character_map(const quaddiff::ParameterPoint& theta, const Settings& settings = {});

using VectorMap = std::function<std::vector<cplx>(const std::vector<cplx>&)>;

struct JacobianReport {
  std::vector<cplx> theta;
  Eigen::MatrixXcd jacobian;         // d f / d theta
  Eigen::MatrixXcd antiholomorphic;  // d f / d conj(theta)
  std::vector<double> singular_values;  // descending
  std::size_t rank = 0;
  double condition_ratio = 0.0;  // sigma_min / sigma_max
  double threshold = 0.0;
  double fd_step = 0.0;
  double cr_defect = 0.0;  // |d f / d conj(theta)| / |d f / d theta|, Frobenius
};

// rank = #{ sigma_k > threshold * sigma_max }.
JacobianReport rank_report(const Eigen::MatrixXcd& jacobian, double threshold);

// Central differences along the real and imaginary direction of every
// coordinate, combined into Wirtinger derivatives.
JacobianReport jacobian_fd(const VectorMap& f, const std::vector<cplx>& theta, double fd_step, double threshold);

// Jacobian of the character map; the basepoint is pinned at the one chosen
// for theta unless settings already pin it.
JacobianReport jacobian_fd(const quaddiff::ParameterPoint& theta, const Settings& settings = {});

// Character map with a fixed marking, as a plain vector function.
VectorMap character_vector_map(std::size_t n, const Settings& settings);

// Settings with the basepoint pinned at the default choice for theta.
Settings pinned_settings(const quaddiff::ParameterPoint& theta, const Settings& settings);

struct ProbeReport {
  std::uint64_t seed = 0;
  double radius = 0.0;
  double sigma_min = 0.0;
  std::size_t requested = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;     // coincident pairs
  std::size_t resampled = 0;   // draws that left the chart domain
  std::size_t violations = 0;
  double min_ratio = 0.0;      // min |chi1 - chi2| / |theta1 - theta2|
};

enum class PairOutcome { Skipped, Separated, Violation };

PairOutcome compare_pair(const quaddiff::ParameterPoint& a, const quaddiff::ParameterPoint& b, double sigma_min,
                         const Settings& settings, double* ratio = nullptr);

// Draws `samples` seeded pairs in the ball of the given radius around theta
// and checks |chi(a) - chi(b)| >= (sigma_min / 2) |a - b|.
ProbeReport injectivity_probe(const quaddiff::ParameterPoint& theta, double radius, std::size_t samples,
                              std::uint64_t seed, const Settings& settings = {});

struct FiberReport {
  std::size_t fiber_dimension = 0;
  std::size_t accessory_rank = 0;  // Jacobian restricted to the fiber of the forgetful map
  std::size_t moduli_rank = 0;     // Teichmuller directions alone, recorded only
  std::vector<double> accessory_singular_values;
  std::vector<double> moduli_singular_values;
};

FiberReport fiber_probe(const JacobianReport& full, std::size_t n, double threshold);
FiberReport fiber_probe(const quaddiff::ParameterPoint& theta, const Settings& settings = {});

// Center plus four points: moduli shifted by +-moduli_radius and +-i
// moduli_radius, accessory coordinates shifted by the matching multiple of
// accessory_radius.
std::vector<quaddiff::ParameterPoint> cross_grid(const quaddiff::ParameterPoint& center, double moduli_radius,
                                                 double accessory_radius);

}  // namespace holo::holmap
