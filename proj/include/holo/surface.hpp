#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "holo/path.hpp"
#include "holo/repvar.hpp"
#include "holo/types.hpp"

namespace holo::surface {

// Marked punctured sphere S_{0,n}.
//
// Normalized configurations carry punctures (0, 1, inf, lambda_4, ..., lambda_n);
// the lambdas are the moduli. loop_radius[i] is the lasso circle radius around
// finite puncture i; the entry of the infinite puncture holds the radius of the
// enclosing circle used for its loop.
struct PunctureConfig {
  std::vector<ProjPoint> punctures;
  cplx basepoint{};
  std::vector<double> loop_radius;

  std::size_t n() const { return punctures.size(); }
  std::size_t infinity_index() const;  // n() when no puncture is infinite
  std::vector<cplx> finite_points() const;
};

// Smallest distance between a puncture and anything a lasso might touch.
inline constexpr double kMinClearance = 1e-9;

// Builds a configuration, validating distinctness and (when supplied) the
// basepoint; otherwise picks the default basepoint by grid search.
PunctureConfig make_config(std::vector<ProjPoint> punctures, std::optional<cplx> basepoint = std::nullopt);

// Sends punctures 0, 1, 2 to (0, 1, inf) by the unique Mobius map doing so.
std::pair<PunctureConfig, repvar::Mobius> normalize_punctures(const std::vector<ProjPoint>& raw,
                                                              std::optional<cplx> basepoint = std::nullopt);

// Finite point maximizing the smallest clearance of the lasso system.
cplx default_basepoint(const std::vector<ProjPoint>& punctures);

// Clearance of the lasso system for a given basepoint: the minimum over
// puncture distances and over distances from every lasso tail to the other
// punctures. Zero or negative means unusable.
double basepoint_clearance(const std::vector<ProjPoint>& punctures, cplx basepoint);

struct LoopPath {
  Path path;
  cplx base{};
  std::size_t winds_around = 0;  // puncture index
};

// One loop per puncture, ordered by argument of (puncture - basepoint) in
// (-pi, pi], ties by modulus, infinity last. The concatenation
// loops[0] loops[1] ... loops[n-1] is null-homotopic.
std::vector<LoopPath> peripheral_loops(const PunctureConfig& config);

// A point off every loop, inside the enclosing circle and outside every lasso
// disk. Winding numbers taken in the chart w = 1/(z - q) are well defined on
// the sphere: see sphere_winding_number.
cplx winding_reference_point(const PunctureConfig& config, const std::vector<LoopPath>& loops);

// Winding number of a loop about puncture j measured in the chart
// w = 1/(z - reference), where infinity becomes the finite point w = 0.
double sphere_winding_number(const LoopPath& loop, const PunctureConfig& config, std::size_t j, cplx reference);

}  // namespace holo::surface
