#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace holo {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;
inline const cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};

// A point of the Riemann sphere: either a finite complex number or infinity.
struct ProjPoint {
  cplx z{0.0, 0.0};
  bool infinite = false;

  static ProjPoint finite(cplx w) { return {w, false}; }
  static ProjPoint infinity() { return {cplx{0.0, 0.0}, true}; }

  bool is_finite() const { return !infinite; }
};

inline bool operator==(const ProjPoint& a, const ProjPoint& b) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return a.z == b.z;
}

// Chordal distance on the sphere, in [0, 1]. Total on both charts.
double chordal_distance(const ProjPoint& a, const ProjPoint& b);

}  // namespace holo
