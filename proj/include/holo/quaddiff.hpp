#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "holo/surface.hpp"
#include "holo/types.hpp"

namespace holo::quaddiff {

// Rational quadratic differential
//
//   Phi(z) = sum_i [ 1 / (2 (z - p_i)^2) + c_i / (z - p_i) ]
//
// over the finite punctures p_i, with the residues c_i constrained so that
// infinity is also a double pole with leading coefficient 1/2:
//
//   sum_i c_i = 0,   sum_i c_i p_i = (2 - n) / 2.
struct ParabolicQD {
  surface::PunctureConfig config;
  std::vector<cplx> residues;  // one per finite puncture, in puncture order

  // Residue at a finite puncture, addressed by puncture index.
  cplx residue_at(std::size_t puncture_index) const;
};

// Local coordinates (moduli..., accessory...) on the space of parabolic
// structures: n - 3 moduli followed by n - 3 free residues.
struct ParameterPoint {
  std::vector<cplx> theta;

  std::size_t dimension() const { return theta.size(); }
  static std::size_t dimension_for(std::size_t n) { return 2 * n - 6; }
};

struct LaurentData {
  std::size_t puncture = 0;
  // Orders -2, -1, 0. At infinity these are taken in w = 1/z after the
  // dz^2 -> dw^2 / w^4 change of variables.
  std::array<cplx, 3> coefficients{};

  cplx leading() const { return coefficients[0]; }
};

// 2 x (n-1) matrix of the two linear constraints on the residues, and its
// right-hand side.
Eigen::MatrixXcd residue_constraint_matrix(const surface::PunctureConfig& config);
Eigen::Vector2cd residue_constraint_rhs(const surface::PunctureConfig& config);

// Solves for the residues of the first two finite punctures given the rest.
ParabolicQD solve_residue_constraints(const surface::PunctureConfig& config, const std::vector<cplx>& free);

// Builds the normalized configuration (0, 1, inf, moduli...) and completes the
// accessory residues. A basepoint may be pinned so that nearby charts share a
// marking.
ParabolicQD from_chart(const ParameterPoint& theta, std::size_t n, std::optional<cplx> basepoint = std::nullopt);

// Inverse of from_chart for a normalized differential.
ParameterPoint to_chart(const ParabolicQD& qd);

cplx evaluate(const ParabolicQD& qd, cplx z);

// Principal part 1/(2(z-p)^2) + c/(z-p) at a finite puncture.
cplx singular_part(const ParabolicQD& qd, std::size_t puncture_index, cplx z);

LaurentData laurent_at(const ParabolicQD& qd, std::size_t puncture_index);

// Max modulus of the two constraint residuals.
double constraint_defect(const ParabolicQD& qd);

}  // namespace holo::quaddiff
