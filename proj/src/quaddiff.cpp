#include "holo/quaddiff.hpp"

#include <algorithm>
#include <cmath>

#include "holo/error.hpp"

namespace holo::quaddiff {

namespace {

void require_infinite_puncture(const surface::PunctureConfig& config) {
  if (config.infinity_index() == config.n()) {
    throw Error(ErrorKind::DegenerateConfiguration, "infinity must be one of the punctures");
  }
}

}  // namespace

cplx ParabolicQD::residue_at(std::size_t puncture_index) const {
  if (puncture_index >= config.n() || config.punctures[puncture_index].infinite) {
    throw Error(ErrorKind::InvalidIndex, "no residue stored for puncture " + std::to_string(puncture_index));
  }
  std::size_t slot = 0;
  for (std::size_t i = 0; i < puncture_index; ++i) {
    if (config.punctures[i].is_finite()) ++slot;
  }
  return residues.at(slot);
}

Eigen::MatrixXcd residue_constraint_matrix(const surface::PunctureConfig& config) {
  const auto finite = config.finite_points();
  Eigen::MatrixXcd a(2, static_cast<Eigen::Index>(finite.size()));
  for (std::size_t k = 0; k < finite.size(); ++k) {
    a(0, static_cast<Eigen::Index>(k)) = 1.0;
    a(1, static_cast<Eigen::Index>(k)) = finite[k];
  }
  return a;
}

Eigen::Vector2cd residue_constraint_rhs(const surface::PunctureConfig& config) {
  return {0.0, (2.0 - static_cast<double>(config.n())) / 2.0};
}

ParabolicQD solve_residue_constraints(const surface::PunctureConfig& config, const std::vector<cplx>& free) {
  require_infinite_puncture(config);
  const auto finite = config.finite_points();
  const std::size_t n = config.n();
  if (free.size() != n - 3) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(n - 3) + " free residues, got " + std::to_string(free.size()));
  }
  // Pivot on the first two finite punctures:
  //   c0 + c1       = -sum_k f_k
  //   c0 p0 + c1 p1 = (2 - n)/2 - sum_k f_k p_k
  cplx sum = 0.0, moment = 0.0;
  for (std::size_t k = 0; k < free.size(); ++k) {
    sum += free[k];
    moment += free[k] * finite[k + 2];
  }
  const auto rhs = residue_constraint_rhs(config);
  const cplx r0 = rhs(0) - sum;
  const cplx r1 = rhs(1) - moment;
  const cplx p0 = finite[0], p1 = finite[1];
  const cplx det = p1 - p0;
  if (std::abs(det) < 1e-14 * std::max(1.0, std::max(std::abs(p0), std::abs(p1)))) {
    throw Error(ErrorKind::ConstraintSingular, "pivot punctures coincide");
  }
  ParabolicQD qd;
  qd.config = config;
  qd.residues.resize(finite.size());
  qd.residues[1] = (r1 - p0 * r0) / det;
  qd.residues[0] = r0 - qd.residues[1];
  std::copy(free.begin(), free.end(), qd.residues.begin() + 2);
  return qd;
}

ParabolicQD from_chart(const ParameterPoint& theta, std::size_t n, std::optional<cplx> basepoint) {
  if (n < 3) throw Error(ErrorKind::TooFewPunctures, "need at least 3 punctures");
  if (theta.dimension() != ParameterPoint::dimension_for(n)) {
    throw Error(ErrorKind::DimensionMismatch, "chart point must have 2n-6 = " +
                                                  std::to_string(ParameterPoint::dimension_for(n)) + " entries");
  }
  const std::size_t m = n - 3;
  std::vector<ProjPoint> punctures{ProjPoint::finite(0.0), ProjPoint::finite(1.0), ProjPoint::infinity()};
  for (std::size_t k = 0; k < m; ++k) punctures.push_back(ProjPoint::finite(theta.theta[k]));
  auto config = surface::make_config(std::move(punctures), basepoint);
  const std::vector<cplx> free(theta.theta.begin() + static_cast<std::ptrdiff_t>(m), theta.theta.end());
  return solve_residue_constraints(config, free);
}

ParameterPoint to_chart(const ParabolicQD& qd) {
  ParameterPoint p;
  for (std::size_t i = 3; i < qd.config.n(); ++i) p.theta.push_back(qd.config.punctures[i].z);
  for (std::size_t i = 3; i < qd.config.n(); ++i) p.theta.push_back(qd.residue_at(i));
  return p;
}

cplx evaluate(const ParabolicQD& qd, cplx z) {
  const auto finite = qd.config.finite_points();
  cplx value = 0.0;
  for (std::size_t k = 0; k < finite.size(); ++k) {
    const cplx d = z - finite[k];
    if (d == cplx{}) throw Error(ErrorKind::PoleEvaluation, "evaluation at a puncture");
    value += 0.5 / (d * d) + qd.residues[k] / d;
  }
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw Error(ErrorKind::PoleEvaluation, "evaluation overflowed next to a puncture");
  }
  return value;
}

cplx singular_part(const ParabolicQD& qd, std::size_t puncture_index, cplx z) {
  const cplx p = qd.config.punctures.at(puncture_index).z;
  const cplx d = z - p;
  return 0.5 / (d * d) + qd.residue_at(puncture_index) / d;
}

LaurentData laurent_at(const ParabolicQD& qd, std::size_t puncture_index) {
  if (puncture_index >= qd.config.n()) throw Error(ErrorKind::InvalidIndex, "puncture index out of range");
  const auto finite = qd.config.finite_points();
  LaurentData out;
  out.puncture = puncture_index;

  if (qd.config.punctures[puncture_index].infinite) {
    // Phi(z) = sum_m A_m z^{-m} for large z, with
    //   A_m = (m - 1) a p^{m-2} + c p^{m-1} summed over punctures (a = 1/2).
    // In w = 1/z, Phi dz^2 = (A_2 w^{-2} + A_3 w^{-1} + A_4 + ...) dw^2.
    cplx a2 = 0.0, a3 = 0.0, a4 = 0.0;
    for (std::size_t k = 0; k < finite.size(); ++k) {
      const cplx p = finite[k];
      const cplx c = qd.residues[k];
      a2 += 0.5 + c * p;
      a3 += 2.0 * 0.5 * p + c * p * p;
      a4 += 3.0 * 0.5 * p * p + c * p * p * p;
    }
    // A_1 = sum c must vanish for the pole to be of order 2; it is part of the
    // constraint system and not reported here.
    out.coefficients = {a2, a3, a4};
    return out;
  }

  const cplx pj = qd.config.punctures[puncture_index].z;
  cplx a0 = 0.0;
  for (std::size_t k = 0; k < finite.size(); ++k) {
    if (finite[k] == pj) continue;
    const cplx d = pj - finite[k];
    a0 += 0.5 / (d * d) + qd.residues[k] / d;
  }
  out.coefficients = {0.5, qd.residue_at(puncture_index), a0};
  return out;
}

double constraint_defect(const ParabolicQD& qd) {
  const auto a = residue_constraint_matrix(qd.config);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(qd.residues.size()));
  for (std::size_t k = 0; k < qd.residues.size(); ++k) c(static_cast<Eigen::Index>(k)) = qd.residues[k];
  return (a * c - residue_constraint_rhs(qd.config)).cwiseAbs().maxCoeff();
}

}  // namespace holo::quaddiff
