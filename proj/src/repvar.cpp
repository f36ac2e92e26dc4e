#include "holo/repvar.hpp"

#include <algorithm>
#include <cmath>

#include "holo/error.hpp"

namespace holo::repvar {

Mobius::Mobius(const Mat2& m) {
  const cplx det = m.determinant();
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || std::abs(det) <= 1e-300 || std::abs(det) < 1e-14 * scale * scale) {
    throw Error(ErrorKind::DegenerateConfiguration, "Mobius matrix is singular");
  }
  m_ = m / std::sqrt(det);
}

Mobius Mobius::translation(cplx t) {
  Mat2 m;
  m << 1.0, t, 0.0, 1.0;
  return Mobius(m);
}

ProjPoint Mobius::apply(const ProjPoint& p) const {
  const cplx a = m_(0, 0), b = m_(0, 1), c = m_(1, 0), d = m_(1, 1);
  if (p.infinite) {
    if (c == cplx{}) return ProjPoint::infinity();
    return ProjPoint::finite(a / c);
  }
  const cplx den = c * p.z + d;
  if (den == cplx{}) return ProjPoint::infinity();
  return ProjPoint::finite((a * p.z + b) / den);
}

Mobius Mobius::inverse() const {
  Mat2 inv;
  inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
  return Mobius(inv);
}

Mobius Mobius::operator*(const Mobius& other) const { return Mobius(m_ * other.m_); }

namespace {

// Homogeneous coordinates keep the cross-ratio total when a point is infinite.
Eigen::Vector2cd homogeneous(const ProjPoint& p) {
  return p.infinite ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(p.z, 1.0);
}

cplx bracket(const Eigen::Vector2cd& u, const Eigen::Vector2cd& v) { return u(0) * v(1) - u(1) * v(0); }

}  // namespace

cplx cross_ratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c, const ProjPoint& d) {
  const auto ha = homogeneous(a), hb = homogeneous(b), hc = homogeneous(c), hd = homogeneous(d);
  return (bracket(ha, hc) * bracket(hb, hd)) / (bracket(ha, hd) * bracket(hb, hc));
}

double distance_from_plus_minus_identity(const Mat2& m) {
  const double plus = (m - Mat2::Identity()).cwiseAbs().maxCoeff();
  const double minus = (m + Mat2::Identity()).cwiseAbs().maxCoeff();
  return std::min(plus, minus);
}

bool is_parabolic(const Mat2& m, double tol) {
  const cplx tr = m.trace();
  return std::abs(tr * tr - 4.0) < tol && distance_from_plus_minus_identity(m) > tol;
}

cplx commutator_trace(const Mat2& a, const Mat2& b) {
  // SL2 inverses via the adjugate; inputs are unit-determinant.
  Mat2 ai, bi;
  ai << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
  bi << b(1, 1), -b(0, 1), -b(1, 0), b(0, 0);
  return (a * b * ai * bi).trace();
}

bool is_nonelementary(std::span<const Mat2> generators, double tol) {
  if (generators.size() < 2) {
    throw Error(ErrorKind::NotEnoughGenerators, "need at least two generators");
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if (std::abs(commutator_trace(generators[i], generators[j]) - 2.0) > tol) return true;
    }
  }
  return false;
}

namespace {

Mat2 ordered_product(std::span<const Mat2> monodromies) {
  Mat2 product = Mat2::Identity();
  for (const auto& m : monodromies) product = m * product;
  return product;
}

double amplification(std::span<const Mat2> monodromies) {
  double total = 0.0;
  Mat2 right = Mat2::Identity();
  for (std::size_t k = 0; k < monodromies.size(); ++k) {
    Mat2 left = Mat2::Identity();
    for (std::size_t j = k + 1; j < monodromies.size(); ++j) left = monodromies[j] * left;
    total += left.norm() * monodromies[k].norm() * right.norm();
    right = monodromies[k] * right;
  }
  return std::max(1.0, total);
}

}  // namespace

RelationResult relation_check(std::span<const Mat2> monodromies, double tol) {
  const Mat2 product = ordered_product(monodromies);
  const double plus = (product - Mat2::Identity()).cwiseAbs().maxCoeff();
  const double minus = (product + Mat2::Identity()).cwiseAbs().maxCoeff();
  RelationResult result;
  result.defect = std::min(plus, minus);
  result.amplification = amplification(monodromies);
  result.relative_defect = result.defect / result.amplification;
  result.nearest = plus <= minus ? RelationResult::Kind::Id : RelationResult::Kind::MinusId;
  if (plus < tol) {
    result.kind = RelationResult::Kind::Id;
  } else if (minus < tol) {
    result.kind = RelationResult::Kind::MinusId;
  } else {
    result.kind = RelationResult::Kind::Fail;
  }
  return result;
}

RelationResult relation_check_projective(std::span<const Mat2> monodromies, double tol) {
  RelationResult result;
  result.defect = distance_from_plus_minus_identity(ordered_product(monodromies));
  result.kind = result.defect < tol ? RelationResult::Kind::Id : RelationResult::Kind::Fail;
  return result;
}

std::vector<cplx> Character::coordinates() const {
  std::vector<cplx> out = pair_traces;
  out.insert(out.end(), peripheral_traces.begin(), peripheral_traces.end());
  return out;
}

Character trace_character(std::span<const Mat2> monodromies) {
  Character ch;
  for (const auto& m : monodromies) {
    if (std::abs(m.trace() - 2.0) > kParabolicTol) {
      throw Error(ErrorKind::LiftNotNormalized, "peripheral lift does not have trace +2");
    }
  }
  const std::size_t n = monodromies.size();
  ch.pair_traces.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ch.pair_traces.push_back((monodromies[i] * monodromies[j]).trace());
    }
  }
  for (const auto& m : monodromies) ch.peripheral_traces.push_back(m.trace());
  return ch;
}

double character_distance(const Character& a, const Character& b) {
  const auto ca = a.coordinates();
  const auto cb = b.coordinates();
  if (ca.size() != cb.size()) {
    throw Error(ErrorKind::DimensionMismatch, "characters of different length");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < ca.size(); ++k) sum += std::norm(ca[k] - cb[k]);
  return std::sqrt(sum);
}

}  // namespace holo::repvar
