#pragma once

#include <span>
#include <vector>

#include "holo/types.hpp"

namespace holo::repvar {

inline constexpr double kParabolicTol = 1e-8;
inline constexpr double kCommutatorTol = 1e-6;

// Element of SL(2,C) acting on the Riemann sphere by z -> (a z + b) / (c z + d).
class Mobius {
 public:
  Mobius() : m_(Mat2::Identity()) {}

  // Rescales by the principal square root of the determinant.
  // Throws DegenerateConfiguration when the matrix is (numerically) singular.
  explicit Mobius(const Mat2& m);

  static Mobius identity() { return Mobius(); }
  static Mobius translation(cplx t);

  const Mat2& matrix() const { return m_; }
  cplx trace() const { return m_.trace(); }

  ProjPoint apply(const ProjPoint& p) const;
  ProjPoint apply(cplx z) const { return apply(ProjPoint::finite(z)); }

  Mobius inverse() const;
  Mobius operator*(const Mobius& other) const;

 private:
  Mat2 m_;
};

cplx cross_ratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c, const ProjPoint& d);

// Largest entrywise modulus of (m - s*Id) over s = +1, -1, whichever is smaller.
double distance_from_plus_minus_identity(const Mat2& m);

bool is_parabolic(const Mat2& m, double tol = kParabolicTol);

cplx commutator_trace(const Mat2& a, const Mat2& b);

// Sufficient criterion for non-elementary groups containing a parabolic:
// some pair of generators has commutator trace away from 2 (irreducible).
bool is_nonelementary(std::span<const Mat2> generators, double tol = kCommutatorTol);

struct RelationResult {
  enum class Kind { Id, MinusId, Fail };
  Kind kind = Kind::Fail;
  Kind nearest = Kind::Id;  // sign of the closer of +Id, -Id
  double defect = 0.0;  // distance from the nearest of +Id, -Id
  // First-order growth of the product under unit relative perturbations of
  // each factor: sum_k |M_n..M_{k+1}| |M_k| |M_{k-1}..M_1| (Frobenius), >= 1.
  double amplification = 1.0;
  double relative_defect = 0.0;  // defect / amplification
};

// Classifies the ordered product M_n * ... * M_1. Transfer matrices compose
// right-to-left, so this is the monodromy of the concatenated loop
// alpha_1 alpha_2 ... alpha_n.
RelationResult relation_check(std::span<const Mat2> monodromies, double tol = kParabolicTol);

// Same product, compared with Id in PSL(2,C).
RelationResult relation_check_projective(std::span<const Mat2> monodromies, double tol = kParabolicTol);

struct Character {
  std::vector<cplx> pair_traces;        // tr(M_i M_j), i < j, lexicographic
  std::vector<cplx> peripheral_traces;  // tr(M_i)

  // pair traces followed by peripheral traces; length n(n-1)/2 + n.
  std::vector<cplx> coordinates() const;
};

// Requires every input to be a trace-+2 normalized lift (within kParabolicTol).
Character trace_character(std::span<const Mat2> monodromies);

double character_distance(const Character& a, const Character& b);

}  // namespace holo::repvar
