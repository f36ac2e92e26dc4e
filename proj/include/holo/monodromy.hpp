#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "holo/path.hpp"
#include "holo/quaddiff.hpp"
#include "holo/repvar.hpp"
#include "holo/surface.hpp"
#include "holo/types.hpp"

namespace holo::monodromy {

// Meromorphic coefficient Phi of y'' + (Phi/2) y = 0 together with its poles,
// which paths must avoid.
struct Potential {
  std::function<cplx(cplx)> phi;
  std::vector<cplx> poles;

  double clearance(const surface::Path& path) const;
};

Potential potential_of(const quaddiff::ParabolicQD& qd);

struct OdeTolerance {
  double rel = 1e-10;
  double abs = 1e-12;
};

// Transport of the first-order frame (y, y') along a path:
// frame(end) = matrix * frame(start).
struct TransferMatrix {
  Mat2 matrix = Mat2::Identity();
  cplx start{};
  cplx end{};
  double length = 0.0;
  double det_drift = 0.0;  // |det - 1| before renormalization
  std::size_t steps = 0;
  OdeTolerance tol{};
};

inline constexpr double kMinPathClearance = 1e-9;

TransferMatrix integrate_along(const Potential& potential, const surface::Path& path, const OdeTolerance& tol = {});
TransferMatrix integrate_along(const quaddiff::ParabolicQD& qd, const surface::Path& path,
                               const OdeTolerance& tol = {});

TransferMatrix loop_monodromy(const quaddiff::ParabolicQD& qd, const surface::LoopPath& loop,
                              const OdeTolerance& tol = {});

// Chooses the sign of an SL2 lift of a parabolic element so that its trace is +2.
TransferMatrix normalize_parabolic_lift(const TransferMatrix& m, double tol = repvar::kParabolicTol);

// Germ of the developing map D = y1 / y2 at `base`. Columns of `frame` are
// the data (y, y') of y1 and y2.
struct DevelopedGerm {
  cplx base{};
  Mat2 frame = Mat2::Identity();

  ProjPoint value() const;
};

// Germ with D(base) = 0 and D'(base) = 1.
DevelopedGerm standard_germ(cplx base);

DevelopedGerm develop_along(const Potential& potential, const DevelopedGerm& germ, const surface::Path& path,
                            const OdeTolerance& tol = {});
DevelopedGerm develop_along(const quaddiff::ParabolicQD& qd, const DevelopedGerm& germ, const surface::Path& path,
                            const OdeTolerance& tol = {});

// Mobius map g with D_after = g(D_before) when the germ is continued around a
// loop whose transfer matrix is `loop`.
repvar::Mobius deck_action(const DevelopedGerm& germ, const Mat2& loop);

struct SchwarzianReport {
  double max_residual = 0.0;
  std::vector<cplx> sample_points;
  std::vector<double> residuals;          // one per evaluated sample
  std::vector<std::size_t> skipped;       // sample indices too close to a pole of D'
  double fd_rel_step = 0.0;
};

inline constexpr double kSchwarzianFdRelStep = 1e-4;

// Compares the Schwarzian derivative of the continued developing map with Phi
// at `samples` points spread evenly along the path. D'' / D' is read off the
// transported frame; its derivative uses a 5-point central stencil with step
// fd_rel_step times the local clearance.
SchwarzianReport schwarzian_residual(const Potential& potential, const surface::Path& path, std::size_t samples,
                                     const OdeTolerance& tol = {}, double fd_rel_step = kSchwarzianFdRelStep);
SchwarzianReport schwarzian_residual(const Potential& potential, const DevelopedGerm& germ,
                                     const surface::Path& path, std::size_t samples, const OdeTolerance& tol = {},
                                     double fd_rel_step = kSchwarzianFdRelStep);

}  // namespace holo::monodromy
