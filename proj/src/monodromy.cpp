#include "holo/monodromy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <variant>

#include <boost/numeric/odeint.hpp>

#include "holo/error.hpp"

namespace holo::monodromy {

namespace {

namespace odeint = boost::numeric::odeint;

// Frame Y (2x2 complex, column major) flattened into 8 reals for the stepper.
using State = std::array<double, 8>;

State pack(const Mat2& y) {
  State s{};
  for (int k = 0; k < 4; ++k) {
    s[2 * k] = y.data()[k].real();
    s[2 * k + 1] = y.data()[k].imag();
  }
  return s;
}

Mat2 unpack(const State& s) {
  Mat2 y;
  for (int k = 0; k < 4; ++k) y.data()[k] = cplx(s[2 * k], s[2 * k + 1]);
  return y;
}

// Real parametrization of one piece: z(t) and dz/dt for t in [0, extent].
// Segments use arclength, arcs use the (unsigned) swept angle.
struct Parametrization {
  surface::PathPiece piece;

  double extent() const {
    if (const auto* s = std::get_if<surface::Segment>(&piece)) return std::abs(s->to - s->from);
    return std::abs(std::get<surface::Arc>(piece).sweep);
  }

  void at(double t, cplx& z, cplx& dz) const {
    if (const auto* s = std::get_if<surface::Segment>(&piece)) {
      const cplx u = (s->to - s->from) / std::abs(s->to - s->from);
      z = s->from + t * u;
      dz = u;
      return;
    }
    const auto& a = std::get<surface::Arc>(piece);
    const double sign = a.sweep >= 0.0 ? 1.0 : -1.0;
    const cplx e = std::polar(1.0, a.start_angle + sign * t);
    z = a.center + a.radius * e;
    dz = cplx(0.0, sign) * a.radius * e;
  }
};

constexpr std::size_t kMaxSteps = 5'000'000;

Mat2 transport_piece(const Potential& potential, const surface::PathPiece& piece, const Mat2& start,
                     const OdeTolerance& tol, std::size_t& steps) {
  const Parametrization param{piece};
  const double extent = param.extent();
  if (extent == 0.0) return start;

  auto rhs = [&](const State& x, State& dxdt, double t) {
    cplx z, dz;
    param.at(t, z, dz);
    const cplx q = -0.5 * potential.phi(z) * dz;
    const Mat2 y = unpack(x);
    // d/dt (y, y') = [[0, 1], [-Phi/2, 0]] (y, y') dz/dt
    Mat2 d;
    d.row(0) = y.row(1) * dz;
    d.row(1) = y.row(0) * q;
    dxdt = pack(d);
  };

  auto stepper = odeint::make_controlled(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
  State x = pack(start);
  double t = 0.0;
  double dt = std::min(extent, 1e-2);
  const double min_dt = 1e-14 * std::max(1.0, extent);
  while (extent - t > 1e-15 * extent) {
    if (steps++ > kMaxSteps) throw Error(ErrorKind::StiffnessFailure, "step budget exhausted");
    // try_step advances t and proposes the next dt on success, or shrinks dt
    // and leaves t untouched on failure.
    double trial = std::min(dt, extent - t);
    const auto result = stepper.try_step(rhs, x, t, trial);
    dt = trial;
    if (result != odeint::success && dt < min_dt) {
      throw Error(ErrorKind::StiffnessFailure, "step size underflow");
    }
  }
  return unpack(x);
}

}  // namespace

double Potential::clearance(const surface::Path& path) const {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& p : poles) c = std::min(c, path.distance_to(p));
  return c;
}

Potential potential_of(const quaddiff::ParabolicQD& qd) {
  return Potential{[qd](cplx z) { return quaddiff::evaluate(qd, z); }, qd.config.finite_points()};
}

TransferMatrix integrate_along(const Potential& potential, const surface::Path& path, const OdeTolerance& tol) {
  if (!(tol.rel > 0.0) || !(tol.abs > 0.0)) throw Error(ErrorKind::ConfigError, "ODE tolerances must be positive");
  if (potential.clearance(path) <= kMinPathClearance) {
    throw Error(ErrorKind::PoleOnPath, "path passes through a pole of the potential");
  }
  TransferMatrix out;
  out.start = path.start();
  out.end = path.end();
  out.length = path.length();
  out.tol = tol;
  Mat2 y = Mat2::Identity();
  for (const auto& piece : path.pieces) y = transport_piece(potential, piece, y, tol, out.steps);
  const cplx det = y.determinant();
  out.det_drift = std::abs(det - 1.0);
  out.matrix = y / std::sqrt(det);
  return out;
}

TransferMatrix integrate_along(const quaddiff::ParabolicQD& qd, const surface::Path& path, const OdeTolerance& tol) {
  return integrate_along(potential_of(qd), path, tol);
}

TransferMatrix loop_monodromy(const quaddiff::ParabolicQD& qd, const surface::LoopPath& loop,
                              const OdeTolerance& tol) {
  return integrate_along(qd, loop.path, tol);
}

TransferMatrix normalize_parabolic_lift(const TransferMatrix& m, double tol) {
  const cplx tr = m.matrix.trace();
  if (!(std::abs(tr * tr - 4.0) < tol)) {
    std::ostringstream msg;
    msg << "trace squared differs from 4 by " << std::scientific << std::setprecision(3) << std::abs(tr * tr - 4.0);
    throw Error(ErrorKind::NotParabolic, msg.str());
  }
  if (repvar::distance_from_plus_minus_identity(m.matrix) <= tol) {
    throw Error(ErrorKind::DegenerateParabolic, "matrix is within tolerance of +/- identity");
  }
  TransferMatrix out = m;
  if (tr.real() < 0.0) out.matrix = -m.matrix;
  return out;
}

ProjPoint DevelopedGerm::value() const {
  const cplx y1 = frame(0, 0), y2 = frame(0, 1);
  if (y2 == cplx{}) return ProjPoint::infinity();
  return ProjPoint::finite(y1 / y2);
}

DevelopedGerm standard_germ(cplx base) {
  DevelopedGerm g;
  g.base = base;
  // y1 = z - base, y2 = 1
  g.frame << 0.0, 1.0, 1.0, 0.0;
  return g;
}

DevelopedGerm develop_along(const Potential& potential, const DevelopedGerm& germ, const surface::Path& path,
                            const OdeTolerance& tol) {
  const double scale = germ.frame.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || std::abs(germ.frame.determinant()) < 1e-14 * scale * scale) {
    throw Error(ErrorKind::FrameDegenerate, "frame columns are linearly dependent");
  }
  if (path.empty()) return germ;
  if (std::abs(path.start() - germ.base) > 1e-12 * std::max(1.0, std::abs(germ.base))) {
    throw Error(ErrorKind::GeometryError, "path does not start at the germ's base point");
  }
  const auto transfer = integrate_along(potential, path, tol);
  DevelopedGerm out;
  out.base = path.end();
  out.frame = transfer.matrix * germ.frame;
  return out;
}

DevelopedGerm develop_along(const quaddiff::ParabolicQD& qd, const DevelopedGerm& germ, const surface::Path& path,
                            const OdeTolerance& tol) {
  return develop_along(potential_of(qd), germ, path, tol);
}

repvar::Mobius deck_action(const DevelopedGerm& germ, const Mat2& loop) {
  // Continuation replaces the solution row (y1, y2) by (y1, y2) N with
  // N = Y^{-1} M Y; D = y1/y2 then transforms by the transpose of N.
  const Mat2 n = germ.frame.inverse() * loop * germ.frame;
  return repvar::Mobius(n.transpose());
}

SchwarzianReport schwarzian_residual(const Potential& potential, const surface::Path& path, std::size_t samples,
                                     const OdeTolerance& tol, double fd_rel_step) {
  return schwarzian_residual(potential, standard_germ(path.start()), path, samples, tol, fd_rel_step);
}

SchwarzianReport schwarzian_residual(const Potential& potential, const DevelopedGerm& germ,
                                     const surface::Path& path, std::size_t samples, const OdeTolerance& tol,
                                     double fd_rel_step) {
  SchwarzianReport report;
  report.fd_rel_step = fd_rel_step;
  if (samples == 0 || path.empty()) return report;

  const double length_scale = std::max(path.length(), 1e-3);
  DevelopedGerm current = germ;
  double previous_fraction = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double fraction = samples == 1 ? 0.5 : static_cast<double>(k) / static_cast<double>(samples - 1);
    current = develop_along(potential, current, path.slice(previous_fraction, fraction), tol);
    previous_fraction = fraction;
    const cplx z = current.base;
    report.sample_points.push_back(z);

    double local = length_scale;
    for (const auto& p : potential.poles) local = std::min(local, std::abs(z - p));
    const double h = fd_rel_step * local;

    // g = D''/D' = -2 y2'/y2 at z + j h, j = -2..2.
    std::array<cplx, 5> g{};
    bool skip = false;
    for (int j = -2; j <= 2 && !skip; ++j) {
      const DevelopedGerm probe =
          j == 0 ? current : develop_along(potential, current, surface::straight(z, z + static_cast<double>(j) * h), tol);
      const cplx y2 = probe.frame(0, 1);
      const cplx dy2 = probe.frame(1, 1);
      if (std::abs(y2) < 1e-8 * probe.frame.cwiseAbs().maxCoeff()) {
        skip = true;
        break;
      }
      g[static_cast<std::size_t>(j + 2)] = -2.0 * dy2 / y2;
    }
    if (skip) {
      report.skipped.push_back(k);
      continue;
    }
    const cplx dg = (-g[4] + 8.0 * g[3] - 8.0 * g[1] + g[0]) / (12.0 * h);
    const cplx schwarzian = dg - 0.5 * g[2] * g[2];
    const double r = std::abs(schwarzian - potential.phi(z));
    report.residuals.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
  }
  return report;
}

}  // namespace holo::monodromy
