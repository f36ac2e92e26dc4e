#include "holo/foliation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <boost/numeric/odeint.hpp>

#include "holo/error.hpp"

namespace holo::foliation {

namespace {

namespace odeint = boost::numeric::odeint;

constexpr double kMaxTurnPerStep = kPi / 2.0;

void check_in_disk(cplx u) {
  if (u == cplx{}) throw Error(ErrorKind::SingularFiber, "path meets the invariant fiber u = 0");
  if (!(std::abs(u) < 1.0)) throw Error(ErrorKind::OutOfDomain, "|u| must stay below 1");
}

// v along the chord u_a -> u_b of dv/du = -1/(2 pi i u), by adaptive RK.
cplx integrate_chord(cplx u_a, cplx u_b, cplx v_a) {
  using State = std::array<double, 2>;
  const cplx du = u_b - u_a;
  auto rhs = [&](const State&, State& dxdt, double s) {
    const cplx dv = -du / (kTwoPiI * (u_a + s * du));
    dxdt = {dv.real(), dv.imag()};
  };
  State x{v_a.real(), v_a.imag()};
  odeint::integrate_adaptive(odeint::make_controlled(1e-14, 1e-13, odeint::runge_kutta_dopri5<State>()), rhs, x,
                             0.0, 1.0, 1e-2);
  return {x[0], x[1]};
}

}  // namespace

TransportResult leaf_transport(const LeafState& start, const std::vector<cplx>& u_path) {
  check_in_disk(start.u);
  TransportResult out;
  out.state = start;
  if (u_path.empty()) return out;
  if (std::abs(u_path.front() - start.u) > 1e-14) {
    throw Error(ErrorKind::GeometryError, "u_path must start at the leaf state's u");
  }
  double turned = 0.0;
  cplx v_numeric = start.v;
  for (std::size_t k = 1; k < u_path.size(); ++k) {
    check_in_disk(u_path[k]);
    const double dphi = std::arg(u_path[k] / u_path[k - 1]);
    if (!(std::abs(dphi) < kMaxTurnPerStep)) {
      throw Error(ErrorKind::PathTooCoarse, "consecutive samples turn arg(u) by pi/2 or more");
    }
    turned += dphi;
    v_numeric = integrate_chord(u_path[k - 1], u_path[k], v_numeric);
  }
  const cplx log_ratio(std::log(std::abs(u_path.back()) / std::abs(start.u)), turned);
  out.state.u = u_path.back();
  out.state.v = start.v - log_ratio / kTwoPiI;
  out.state.branch = start.branch + turned;
  out.numeric_residual = std::abs(out.state.v - v_numeric);
  return out;
}

LeafState leaf_loop_monodromy(const LeafState& start, long k) {
  check_in_disk(start.u);
  LeafState out = start;
  out.v = start.v - static_cast<double>(k);
  out.branch = start.branch + 2.0 * kPi * static_cast<double>(k);
  return out;
}

std::vector<cplx> circle_path(cplx u0, double turns, std::size_t samples_per_turn) {
  const std::size_t steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(turns) * samples_per_turn)));
  std::vector<cplx> pts;
  pts.reserve(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) {
    pts.push_back(u0 * std::polar(1.0, 2.0 * kPi * turns * static_cast<double>(j) / static_cast<double>(steps)));
  }
  pts.back() = u0 * std::polar(1.0, 2.0 * kPi * turns);
  return pts;
}

LeafState leaf_loop_numeric(const LeafState& start, long k, std::size_t samples_per_turn) {
  check_in_disk(start.u);
  if (k == 0) return start;
  const auto path = circle_path(start.u, static_cast<double>(k), samples_per_turn);
  cplx v = start.v;
  double turned = 0.0;
  for (std::size_t j = 1; j < path.size(); ++j) {
    v = integrate_chord(path[j - 1], path[j], v);
    turned += std::arg(path[j] / path[j - 1]);
  }
  LeafState out;
  out.u = start.u;
  out.v = v;
  out.branch = start.branch + turned;
  return out;
}

GluedPoint glue(const GlueCoords& g) {
  if (!(g.tau.imag() > 0.0)) throw Error(ErrorKind::OutOfDomain, "Im(tau) must be positive");
  return {std::exp(kTwoPiI * g.tau), g.z - g.tau};
}

ConjugacyReport conjugacy_check(const std::vector<ConjugacySample>& samples, double tol,
                                std::size_t points_per_sample) {
  ConjugacyReport report;
  report.tol = tol;
  report.samples = samples.size();
  constexpr double h = 1e-3;
  for (const auto& s : samples) {
    for (std::size_t j = 0; j < points_per_sample; ++j) {
      const double t = points_per_sample == 1 ? 0.5 : static_cast<double>(j) / static_cast<double>(points_per_sample - 1);
      const cplx tau = s.tau_from + t * (s.tau_to - s.tau_from);
      // Derivatives of the image curve in tau along the leaf, 5-point stencil.
      std::array<GluedPoint, 5> img{};
      for (int k = -2; k <= 2; ++k) img[static_cast<std::size_t>(k + 2)] = glue({tau + static_cast<double>(k) * h, s.z});
      const cplx du = (-img[4].u + 8.0 * img[3].u - 8.0 * img[1].u + img[0].u) / (12.0 * h);
      const cplx dv = (-img[4].v + 8.0 * img[3].v - 8.0 * img[1].v + img[0].v) / (12.0 * h);
      const cplx u = img[2].u;
      const double residual = std::abs(kTwoPiI * u * (dv / du) + 1.0);
      report.max_residual = std::max(report.max_residual, residual);
      report.max_diagonal_v = std::max(report.max_diagonal_v, std::abs(glue({tau, tau}).v));
      ++report.points_checked;
    }
  }
  report.passed = report.max_residual < tol && report.max_diagonal_v == 0.0;
  return report;
}

std::vector<ConjugacySample> random_leaves(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-1.0, 2.0);
  std::uniform_real_distribution<double> im(0.1, 2.0);
  std::uniform_real_distribution<double> zc(-5.0, 5.0);
  std::vector<ConjugacySample> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    ConjugacySample s;
    s.z = cplx(zc(rng), zc(rng));
    s.tau_from = cplx(re(rng), im(rng));
    s.tau_to = cplx(re(rng), im(rng));
    out.push_back(s);
  }
  return out;
}

}  // namespace holo::foliation
