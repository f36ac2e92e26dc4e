#pragma once

#include <cstdint>
#include <vector>

#include "holo/types.hpp"

// Local model of the compactified suspension near a puncture: the Riccati
// foliation dv/du = -1 / (2 pi i u) on (disk minus 0) x C, and the gluing map
// from the quotient of H x CP1 by (tau, z) ~ (tau + 1, z + 1).
namespace holo::foliation {

struct LeafState {
  cplx u{0.5, 0.0};
  cplx v{};
  double branch = 0.0;  // accumulated argument of u along the transport
};

struct GlueCoords {
  cplx tau{0.0, 1.0};
  cplx z{};
};

struct TransportResult {
  LeafState state;
  double numeric_residual = 0.0;  // |v_closed_form - v_integrated|
};

// Follows the leaf through `start` over the polyline u_path (u_path.front()
// must equal start.u): v = v0 - (log|u/u0| + i * dArg) / (2 pi i).
// Consecutive samples must turn arg(u) by less than pi/2.
TransportResult leaf_transport(const LeafState& start, const std::vector<cplx>& u_path);

// Closed form v -> v - k with the branch advanced by 2 pi k.
LeafState leaf_loop_monodromy(const LeafState& start, long k);

// Integrates the leaf equation numerically |k| times around the circle
// |u| = |start.u| and returns the endpoint.
LeafState leaf_loop_numeric(const LeafState& start, long k, std::size_t samples_per_turn = 64);

// Polyline around the circle of radius |u0| starting at u0, counterclockwise
// for positive turns.
std::vector<cplx> circle_path(cplx u0, double turns, std::size_t samples_per_turn = 64);

struct GluedPoint {
  cplx u;
  cplx v;
};

// (tau, z) -> (exp(2 pi i tau), z - tau).
GluedPoint glue(const GlueCoords& g);

struct ConjugacySample {
  cplx z;       // horizontal leaf {z = const}
  cplx tau_from;
  cplx tau_to;
};

struct ConjugacyReport {
  std::size_t samples = 0;
  std::size_t points_checked = 0;
  double max_residual = 0.0;  // max |2 pi i u dv/du + 1|
  double max_diagonal_v = 0.0;  // max |v| over images of the diagonal section tau = z
  bool passed = false;
  double tol = 0.0;
};

// Pushes each horizontal leaf through `glue` at points_per_sample positions
// along tau_from -> tau_to and differences the image curve to test the leaf
// equation. Also evaluates the diagonal section at the same taus.
ConjugacyReport conjugacy_check(const std::vector<ConjugacySample>& samples, double tol,
                                std::size_t points_per_sample = 16);

// Seeded random leaves with Im(tau) in [0.1, 2].
std::vector<ConjugacySample> random_leaves(std::size_t count, std::uint64_t seed);

}  // namespace holo::foliation
