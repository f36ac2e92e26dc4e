#pragma once

#include <variant>
#include <vector>

#include "holo/types.hpp"

namespace holo::surface {

struct Segment {
  cplx from;
  cplx to;
};

// Circular arc z(phi) = center + radius * exp(i phi), phi from start_angle to
// start_angle + sweep. Positive sweep is counterclockwise.
struct Arc {
  cplx center;
  double radius = 0.0;
  double start_angle = 0.0;
  double sweep = 0.0;
};

using PathPiece = std::variant<Segment, Arc>;

cplx piece_start(const PathPiece& piece);
cplx piece_end(const PathPiece& piece);
double piece_length(const PathPiece& piece);
PathPiece reversed(const PathPiece& piece);

// Distance from p to the point set of the piece.
double piece_distance(const PathPiece& piece, cplx p);

// Piecewise path in the plane. Pieces are assumed to join end to start.
struct Path {
  std::vector<PathPiece> pieces;

  bool empty() const { return pieces.empty(); }
  cplx start() const;
  cplx end() const;
  double length() const;
  double distance_to(cplx p) const;
  Path reversed() const;
  Path then(const Path& next) const;
  // Points along the path no more than `spacing` apart, both ends included.
  std::vector<cplx> sample(double spacing) const;
  // Portion between arclength fractions f0 <= f1 in [0, 1].
  Path slice(double f0, double f1) const;
  cplx point_at(double fraction) const;
};

Path straight(cplx from, cplx to);
Path circle(cplx center, double radius, double start_angle, double sweep);

// Plane winding number of a closed path about p, by accumulated argument.
double winding_number(const Path& path, cplx p);

}  // namespace holo::surface
