#include "holo/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "holo/error.hpp"

namespace holo::surface {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

cplx arc_point(const Arc& a, double phi) { return a.center + a.radius * std::polar(1.0, phi); }

double wrap_to_pi(double x) { return std::remainder(x, 2.0 * kPi); }

}  // namespace

cplx piece_start(const PathPiece& piece) {
  return std::visit(overloaded{[](const Segment& s) { return s.from; },
                               [](const Arc& a) { return arc_point(a, a.start_angle); }},
                    piece);
}

cplx piece_end(const PathPiece& piece) {
  return std::visit(overloaded{[](const Segment& s) { return s.to; },
                               [](const Arc& a) { return arc_point(a, a.start_angle + a.sweep); }},
                    piece);
}

double piece_length(const PathPiece& piece) {
  return std::visit(overloaded{[](const Segment& s) { return std::abs(s.to - s.from); },
                               [](const Arc& a) { return a.radius * std::abs(a.sweep); }},
                    piece);
}

PathPiece reversed(const PathPiece& piece) {
  return std::visit(overloaded{[](const Segment& s) -> PathPiece { return Segment{s.to, s.from}; },
                               [](const Arc& a) -> PathPiece {
                                 return Arc{a.center, a.radius, a.start_angle + a.sweep, -a.sweep};
                               }},
                    piece);
}

double piece_distance(const PathPiece& piece, cplx p) {
  return std::visit(
      overloaded{
          [p](const Segment& s) {
            const cplx d = s.to - s.from;
            const double len2 = std::norm(d);
            if (len2 == 0.0) return std::abs(p - s.from);
            const double t = std::clamp(std::real((p - s.from) * std::conj(d)) / len2, 0.0, 1.0);
            return std::abs(p - (s.from + t * d));
          },
          [p](const Arc& a) {
            const cplx rel = p - a.center;
            const double to_ends = std::min(std::abs(p - arc_point(a, a.start_angle)),
                                            std::abs(p - arc_point(a, a.start_angle + a.sweep)));
            if (std::abs(a.sweep) >= 2.0 * kPi) return std::abs(std::abs(rel) - a.radius);
            if (rel == cplx{}) return a.radius;
            // Is the direction of p inside the swept angular range?
            const double lo = std::min(a.start_angle, a.start_angle + a.sweep);
            const double offset = std::fmod(std::arg(rel) - lo + 8.0 * kPi, 2.0 * kPi);
            if (offset <= std::abs(a.sweep)) return std::abs(std::abs(rel) - a.radius);
            return to_ends;
          }},
      piece);
}

cplx Path::start() const { return pieces.empty() ? cplx{} : piece_start(pieces.front()); }

cplx Path::end() const { return pieces.empty() ? cplx{} : piece_end(pieces.back()); }

double Path::length() const {
  double total = 0.0;
  for (const auto& p : pieces) total += piece_length(p);
  return total;
}

double Path::distance_to(cplx p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& piece : pieces) best = std::min(best, piece_distance(piece, p));
  return best;
}

Path Path::reversed() const {
  Path out;
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) out.pieces.push_back(surface::reversed(*it));
  return out;
}

Path Path::then(const Path& next) const {
  Path out = *this;
  out.pieces.insert(out.pieces.end(), next.pieces.begin(), next.pieces.end());
  return out;
}

std::vector<cplx> Path::sample(double spacing) const {
  std::vector<cplx> pts;
  if (pieces.empty()) return pts;
  pts.push_back(start());
  for (const auto& piece : pieces) {
    const double len = piece_length(piece);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    for (int k = 1; k <= steps; ++k) {
      const double t = static_cast<double>(k) / steps;
      pts.push_back(std::visit(overloaded{[t](const Segment& s) { return s.from + t * (s.to - s.from); },
                                          [t](const Arc& a) { return arc_point(a, a.start_angle + t * a.sweep); }},
                               piece));
    }
  }
  return pts;
}

namespace {

PathPiece sub_piece(const PathPiece& piece, double t0, double t1) {
  return std::visit(overloaded{[=](const Segment& s) -> PathPiece {
                                 const cplx d = s.to - s.from;
                                 return Segment{s.from + t0 * d, s.from + t1 * d};
                               },
                               [=](const Arc& a) -> PathPiece {
                                 return Arc{a.center, a.radius, a.start_angle + t0 * a.sweep, (t1 - t0) * a.sweep};
                               }},
                    piece);
}

}  // namespace

Path Path::slice(double f0, double f1) const {
  Path out;
  const double total = length();
  if (pieces.empty() || total == 0.0) return out;
  const double s0 = std::clamp(f0, 0.0, 1.0) * total;
  const double s1 = std::clamp(f1, 0.0, 1.0) * total;
  double offset = 0.0;
  for (const auto& piece : pieces) {
    const double len = piece_length(piece);
    const double lo = std::max(s0, offset);
    const double hi = std::min(s1, offset + len);
    if (len > 0.0 && hi > lo) out.pieces.push_back(sub_piece(piece, (lo - offset) / len, (hi - offset) / len));
    offset += len;
  }
  return out;
}

cplx Path::point_at(double fraction) const {
  if (pieces.empty()) return {};
  const double total = length();
  const double target = std::clamp(fraction, 0.0, 1.0) * total;
  double offset = 0.0;
  for (const auto& piece : pieces) {
    const double len = piece_length(piece);
    if (target <= offset + len && len > 0.0) {
      return piece_start(sub_piece(piece, (target - offset) / len, 1.0));
    }
    offset += len;
  }
  return end();
}

Path straight(cplx from, cplx to) { return Path{{Segment{from, to}}}; }

Path circle(cplx center, double radius, double start_angle, double sweep) {
  return Path{{Arc{center, radius, start_angle, sweep}}};
}

double winding_number(const Path& path, cplx p) {
  const double clearance = path.distance_to(p);
  if (!(clearance > 0.0)) {
    throw Error(ErrorKind::GeometryError, "winding number requested about a point on the path");
  }
  // Chords of length <= clearance/4 subtend well under pi/2 at p.
  const auto pts = path.sample(0.25 * clearance);
  double total = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    total += wrap_to_pi(std::arg(pts[k] - p) - std::arg(pts[k - 1] - p));
  }
  return total / (2.0 * kPi);
}

}  // namespace holo::surface
