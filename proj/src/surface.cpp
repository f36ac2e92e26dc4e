#include "holo/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "holo/error.hpp"

namespace holo::surface {

namespace {

double max_modulus(const std::vector<cplx>& pts) {
  double m = 0.0;
  for (const auto& p : pts) m = std::max(m, std::abs(p));
  return m;
}

double enclosing_radius(const std::vector<cplx>& finite, cplx basepoint) {
  return 2.0 * std::max(max_modulus(finite), std::abs(basepoint)) + 1.0;
}

std::vector<cplx> finite_of(const std::vector<ProjPoint>& punctures) {
  std::vector<cplx> out;
  for (const auto& p : punctures) {
    if (p.is_finite()) out.push_back(p.z);
  }
  return out;
}

bool has_infinity(const std::vector<ProjPoint>& punctures) {
  return std::any_of(punctures.begin(), punctures.end(), [](const ProjPoint& p) { return p.infinite; });
}

// Direction of the tail leading to the enclosing circle: bisector of the
// angular gap that straddles the branch cut of arg at pi.
double infinity_tail_angle(const std::vector<cplx>& finite, cplx basepoint) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& p : finite) {
    const double a = std::arg(p - basepoint);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  return 0.5 * (hi + lo + 2.0 * kPi);
}

// Point where the ray from b in direction angle meets |z| = radius (|b| < radius).
cplx ray_exit(cplx b, double angle, double radius) {
  const cplx d = std::polar(1.0, angle);
  const double bd = std::real(std::conj(b) * d);
  const double s = -bd + std::sqrt(bd * bd - std::norm(b) + radius * radius);
  return b + s * d;
}

void validate_distinct(const std::vector<ProjPoint>& punctures) {
  if (punctures.size() < 3) {
    throw Error(ErrorKind::TooFewPunctures, "need at least 3 punctures, got " + std::to_string(punctures.size()));
  }
  for (std::size_t i = 0; i < punctures.size(); ++i) {
    for (std::size_t j = i + 1; j < punctures.size(); ++j) {
      if (chordal_distance(punctures[i], punctures[j]) < 1e-12) {
        throw Error(ErrorKind::DegenerateConfiguration,
                    "punctures " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
  for (const auto& p : punctures) {
    if (p.is_finite() && !(std::isfinite(p.z.real()) && std::isfinite(p.z.imag()))) {
      throw Error(ErrorKind::DegenerateConfiguration, "non-finite puncture coordinate");
    }
  }
}

std::vector<double> lasso_radii(const std::vector<ProjPoint>& punctures, cplx basepoint) {
  const auto finite = finite_of(punctures);
  std::vector<double> radii(punctures.size(), 0.0);
  for (std::size_t i = 0; i < punctures.size(); ++i) {
    if (punctures[i].infinite) {
      radii[i] = enclosing_radius(finite, basepoint);
      continue;
    }
    double d = std::abs(punctures[i].z - basepoint);
    for (const auto& q : finite) {
      if (q != punctures[i].z) d = std::min(d, std::abs(q - punctures[i].z));
    }
    radii[i] = 0.25 * d;
  }
  return radii;
}

}  // namespace

std::size_t PunctureConfig::infinity_index() const {
  for (std::size_t i = 0; i < punctures.size(); ++i) {
    if (punctures[i].infinite) return i;
  }
  return punctures.size();
}

std::vector<cplx> PunctureConfig::finite_points() const { return finite_of(punctures); }

double basepoint_clearance(const std::vector<ProjPoint>& punctures, cplx basepoint) {
  const auto finite = finite_of(punctures);
  double clearance = std::numeric_limits<double>::infinity();
  for (const auto& p : finite) clearance = std::min(clearance, std::abs(p - basepoint));
  if (!(clearance > 0.0)) return 0.0;
  for (std::size_t i = 0; i < finite.size(); ++i) {
    const Segment tail{basepoint, finite[i]};
    for (std::size_t j = 0; j < finite.size(); ++j) {
      if (j != i) clearance = std::min(clearance, piece_distance(tail, finite[j]));
    }
  }
  if (has_infinity(punctures)) {
    const double angle = infinity_tail_angle(finite, basepoint);
    const Segment tail{basepoint, ray_exit(basepoint, angle, enclosing_radius(finite, basepoint))};
    for (const auto& p : finite) clearance = std::min(clearance, piece_distance(tail, p));
  }
  return clearance;
}

cplx default_basepoint(const std::vector<ProjPoint>& punctures) {
  const auto finite = finite_of(punctures);
  double xmin = finite.front().real(), xmax = xmin;
  double ymin = finite.front().imag(), ymax = ymin;
  for (const auto& p : finite) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1.0});
  const double pad = 0.5 * span;
  constexpr int kGrid = 61;
  cplx best = finite.front() + cplx(pad, pad);
  double best_score = -1.0;
  for (int a = 0; a < kGrid; ++a) {
    for (int b = 0; b < kGrid; ++b) {
      const cplx cand((xmin - pad) + (xmax - xmin + 2.0 * pad) * a / (kGrid - 1),
                      (ymin - pad) + (ymax - ymin + 2.0 * pad) * b / (kGrid - 1));
      const double score = basepoint_clearance(punctures, cand);
      if (score > best_score) {
        best_score = score;
        best = cand;
      }
    }
  }
  if (!(best_score > kMinClearance)) {
    throw Error(ErrorKind::GeometryError, "no admissible basepoint found");
  }
  return best;
}

PunctureConfig make_config(std::vector<ProjPoint> punctures, std::optional<cplx> basepoint) {
  validate_distinct(punctures);
  PunctureConfig config;
  config.punctures = std::move(punctures);
  if (basepoint) {
    if (basepoint_clearance(config.punctures, *basepoint) <= kMinClearance) {
      throw Error(ErrorKind::GeometryError, "basepoint lies on or too close to a puncture or lasso tail");
    }
    config.basepoint = *basepoint;
  } else {
    config.basepoint = default_basepoint(config.punctures);
  }
  config.loop_radius = lasso_radii(config.punctures, config.basepoint);
  return config;
}

std::pair<PunctureConfig, repvar::Mobius> normalize_punctures(const std::vector<ProjPoint>& raw,
                                                              std::optional<cplx> basepoint) {
  validate_distinct(raw);
  const ProjPoint& p0 = raw[0];
  const ProjPoint& p1 = raw[1];
  const ProjPoint& p2 = raw[2];
  // Cross-ratio map z -> [(z - p0)(p1 - p2)] / [(z - p2)(p1 - p0)], with the
  // factors containing an infinite point dropped.
  Mat2 m;
  if (p0.infinite) {
    m << 0.0, p1.z - p2.z, 1.0, -p2.z;
  } else if (p1.infinite) {
    m << 1.0, -p0.z, 1.0, -p2.z;
  } else if (p2.infinite) {
    m << 1.0, -p0.z, 0.0, p1.z - p0.z;
  } else {
    m << p1.z - p2.z, -p0.z * (p1.z - p2.z), p1.z - p0.z, -p2.z * (p1.z - p0.z);
  }
  const repvar::Mobius mobius(m);
  std::vector<ProjPoint> out;
  out.reserve(raw.size());
  out.push_back(ProjPoint::finite(0.0));
  out.push_back(ProjPoint::finite(1.0));
  out.push_back(ProjPoint::infinity());
  for (std::size_t i = 3; i < raw.size(); ++i) out.push_back(mobius.apply(raw[i]));
  return {make_config(std::move(out), basepoint), mobius};
}

std::vector<LoopPath> peripheral_loops(const PunctureConfig& config) {
  const auto finite = config.finite_points();
  const cplx b = config.basepoint;
  const std::size_t n = config.n();
  if (config.loop_radius.size() != n) {
    throw Error(ErrorKind::GeometryError, "loop_radius must have one entry per puncture");
  }
  if (basepoint_clearance(config.punctures, b) <= kMinClearance) {
    throw Error(ErrorKind::GeometryError, "basepoint is a puncture or a lasso tail hits a puncture");
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (config.punctures[i].is_finite()) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const cplx di = config.punctures[i].z - b;
    const cplx dj = config.punctures[j].z - b;
    if (std::arg(di) != std::arg(dj)) return std::arg(di) < std::arg(dj);
    return std::abs(di) < std::abs(dj);
  });

  std::vector<LoopPath> loops;
  loops.reserve(n);
  for (std::size_t i : order) {
    const cplx p = config.punctures[i].z;
    const double r = config.loop_radius[i];
    double limit = std::abs(p - b);
    for (const auto& q : finite) {
      if (q != p) limit = std::min(limit, std::abs(q - p));
    }
    if (!(r > 0.0) || !(r < 0.5 * limit)) {
      throw Error(ErrorKind::GeometryError, "loop radius of puncture " + std::to_string(i) + " violates clearance");
    }
    const cplx u = (p - b) / std::abs(p - b);
    const cplx tail_end = p - r * u;
    Path path = straight(b, tail_end)
                    .then(circle(p, r, std::arg(-u), 2.0 * kPi))
                    .then(straight(tail_end, b));
    loops.push_back(LoopPath{std::move(path), b, i});
  }

  const std::size_t inf = config.infinity_index();
  if (inf < n) {
    const double radius = config.loop_radius[inf];
    if (!(radius > std::max(max_modulus(finite), std::abs(b)))) {
      throw Error(ErrorKind::GeometryError, "enclosing circle does not contain all finite punctures");
    }
    const double angle = infinity_tail_angle(finite, b);
    const cplx exit = ray_exit(b, angle, radius);
    Path path = straight(b, exit).then(circle(0.0, radius, std::arg(exit), -2.0 * kPi)).then(straight(exit, b));
    loops.push_back(LoopPath{std::move(path), b, inf});
  }
  return loops;
}

cplx winding_reference_point(const PunctureConfig& config, const std::vector<LoopPath>& loops) {
  const cplx b = config.basepoint;
  double rho = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < config.n(); ++i) {
    if (config.punctures[i].is_finite()) {
      rho = std::min(rho, std::abs(config.punctures[i].z - b) - config.loop_radius[i]);
    }
  }
  rho *= 0.5;
  cplx best = b;
  double best_clear = -1.0;
  constexpr int kCandidates = 64;
  for (int k = 0; k < kCandidates; ++k) {
    const cplx q = b + std::polar(rho, 2.0 * kPi * (k + 0.5) / kCandidates);
    double clear = std::numeric_limits<double>::infinity();
    for (const auto& loop : loops) clear = std::min(clear, loop.path.distance_to(q));
    if (clear > best_clear) {
      best_clear = clear;
      best = q;
    }
  }
  return best;
}

double sphere_winding_number(const LoopPath& loop, const PunctureConfig& config, std::size_t j, cplx reference) {
  if (j >= config.n()) throw Error(ErrorKind::InvalidIndex, "puncture index out of range");
  // w - w_j = (p_j - z) / ((z - q)(p_j - q)); for p_j = inf, w = 1/(z - q).
  const double about_reference = winding_number(loop.path, reference);
  if (config.punctures[j].infinite) return -about_reference;
  return winding_number(loop.path, config.punctures[j].z) - about_reference;
}

}  // namespace holo::surface
