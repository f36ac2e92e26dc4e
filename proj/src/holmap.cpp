#include "holo/holmap.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "holo/error.hpp"

namespace holo::holmap {

namespace {

double frobenius(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.norm(); }

std::vector<double> singular_values_of(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

std::size_t rank_of(const std::vector<double>& sv, double threshold) {
  if (sv.empty() || !(sv.front() > 0.0)) return 0;
  return static_cast<std::size_t>(
      std::count_if(sv.begin(), sv.end(), [&](double s) { return s > threshold * sv.front(); }));
}

bool is_domain_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateConfiguration:
    case ErrorKind::GeometryError:
    case ErrorKind::ValidityError:
    case ErrorKind::PoleOnPath:
    case ErrorKind::StiffnessFailure:
    case ErrorKind::ConstraintSingular:
      return true;
    default:
      return false;
  }
}

double distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace

std::size_t punctures_for_dimension(std::size_t dimension) {
  if (dimension % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "chart dimension must be even");
  return dimension / 2 + 3;
}

CharacterEvaluation character_map(const quaddiff::ParameterPoint& theta, const Settings& settings) {
  const std::size_t n = punctures_for_dimension(theta.dimension());
  const auto qd = quaddiff::from_chart(theta, n, settings.basepoint);
  const auto loops = surface::peripheral_loops(qd.config);

  CharacterEvaluation out;
  out.theta = theta;
  out.basepoint = qd.config.basepoint;
  std::vector<Mat2> lifts;
  for (const auto& loop : loops) {
    const auto raw = monodromy::loop_monodromy(qd, loop, settings.ode);
    const cplx tr = raw.matrix.trace();
    out.raw_traces.push_back(tr);
    out.max_parabolic_defect = std::max(out.max_parabolic_defect, std::abs(tr * tr - 4.0));
    out.max_det_drift = std::max(out.max_det_drift, raw.det_drift);
    out.loop_order.push_back(loop.winds_around);
    try {
      out.monodromies.push_back(monodromy::normalize_parabolic_lift(raw, settings.parabolic_tol));
    } catch (const Error& e) {
      throw Error(ErrorKind::ValidityError,
                  "parabolicity failed at puncture " + std::to_string(loop.winds_around) + " (" + e.what() + ")");
    }
    lifts.push_back(out.monodromies.back().matrix);
  }

  // The absolute defect grows with the integration error times the size of
  // the partial products, so validity is judged on the relative defect.
  out.relation = repvar::relation_check(lifts, settings.relation_tol);
  if (out.relation.relative_defect > settings.relation_tol) {
    std::ostringstream msg;
    msg << std::scientific << std::setprecision(3) << "relation check failed, defect " << out.relation.defect
        << " (relative " << out.relation.relative_defect << ")";
    throw Error(ErrorKind::ValidityError, msg.str());
  }
  out.relation.kind = out.relation.nearest;
  for (std::size_t i = 0; i < lifts.size(); ++i) {
    for (std::size_t j = i + 1; j < lifts.size(); ++j) {
      out.commutator_gap = std::max(out.commutator_gap, std::abs(repvar::commutator_trace(lifts[i], lifts[j]) - 2.0));
    }
  }
  out.nonelementary = repvar::is_nonelementary(lifts, settings.commutator_tol);
  if (!out.nonelementary) throw Error(ErrorKind::ValidityError, "non-elementarity check failed");
  out.character = repvar::trace_character(lifts);
  return out;
}

JacobianReport rank_report(const Eigen::MatrixXcd& jacobian, double threshold) {
  if (jacobian.size() == 0) throw Error(ErrorKind::EmptyInput, "empty Jacobian");
  if (!jacobian.allFinite()) throw Error(ErrorKind::EmptyInput, "Jacobian has non-finite entries");
  JacobianReport r;
  r.jacobian = jacobian;
  r.threshold = threshold;
  r.singular_values = singular_values_of(jacobian);
  r.rank = rank_of(r.singular_values, threshold);
  r.condition_ratio = r.singular_values.front() > 0.0 ? r.singular_values.back() / r.singular_values.front() : 0.0;
  return r;
}

JacobianReport jacobian_fd(const VectorMap& f, const std::vector<cplx>& theta, double fd_step, double threshold) {
  if (theta.empty()) throw Error(ErrorKind::EmptyInput, "zero-dimensional domain");
  if (!(fd_step > 0.0)) throw Error(ErrorKind::ConfigError, "fd_step must be positive");
  const auto k = static_cast<Eigen::Index>(theta.size());
  Eigen::MatrixXcd holo_part, anti_part;
  for (Eigen::Index col = 0; col < k; ++col) {
    std::array<std::vector<cplx>, 4> values;  // +h, -h, +ih, -ih
    const std::array<cplx, 4> shifts{cplx(fd_step, 0.0), cplx(-fd_step, 0.0), cplx(0.0, fd_step),
                                     cplx(0.0, -fd_step)};
    for (std::size_t s = 0; s < 4; ++s) {
      auto point = theta;
      point[static_cast<std::size_t>(col)] += shifts[s];
      try {
        values[s] = f(point);
      } catch (const Error& e) {
        if (is_domain_error(e.kind())) {
          throw Error(ErrorKind::StencilOutOfDomain, std::string("stencil point left the domain: ") + e.what());
        }
        throw;
      }
    }
    const auto m = static_cast<Eigen::Index>(values[0].size());
    if (col == 0) {
      holo_part.resize(m, k);
      anti_part.resize(m, k);
    }
    for (Eigen::Index row = 0; row < m; ++row) {
      const auto r = static_cast<std::size_t>(row);
      const cplx dx = (values[0][r] - values[1][r]) / (2.0 * fd_step);
      const cplx dy = (values[2][r] - values[3][r]) / (2.0 * fd_step);
      holo_part(row, col) = 0.5 * (dx - cplx(0.0, 1.0) * dy);
      anti_part(row, col) = 0.5 * (dx + cplx(0.0, 1.0) * dy);
    }
  }
  JacobianReport r = rank_report(holo_part, threshold);
  r.theta = theta;
  r.fd_step = fd_step;
  r.antiholomorphic = anti_part;
  const double jn = frobenius(holo_part);
  r.cr_defect = jn > 0.0 ? frobenius(anti_part) / jn : frobenius(anti_part);
  return r;
}

Settings pinned_settings(const quaddiff::ParameterPoint& theta, const Settings& settings) {
  Settings pinned = settings;
  if (!pinned.basepoint) {
    const std::size_t n = punctures_for_dimension(theta.dimension());
    pinned.basepoint = quaddiff::from_chart(theta, n).config.basepoint;
  }
  return pinned;
}

VectorMap character_vector_map(std::size_t n, const Settings& settings) {
  return [n, settings](const std::vector<cplx>& t) {
    quaddiff::ParameterPoint p{t};
    if (p.dimension() != quaddiff::ParameterPoint::dimension_for(n)) {
      throw Error(ErrorKind::DimensionMismatch, "chart point has the wrong dimension");
    }
    return character_map(p, settings).character.coordinates();
  };
}

JacobianReport jacobian_fd(const quaddiff::ParameterPoint& theta, const Settings& settings) {
  const std::size_t n = punctures_for_dimension(theta.dimension());
  const Settings pinned = pinned_settings(theta, settings);
  return jacobian_fd(character_vector_map(n, pinned), theta.theta, settings.fd_step, settings.rank_threshold);
}

PairOutcome compare_pair(const quaddiff::ParameterPoint& a, const quaddiff::ParameterPoint& b, double sigma_min,
                         const Settings& settings, double* ratio) {
  const double dtheta = distance(a.theta, b.theta);
  if (dtheta == 0.0) return PairOutcome::Skipped;
  const auto ca = character_map(a, settings).character;
  const auto cb = character_map(b, settings).character;
  const double dchar = repvar::character_distance(ca, cb);
  if (ratio) *ratio = dchar / dtheta;
  return dchar >= 0.5 * sigma_min * dtheta ? PairOutcome::Separated : PairOutcome::Violation;
}

ProbeReport injectivity_probe(const quaddiff::ParameterPoint& theta, double radius, std::size_t samples,
                              std::uint64_t seed, const Settings& settings) {
  ProbeReport report;
  report.seed = seed;
  report.radius = radius;
  report.requested = samples;
  const Settings pinned = pinned_settings(theta, settings);
  const auto jac = jacobian_fd(theta, pinned);
  report.sigma_min = jac.singular_values.back();
  report.min_ratio = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t dim = theta.dimension();
  auto draw = [&]() {
    // Uniform in the ball of C^dim = R^(2 dim).
    std::vector<cplx> dir(dim);
    double norm2 = 0.0;
    for (auto& d : dir) {
      d = cplx(gauss(rng), gauss(rng));
      norm2 += std::norm(d);
    }
    const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(2 * dim)) / std::sqrt(norm2);
    quaddiff::ParameterPoint p = theta;
    for (std::size_t k = 0; k < dim; ++k) p.theta[k] += r * dir[k];
    return p;
  };

  const std::size_t max_draws = 100 * std::max<std::size_t>(samples, 1);
  std::size_t draws = 0;
  while (report.evaluated + report.skipped < samples && draws < max_draws) {
    ++draws;
    const auto a = draw();
    const auto b = draw();
    double ratio = 0.0;
    PairOutcome outcome;
    try {
      outcome = compare_pair(a, b, report.sigma_min, pinned, &ratio);
    } catch (const Error& e) {
      if (!is_domain_error(e.kind())) throw;
      ++report.resampled;
      continue;
    }
    if (outcome == PairOutcome::Skipped) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    report.min_ratio = std::min(report.min_ratio, ratio);
    if (outcome == PairOutcome::Violation) ++report.violations;
  }
  if (report.evaluated == 0) report.min_ratio = 0.0;
  return report;
}

FiberReport fiber_probe(const JacobianReport& full, std::size_t n, double threshold) {
  if (n <= 3) throw Error(ErrorKind::FiberZeroDimensional, "fibers of the forgetful map are points for n = 3");
  const auto m = static_cast<Eigen::Index>(n - 3);
  if (full.jacobian.cols() != 2 * m) throw Error(ErrorKind::DimensionMismatch, "Jacobian has the wrong width");
  FiberReport r;
  r.fiber_dimension = n - 3;
  r.accessory_singular_values = singular_values_of(full.jacobian.rightCols(m));
  r.moduli_singular_values = singular_values_of(full.jacobian.leftCols(m));
  r.accessory_rank = rank_of(r.accessory_singular_values, threshold);
  r.moduli_rank = rank_of(r.moduli_singular_values, threshold);
  return r;
}

FiberReport fiber_probe(const quaddiff::ParameterPoint& theta, const Settings& settings) {
  const std::size_t n = punctures_for_dimension(theta.dimension());
  if (n <= 3) throw Error(ErrorKind::FiberZeroDimensional, "fibers of the forgetful map are points for n = 3");
  return fiber_probe(jacobian_fd(theta, settings), n, settings.rank_threshold);
}

std::vector<quaddiff::ParameterPoint> cross_grid(const quaddiff::ParameterPoint& center, double moduli_radius,
                                                 double accessory_radius) {
  const std::size_t m = center.dimension() / 2;
  std::vector<quaddiff::ParameterPoint> grid{center};
  const std::array<cplx, 4> dirs{cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)};
  for (const auto& d : dirs) {
    auto p = center;
    for (std::size_t k = 0; k < m; ++k) {
      p.theta[k] += moduli_radius * d;
      p.theta[m + k] += accessory_radius * d;
    }
    grid.push_back(p);
  }
  return grid;
}

}  // namespace holo::holmap
