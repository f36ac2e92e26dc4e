#include <doctest.h>

#include <random>

#include "holo/error.hpp"
#include "holo/surface.hpp"
#include "oracles.hpp"

using namespace holo;
using holo::surface::make_config;
using holo::surface::normalize_punctures;
using holo::surface::peripheral_loops;

namespace {

std::vector<ProjPoint> finite_points(std::initializer_list<cplx> zs) {
  std::vector<ProjPoint> out;
  for (auto z : zs) out.push_back(ProjPoint::finite(z));
  return out;
}

std::vector<ProjPoint> normalized(std::initializer_list<cplx> moduli) {
  std::vector<ProjPoint> out{ProjPoint::finite(0.0), ProjPoint::finite(1.0), ProjPoint::infinity()};
  for (auto z : moduli) out.push_back(ProjPoint::finite(z));
  return out;
}

void check_loops(const surface::PunctureConfig& cfg) {
  const auto loops = peripheral_loops(cfg);
  REQUIRE(loops.size() == cfg.n());
  const cplx q = surface::winding_reference_point(cfg, loops);
  std::vector<bool> seen(cfg.n(), false);
  for (const auto& loop : loops) {
    CHECK(std::abs(loop.path.start() - cfg.basepoint) < 1e-12);
    CHECK(std::abs(loop.path.end() - cfg.basepoint) < 1e-12);
    seen[loop.winds_around] = true;
    // Plane quadrature, fine enough to resolve the nearest puncture and q.
    double spacing = std::min(1e-3, loop.path.distance_to(q) / 50.0);
    for (const auto& p : cfg.finite_points()) spacing = std::min(spacing, loop.path.distance_to(p) / 50.0);
    const auto samples = loop.path.sample(spacing);
    const double around_q = oracle::quadrature_winding(samples, q);
    for (std::size_t j = 0; j < cfg.n(); ++j) {
      const double w = surface::sphere_winding_number(loop, cfg, j, q);
      const double expected = j == loop.winds_around ? 1.0 : 0.0;
      CHECK(std::abs(w - expected) < 1e-6);
      const double independent =
          cfg.punctures[j].infinite ? -around_q : oracle::quadrature_winding(samples, cfg.punctures[j].z) - around_q;
      CHECK(std::abs(independent - expected) < 1e-3);
    }
    for (const auto& p : cfg.finite_points()) CHECK(loop.path.distance_to(p) > surface::kMinClearance);
  }
  for (bool s : seen) CHECK(s);
  CHECK(loops.back().winds_around == cfg.infinity_index());
}

}  // namespace

TEST_CASE("normalization of an already normalized configuration is the identity") {
  const auto [cfg, m] = normalize_punctures(normalized({cplx(0.3, 0.4)}));
  CHECK(cfg.punctures[0] == ProjPoint::finite(0.0));
  CHECK(cfg.punctures[1] == ProjPoint::finite(1.0));
  CHECK(cfg.punctures[2].infinite);
  CHECK(std::abs(cfg.punctures[3].z - cplx(0.3, 0.4)) < 1e-14);
  CHECK(oracle::max_entry(m.matrix() - Mat2::Identity()) < 1e-14);
}

TEST_CASE("(1, 2, 3, 4) normalizes to (0, 1, inf, -3) by m(z) = -(z - 1)/(z - 3)") {
  const auto [cfg, m] = normalize_punctures(finite_points({1.0, 2.0, 3.0, 4.0}));
  CHECK(std::abs(cfg.punctures[0].z) < 1e-14);
  CHECK(std::abs(cfg.punctures[1].z - 1.0) < 1e-14);
  CHECK(cfg.punctures[2].infinite);
  CHECK(std::abs(cfg.punctures[3].z + 3.0) < 1e-14);
  for (cplx z : {cplx(0.2, 1.0), cplx(-4.0, 0.5), cplx(7.0, -2.0)}) {
    const cplx expected = -(z - 1.0) / (z - 3.0);
    const auto got = m.apply(z);
    REQUIRE(got.is_finite());
    CHECK(std::abs(got.z - expected) < 1e-13);
  }
}

TEST_CASE("normalization handles infinity in any of the first three slots") {
  for (int slot = 0; slot < 4; ++slot) {
    std::vector<ProjPoint> raw = finite_points({cplx(2.0, 1.0), cplx(-1.0, 0.5), cplx(0.5, -2.0), cplx(3.0, 3.0)});
    raw[static_cast<std::size_t>(slot)] = ProjPoint::infinity();
    const auto [cfg, m] = normalize_punctures(raw);
    CHECK(chordal_distance(m.apply(raw[0]), ProjPoint::finite(0.0)) < 1e-13);
    CHECK(chordal_distance(m.apply(raw[1]), ProjPoint::finite(1.0)) < 1e-13);
    CHECK(chordal_distance(m.apply(raw[2]), ProjPoint::infinity()) < 1e-13);
    CHECK(chordal_distance(m.apply(raw[3]), cfg.punctures[3]) < 1e-13);
  }
}

TEST_CASE("normalization is idempotent and its map inverts") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ProjPoint> raw;
    for (int k = 0; k < 5; ++k) raw.push_back(ProjPoint::finite(cplx(u(rng), u(rng))));
    const auto [once, m] = normalize_punctures(raw);
    const auto [twice, m2] = normalize_punctures(once.punctures);
    for (std::size_t k = 0; k < once.n(); ++k) CHECK(chordal_distance(once.punctures[k], twice.punctures[k]) < 1e-12);
    CHECK(oracle::max_entry(m2.matrix() - Mat2::Identity()) < 1e-10);
    const Mat2 round = (m * m.inverse()).matrix();
    CHECK(oracle::max_entry(round - Mat2::Identity()) < 1e-12);
  }
}

TEST_CASE("degenerate and short configurations are rejected") {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ConfigError;
  };
  CHECK(kind_of([] { normalize_punctures(finite_points({0.0, 0.0, 1.0})); }) == ErrorKind::DegenerateConfiguration);
  CHECK(kind_of([] { normalize_punctures(finite_points({0.0, 1.0})); }) == ErrorKind::TooFewPunctures);
  CHECK(kind_of([] { make_config({ProjPoint::infinity(), ProjPoint::finite(0.0), ProjPoint::infinity()}); }) ==
        ErrorKind::DegenerateConfiguration);
  CHECK(kind_of([] { make_config(normalized({}), cplx(1.0, 0.0)); }) == ErrorKind::GeometryError);
}

TEST_CASE("thrice-punctured sphere with basepoint 1/2 + i/2") {
  const auto cfg = make_config(normalized({}), cplx(0.5, 0.5));
  check_loops(cfg);
}

TEST_CASE("n = 4 loops each wind once around their own puncture") {
  const auto cfg = make_config(normalized({cplx(0.3, 0.4)}));
  check_loops(cfg);
}

TEST_CASE("loops wind correctly on random configurations") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<ProjPoint> raw;
    for (int k = 0; k < 4 + trial % 3; ++k) raw.push_back(ProjPoint::finite(cplx(u(rng), u(rng))));
    const auto [cfg, m] = normalize_punctures(raw);
    check_loops(cfg);
  }
}

TEST_CASE("oversized lasso radii are rejected") {
  auto cfg = make_config(normalized({cplx(0.3, 0.4)}));
  cfg.loop_radius[0] = 0.4;
  CHECK_THROWS_AS(peripheral_loops(cfg), Error);
  try {
    peripheral_loops(cfg);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GeometryError);
  }
}

TEST_CASE("plane winding number rejects points on the path") {
  const auto c = surface::circle(0.0, 1.0, 0.0, 2.0 * kPi);
  CHECK(std::abs(surface::winding_number(c, 0.0) - 1.0) < 1e-9);
  CHECK(std::abs(surface::winding_number(c, 3.0)) < 1e-9);
  CHECK(std::abs(surface::winding_number(c.reversed(), 0.2) + 1.0) < 1e-9);
  CHECK_THROWS_AS(surface::winding_number(c, 1.0), Error);
}
