#include <doctest.h>

#include "holo/error.hpp"
#include "holo/monodromy.hpp"
#include "oracles.hpp"

using namespace holo;
using namespace holo::monodromy;
using holo::surface::circle;
using holo::surface::Path;
using holo::surface::straight;

namespace {

Potential zero_potential() { return {[](cplx) { return cplx{}; }, {}}; }
Potential pure_model() { return {[](cplx z) { return 0.5 / (z * z); }, {cplx{}}}; }

quaddiff::ParabolicQD thrice() { return quaddiff::from_chart({}, 3, cplx(0.5, 0.5)); }
quaddiff::ParabolicQD fixture() { return quaddiff::from_chart({{cplx(0.3, 0.4), 0.0}}, 4); }

Path polyline(std::initializer_list<cplx> pts) {
  Path p;
  const std::vector<cplx> v(pts);
  for (std::size_t k = 0; k + 1 < v.size(); ++k) p = p.then(straight(v[k], v[k + 1]));
  return p;
}

}  // namespace

TEST_CASE("Phi = 0 along a segment gives [[1, b - a], [0, 1]]") {
  const cplx a(0.2, -1.0), b(3.0, 0.5);
  const auto t = integrate_along(zero_potential(), straight(a, b));
  Mat2 expected;
  expected << 1.0, b - a, 0.0, 1.0;
  CHECK(oracle::max_entry(t.matrix - expected) < 1e-12);
  CHECK(t.det_drift < 1e-12);
}

TEST_CASE("pure model around the unit circle matches the Frobenius computation") {
  const auto t = integrate_along(pure_model(), circle(0.0, 1.0, 0.0, 2.0 * kPi));
  CHECK(oracle::max_entry(t.matrix - oracle::pure_model_monodromy()) < 1e-8);
  CHECK(std::abs(t.matrix.trace() + 2.0) < 1e-8);
  CHECK(t.det_drift < 1e-10);
}

TEST_CASE("adaptive transport agrees with fixed-step RK4 on the polyline of each loop") {
  const auto qd = fixture();
  const auto phi = [&](cplx z) { return quaddiff::evaluate(qd, z); };
  for (const auto& loop : surface::peripheral_loops(qd.config)) {
    const auto t = loop_monodromy(qd, loop);
    // The sampled polyline is homotopic to the loop, so the transfer matrices agree.
    const auto ref = oracle::rk4_transfer(phi, loop.path.sample(2e-3), 4);
    CHECK(oracle::max_entry(t.matrix - ref) < 1e-8 * (1.0 + oracle::max_entry(ref)));
  }
}

TEST_CASE("thrice-punctured sphere: every peripheral monodromy is parabolic with trace -2") {
  const auto qd = thrice();
  std::vector<Mat2> lifts;
  for (const auto& loop : surface::peripheral_loops(qd.config)) {
    const auto t = loop_monodromy(qd, loop);
    const cplx tr = t.matrix.trace();
    CHECK(std::abs(tr * tr - 4.0) < 1e-8);
    CHECK(std::abs(tr + 2.0) < 1e-8);
    CHECK(t.det_drift < 1e-10 * std::max(1.0, t.length));
    lifts.push_back(normalize_parabolic_lift(t).matrix);
  }
  CHECK(repvar::relation_check(lifts, 1e-8).kind != repvar::RelationResult::Kind::Fail);
}

TEST_CASE("a loop followed by its reverse transports to the identity") {
  const auto qd = fixture();
  for (const auto& loop : surface::peripheral_loops(qd.config)) {
    const auto t = integrate_along(qd, loop.path.then(loop.path.reversed()));
    CHECK(oracle::max_entry(t.matrix - Mat2::Identity()) < 1e-8);
  }
}

TEST_CASE("homotopic paths give equal transfer matrices") {
  const auto qd = thrice();
  const std::vector<std::pair<Path, Path>> pairs{
      {straight(cplx(0.5, 0.5), cplx(-0.5, 0.5)), polyline({cplx(0.5, 0.5), cplx(0.0, 1.5), cplx(-0.5, 0.5)})},
      {straight(cplx(2.0, 0.0), cplx(2.0, 1.0)), polyline({cplx(2.0, 0.0), cplx(3.0, 0.5), cplx(2.0, 1.0)})},
      {circle(0.0, 0.5, 0.0, 0.5 * kPi), polyline({cplx(0.5, 0.0), cplx(0.5, 0.5), cplx(0.0, 0.5)})},
  };
  for (const auto& [a, b] : pairs) {
    const auto ta = integrate_along(qd, a);
    const auto tb = integrate_along(qd, b);
    CHECK(oracle::max_entry(ta.matrix - tb.matrix) < 1e-8);
  }
}

TEST_CASE("paths through a pole are rejected") {
  const auto qd = thrice();
  try {
    integrate_along(qd, straight(cplx(-1.0, 0.0), cplx(0.5, 0.0)));
    FAIL("expected PoleOnPath");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleOnPath);
  }
}

TEST_CASE("normalize_parabolic_lift fixes the sign") {
  TransferMatrix t;
  t.matrix << 1.0, 1.0, 0.0, 1.0;
  CHECK(oracle::max_entry(normalize_parabolic_lift(t).matrix - t.matrix) == 0.0);
  t.matrix << -1.0, -kTwoPiI, 0.0, -1.0;
  CHECK(std::abs(normalize_parabolic_lift(t).matrix.trace() - 2.0) < 1e-15);
  t.matrix = Mat2::Identity();
  CHECK_THROWS_WITH_AS(normalize_parabolic_lift(t), doctest::Contains("DegenerateParabolic"), Error);
  t.matrix << 2.0, 0.0, 0.0, 0.5;
  CHECK_THROWS_WITH_AS(normalize_parabolic_lift(t), doctest::Contains("NotParabolic"), Error);
}

TEST_CASE("developing the pure model's log germ once around 0 adds 1") {
  DevelopedGerm germ{1.0, oracle::log_germ_frame()};
  const auto before = germ.value();
  REQUIRE(before.is_finite());
  CHECK(std::abs(before.z) < 1e-15);
  const auto after = develop_along(pure_model(), germ, circle(0.0, 1.0, 0.0, 2.0 * kPi));
  REQUIRE(after.value().is_finite());
  CHECK(std::abs(after.value().z - (before.z + 1.0)) < 1e-8);
  // Halfway round, D = log(-1) / (2 pi i) = 1/2.
  const auto half = develop_along(pure_model(), germ, circle(0.0, 1.0, 0.0, kPi));
  CHECK(std::abs(half.value().z - 0.5) < 1e-8);
}

TEST_CASE("a constant path leaves the germ unchanged") {
  const auto qd = thrice();
  const auto germ = standard_germ(cplx(0.5, 0.5));
  const auto same = develop_along(qd, germ, Path{});
  CHECK(oracle::max_entry(same.frame - germ.frame) == 0.0);
}

TEST_CASE("continuation around a loop acts by the deck transformation of its monodromy") {
  const auto qd = fixture();
  const auto germ = standard_germ(qd.config.basepoint);
  const ProjPoint start = germ.value();
  // A second germ with a generic value, to test the action away from 0.
  DevelopedGerm other{qd.config.basepoint, Mat2()};
  other.frame << cplx(0.3, 1.0), cplx(1.0, -0.2), cplx(-0.4, 0.1), cplx(0.7, 0.5);
  for (const auto& loop : surface::peripheral_loops(qd.config)) {
    const auto m = loop_monodromy(qd, loop).matrix;
    for (const auto& g : {germ, other}) {
      const auto continued = develop_along(qd, g, loop.path);
      const auto predicted = deck_action(g, m).apply(g.value());
      CHECK(chordal_distance(continued.value(), predicted) < 1e-7);
    }
  }
  CHECK(start.is_finite());
}

TEST_CASE("Schwarzian of a Mobius developing map vanishes") {
  DevelopedGerm g{cplx(0.2, 0.1), Mat2()};
  g.frame << 1.0, 2.0, cplx(0.0, 1.0), 3.0;
  const auto r = schwarzian_residual(zero_potential(), g, straight(cplx(0.2, 0.1), cplx(1.5, 0.8)), 8);
  CHECK(r.residuals.size() + r.skipped.size() == 8);
  CHECK(r.max_residual < 1e-6);
}

TEST_CASE("Schwarzian of the developed map reproduces Phi on the thrice-punctured sphere") {
  const auto qd = thrice();
  const auto pot = potential_of(qd);
  const auto path = straight(cplx(-0.5, 0.6), cplx(1.5, 0.6));
  const auto r = schwarzian_residual(pot, path, 12);
  CHECK(r.residuals.size() >= 10);
  CHECK(r.max_residual < 1e-5);
}

TEST_CASE("coarser Schwarzian stencils have larger residual") {
  const auto pot = potential_of(thrice());
  const auto path = straight(cplx(-0.5, 0.6), cplx(1.5, 0.6));
  const double coarse = schwarzian_residual(pot, path, 6, {}, 4e-2).max_residual;
  const double finer = schwarzian_residual(pot, path, 6, {}, 2e-2).max_residual;
  const double finest = schwarzian_residual(pot, path, 6, {}, 1e-2).max_residual;
  CHECK(finer < coarse);
  CHECK(finest < finer);
}
