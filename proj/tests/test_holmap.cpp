#include <doctest.h>

#include "holo/error.hpp"
#include "holo/holmap.hpp"
#include "oracles.hpp"

using namespace holo;
using namespace holo::holmap;

namespace {

const quaddiff::ParameterPoint kFixture{{cplx(0.3, 0.4), 0.0}};

}  // namespace

TEST_CASE("character map is deterministic bit for bit") {
  const auto a = character_map(kFixture).character.coordinates();
  const auto b = character_map(kFixture).character.coordinates();
  CHECK(a == b);
}

TEST_CASE("thrice-punctured sphere has peripheral traces (2, 2, 2)") {
  const auto ev = character_map({});
  REQUIRE(ev.character.peripheral_traces.size() == 3);
  for (const auto& t : ev.character.peripheral_traces) CHECK(std::abs(t - 2.0) < 1e-8);
  for (const auto& t : ev.raw_traces) CHECK(std::abs(t * t - 4.0) < 1e-8);
  CHECK(ev.nonelementary);
  CHECK(ev.max_det_drift < 1e-9);
}

TEST_CASE("dimension bookkeeping") {
  CHECK(punctures_for_dimension(0) == 3);
  CHECK(punctures_for_dimension(2) == 4);
  CHECK(punctures_for_dimension(8) == 7);
  CHECK_THROWS_WITH_AS(punctures_for_dimension(3), doctest::Contains("DimensionMismatch"), Error);
}

TEST_CASE("finite-difference Jacobian of theta^2") {
  const VectorMap square = [](const std::vector<cplx>& t) { return std::vector<cplx>{t[0] * t[0]}; };
  for (double h : {1e-3, 1e-4}) {
    const auto r = jacobian_fd(square, {cplx(1.0)}, h, 1e-6);
    CHECK(std::abs(r.jacobian(0, 0) - 2.0) < 10.0 * h * h);
    CHECK(r.cr_defect < 1e-8);
    CHECK(r.rank == 1);
  }
  const VectorMap conj = [](const std::vector<cplx>& t) { return std::vector<cplx>{std::conj(t[0])}; };
  CHECK(jacobian_fd(conj, {cplx(1.0)}, 1e-4, 1e-6).cr_defect > 1e3);
}

TEST_CASE("rank report") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-12;
  CHECK(rank_report(d, 1e-6).rank == 1);
  CHECK(rank_report(Eigen::MatrixXcd::Identity(2, 2), 1e-6).rank == 2);
  CHECK(rank_report(Eigen::MatrixXcd::Zero(2, 2), 1e-6).rank == 0);
  CHECK_THROWS_WITH_AS(rank_report(Eigen::MatrixXcd(0, 0), 1e-6), doctest::Contains("EmptyInput"), Error);
  const auto r = rank_report(Eigen::MatrixXcd::Identity(3, 2) * 2.0, 1e-6);
  CHECK(r.singular_values == std::vector<double>{2.0, 2.0});
}

TEST_CASE("n = 4 fixture Jacobian has full rank at three step sizes") {
  std::size_t rank = 0;
  for (double h : {1e-4, 1e-5, 1e-6}) {
    Settings s;
    s.fd_step = h;
    const auto r = jacobian_fd(kFixture, s);
    CHECK(r.jacobian.rows() == 10);
    CHECK(r.jacobian.cols() == 2);
    CHECK(r.rank == 2);
    CHECK(r.condition_ratio > 1e-6);
    CHECK(r.cr_defect < 1e-4);
    CHECK(std::is_sorted(r.singular_values.rbegin(), r.singular_values.rend()));
    rank = r.rank;
  }
  CHECK(rank == 2);
}

TEST_CASE("rank stays 2 across the cross grid around the fixture") {
  const auto grid = cross_grid(kFixture, 0.1, 0.5);
  REQUIRE(grid.size() == 5);
  for (const auto& p : grid) {
    const auto r = jacobian_fd(p);
    CHECK(r.rank == 2);
    CHECK(r.cr_defect < 1e-4);
    const auto f = fiber_probe(r, 4, 1e-6);
    CHECK(f.accessory_rank == 1);
    CHECK(f.moduli_rank == 1);
  }
}

TEST_CASE("stencil leaving the domain is reported") {
  const VectorMap fragile = [](const std::vector<cplx>& t) -> std::vector<cplx> {
    if (t[0].real() > 1.0) throw Error(ErrorKind::DegenerateConfiguration, "outside");
    return t;
  };
  CHECK_THROWS_WITH_AS(jacobian_fd(fragile, {cplx(1.0)}, 1e-3, 1e-6), doctest::Contains("StencilOutOfDomain"), Error);
}

TEST_CASE("fiber probe") {
  const auto f = fiber_probe(kFixture);
  CHECK(f.fiber_dimension == 1);
  CHECK(f.accessory_rank == 1);
  CHECK(f.moduli_rank == 1);
  CHECK_THROWS_WITH_AS(fiber_probe(quaddiff::ParameterPoint{}), doctest::Contains("FiberZeroDimensional"), Error);
}

TEST_CASE("injectivity probe near the fixture") {
  const auto r = injectivity_probe(kFixture, 1e-2, 50, 7);
  CHECK(r.evaluated == 50);
  CHECK(r.violations == 0);
  CHECK(r.sigma_min > 0.0);
  CHECK(r.min_ratio >= 0.5 * r.sigma_min);
  const auto again = injectivity_probe(kFixture, 1e-2, 50, 7);
  CHECK(again.min_ratio == r.min_ratio);
}

TEST_CASE("coincident pairs are skipped") {
  const auto s = pinned_settings(kFixture, {});
  CHECK(compare_pair(kFixture, kFixture, 1.0, s) == PairOutcome::Skipped);
}

TEST_CASE("a ball reaching past the domain resamples and reports the count") {
  const auto r = injectivity_probe(kFixture, 5.0, 10, 1);
  CHECK(r.evaluated + r.skipped == 10);
  CHECK(r.resampled > 0);
}
