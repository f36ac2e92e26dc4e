#include <doctest.h>

#include <random>

#include "holo/error.hpp"
#include "holo/foliation.hpp"

using namespace holo;
using namespace holo::foliation;

TEST_CASE("full circle of radius 1/2 lowers v by 1") {
  const auto r = leaf_transport({cplx(0.5), cplx(0.0), 0.0}, circle_path(0.5, 1.0));
  CHECK(std::abs(r.state.u - 0.5) < 1e-15);
  CHECK(std::abs(r.state.v + 1.0) < 1e-14);
  CHECK(std::abs(r.state.branch - 2.0 * kPi) < 1e-14);
  CHECK(r.numeric_residual < 1e-10);
}

TEST_CASE("upper half circle reaches (-1/2, -1/2)") {
  const auto r = leaf_transport({cplx(0.5), cplx(0.0), 0.0}, circle_path(0.5, 0.5));
  CHECK(std::abs(r.state.u + 0.5) < 1e-15);
  CHECK(std::abs(r.state.v + 0.5) < 1e-14);
  CHECK(r.numeric_residual < 1e-10);
}

TEST_CASE("constant path leaves the leaf state alone") {
  const LeafState s{cplx(0.2, 0.3), cplx(1.0, -2.0), 0.7};
  const auto r = leaf_transport(s, {s.u, s.u});
  CHECK(r.state.u == s.u);
  CHECK(r.state.v == s.v);
  CHECK(r.state.branch == s.branch);
}

TEST_CASE("closed-form loop monodromy") {
  const LeafState s{cplx(0.5), cplx(0.0), 0.0};
  CHECK(leaf_loop_monodromy(s, 1).v == cplx(-1.0));
  CHECK(leaf_loop_monodromy(s, 0).v == s.v);
  const auto r = leaf_loop_monodromy({cplx(0.5), cplx(3.0), 0.0}, -2);
  CHECK(r.u == cplx(0.5));
  CHECK(r.v == cplx(5.0));
  const auto numeric = leaf_loop_numeric({cplx(0.5), cplx(3.0), 0.0}, -2);
  CHECK(std::abs(numeric.v - cplx(5.0)) < 1e-9);
  CHECK(std::abs(numeric.branch + 4.0 * kPi) < 1e-12);
}

TEST_CASE("numeric loops agree with the closed form for k in -2..2") {
  const LeafState s{cplx(0.3, -0.2), cplx(0.5, 0.25), 0.0};
  for (long k = -2; k <= 2; ++k) {
    CHECK(std::abs(leaf_loop_numeric(s, k).v - leaf_loop_monodromy(s, k).v) < 1e-9);
  }
}

TEST_CASE("transport composes along concatenated paths") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> rad(0.1, 0.9), ang(-1.2, 1.2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> path{cplx(0.4, 0.1)};
    for (int k = 0; k < 30; ++k) path.push_back(std::polar(rad(rng), std::arg(path.back()) + ang(rng)));
    const std::vector<cplx> first(path.begin(), path.begin() + 15);
    const std::vector<cplx> second(path.begin() + 14, path.end());
    const LeafState s{path.front(), cplx(0.1, 0.2), 0.0};
    const auto whole = leaf_transport(s, path);
    const auto a = leaf_transport(s, first);
    const auto b = leaf_transport(a.state, second);
    CHECK(std::abs(whole.state.v - b.state.v) < 1e-14);
    CHECK(std::abs(whole.state.branch - b.state.branch) < 1e-13);
    CHECK(whole.numeric_residual < 1e-10);
    CHECK(a.numeric_residual + b.numeric_residual < 1e-10);
  }
}

TEST_CASE("loop monodromy is additive in k") {
  const LeafState s{cplx(0.5), cplx(0.25, -1.0), 0.0};
  for (long k1 = -3; k1 <= 3; ++k1) {
    for (long k2 = -3; k2 <= 3; ++k2) {
      const auto two = leaf_loop_monodromy(leaf_loop_monodromy(s, k1), k2);
      const auto one = leaf_loop_monodromy(s, k1 + k2);
      CHECK(two.v == one.v);
      CHECK(std::abs(two.branch - one.branch) < 1e-12);
    }
  }
}

TEST_CASE("transport rejects bad paths") {
  const LeafState s{cplx(0.5), cplx(0.0), 0.0};
  CHECK_THROWS_WITH_AS(leaf_transport(s, {cplx(0.5), cplx(0.0)}), doctest::Contains("SingularFiber"), Error);
  CHECK_THROWS_WITH_AS(leaf_transport(s, {cplx(0.5), cplx(1.5)}), doctest::Contains("OutOfDomain"), Error);
  CHECK_THROWS_WITH_AS(leaf_transport(s, {cplx(0.5), cplx(-0.5, 0.01)}), doctest::Contains("PathTooCoarse"), Error);
}

TEST_CASE("gluing map") {
  const auto a = glue({cplx(0.0, 1.0), cplx(5.0)});
  CHECK(std::abs(a.u - std::exp(-2.0 * kPi)) < 1e-17);
  CHECK(a.v == cplx(5.0, -1.0));
  const auto b = glue({cplx(0.0, 1.0), cplx(0.0)});
  const auto c = glue({cplx(1.0, 1.0), cplx(1.0)});
  CHECK(std::abs(b.u - c.u) < 1e-15);
  CHECK(std::abs(b.v - c.v) < 1e-15);
  CHECK_THROWS_WITH_AS(glue({cplx(0.3, 0.0), cplx(1.0)}), doctest::Contains("OutOfDomain"), Error);
  const cplx tau(0.37, 0.8);
  CHECK(glue({tau, tau}).v == cplx(0.0));
}

TEST_CASE("gluing map is injective on the strip 0 <= Re tau < 1") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> re(0.0, 1.0), im(0.1, 2.0), zc(-3.0, 3.0);
  std::vector<std::pair<GlueCoords, GluedPoint>> pts;
  for (int k = 0; k < 300; ++k) {
    const GlueCoords g{cplx(re(rng), im(rng)), cplx(zc(rng), zc(rng))};
    pts.emplace_back(g, glue(g));
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double din = std::abs(pts[i].first.tau - pts[j].first.tau) + std::abs(pts[i].first.z - pts[j].first.z);
      const double dout = std::abs(pts[i].second.u - pts[j].second.u) + std::abs(pts[i].second.v - pts[j].second.v);
      // Output separation stays proportional to input separation on random pairs.
      CHECK(dout > 1e-7 * din);
    }
  }
}

TEST_CASE("horizontal leaves are sent to leaves of the Riccati foliation") {
  const auto fixed = conjugacy_check({{cplx(0.0), cplx(0.0, 1.0), cplx(1.0, 1.0)}}, 1e-9);
  CHECK(fixed.passed);
  CHECK(fixed.max_residual < 1e-9);
  const auto random = conjugacy_check(random_leaves(100, 0), 1e-9);
  CHECK(random.samples == 100);
  CHECK(random.passed);
  CHECK(random.max_diagonal_v == 0.0);
  const auto a = random_leaves(5, 42), b = random_leaves(5, 42);
  for (std::size_t k = 0; k < 5; ++k) CHECK(a[k].tau_from == b[k].tau_from);
}
