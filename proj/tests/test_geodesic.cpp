// Geodesic shooting, two-point connection, distances.

#include "geonet/geodesic.hpp"

#include <cmath>

#include "doctest.h"
#include "geonet/errors.hpp"
#include "geonet/rng.hpp"
#include "oracles.hpp"

using namespace geonet;
using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {

SurfacePtr unit_sphere() {
  SurfaceParams p;
  p.scalars["radius"] = 1.0;
  return make_surface(SurfaceKind::sphere, p);
}

Vector3d embed_sphere(const SurfacePoint& p) {
  return {std::sin(p.u) * std::cos(p.v), std::sin(p.u) * std::sin(p.v), std::cos(p.u)};
}

}  // namespace

TEST_CASE("plane: geodesics are straight lines") {
  auto s = make_surface(SurfaceKind::plane);
  auto path = shoot(s, {1.0, 2.0}, 0.0, 5.0);
  CHECK(path.end().u == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(path.end().v == doctest::Approx(2.0).epsilon(1e-12));

  auto res = connect(s, {0.0, 0.0}, {3.0, 4.0});
  REQUIRE(res.converged);
  CHECK(res.length == doctest::Approx(5.0).epsilon(1e-10));
  CHECK(res.alpha == doctest::Approx(std::atan2(4.0, 3.0)).epsilon(1e-9));
  CHECK_FALSE(res.non_unique);
}

TEST_CASE("sphere: shot path matches the great-circle closed form") {
  auto s = unit_sphere();
  SurfacePoint p0{1.0, 0.5};
  Vector2d dir{0.3, 0.4};
  auto path = shoot_dir(s, p0, dir, 2.0);
  REQUIRE_FALSE(path.left_chart);
  Vector2d d = dir / g_norm(*s, p0, dir);
  for (double t : {0.25, 0.8, 1.3, 2.0}) {
    Vector2d q = oracle::sphere_geodesic(1.0, p0.u, p0.v, d[0], d[1], t);
    Vector3d want = embed_sphere({q[0], q[1]});
    Vector3d got = embed_sphere(path.point_at(t));
    CHECK((want - got).norm() <= 1e-7);
  }
}

TEST_CASE("unit speed is preserved along the path") {
  std::vector<SurfacePtr> surfaces;
  surfaces.push_back(unit_sphere());
  surfaces.push_back(make_surface(SurfaceKind::hyperbolic_disk));
  {
    SurfaceParams p;
    p.scalars["a"] = 1.0;
    p.scalars["c"] = 0.8;
    surfaces.push_back(make_surface(SurfaceKind::ellipsoid, p));
  }
  std::vector<SurfacePoint> starts = {{1.1, 0.4}, {0.2, -0.1}, {1.3, 2.2}};
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    auto path = shoot(surfaces[i], starts[i], 0.83, 1.5);
    double worst = 0.0;
    for (int k = 1; k <= 50; ++k) {
      double t = path.length * halton(k, 2);
      double n = g_norm(*surfaces[i], path.point_at(t), path.velocity_at(t));
      worst = std::max(worst, std::abs(n - 1.0));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("round trip: connect recovers the shot that produced the endpoint") {
  auto s = unit_sphere();
  SurfacePoint a{1.1, 0.3};
  auto path = shoot(s, a, 0.7, 1.3);
  auto res = connect(s, a, path.end());
  REQUIRE(res.converged);
  CHECK(res.length == doctest::Approx(1.3).epsilon(1e-8));
  CHECK(res.alpha == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("distance agrees with closed forms and is symmetric") {
  auto s = unit_sphere();
  CounterRng rng(7);
  for (int i = 0; i < 12; ++i) {
    SurfacePoint a{rng.uniform(6 * i, 0.5, M_PI - 0.5), rng.uniform(6 * i + 1, -2.0, 2.0)};
    SurfacePoint b{rng.uniform(6 * i + 2, 0.5, M_PI - 0.5), rng.uniform(6 * i + 3, -2.0, 2.0)};
    double want = oracle::sphere_distance(1.0, a.u, a.v, b.u, b.v);
    if (want > 2.9 || want < 1e-3) continue;  // keep clear of the antipodal locus
    double got = distance(s, a, b);
    CHECK(got == doctest::Approx(want).epsilon(1e-8));
    CHECK(distance(s, b, a) == doctest::Approx(got).epsilon(1e-9));
  }

  auto h = make_surface(SurfaceKind::hyperbolic_disk);
  Vector2d hp{0.1, 0.2}, hq{-0.4, 0.5};
  double want = oracle::hyperbolic_distance(hp, hq);
  CHECK(distance(h, {hp[0], hp[1]}, {hq[0], hq[1]}) == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("shot aborts cleanly at the chart boundary") {
  auto s = unit_sphere();
  auto path = shoot(s, {0.3, 0.0}, M_PI, 1.0);  // straight toward the excluded pole
  CHECK(path.left_chart);
  CHECK(path.length == doctest::Approx(0.3 - 1e-3).epsilon(1e-4));
  CHECK(path.point_at(path.length).u <= 1e-3 + 1e-6);
}

TEST_CASE("length budget caps a runaway shot") {
  auto s = unit_sphere();
  auto path = shoot(s, {1.5, 0.0}, M_PI / 2.0, 100.0);
  CHECK(path.budget_capped);
  CHECK(path.length == doctest::Approx(s->length_budget).epsilon(1e-9));
}

TEST_CASE("antipodal endpoints are flagged non-unique") {
  auto s = unit_sphere();
  auto res = connect(s, {M_PI / 2.0, 0.0}, {M_PI / 2.0, M_PI});
  REQUIRE(res.converged);
  CHECK(res.non_unique);
  CHECK(res.distinct_solutions >= 2);
  CHECK(res.length == doctest::Approx(M_PI).epsilon(1e-6));

  auto generic = connect(s, {M_PI / 2.0, 0.0}, {M_PI / 2.0, 1.0});
  REQUIRE(generic.converged);
  CHECK_FALSE(generic.non_unique);
  CHECK(generic.length == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("warm start reproduces the multistart answer") {
  auto s = unit_sphere();
  SurfacePoint a{1.2, -0.4}, b{1.7, 0.9};
  auto full = connect(s, a, b);
  REQUIRE(full.converged);
  ConnectOptions warm;
  warm.hint = Vector2d{full.alpha + 0.01, full.length * 1.01};
  auto res = connect(s, a, b, warm);
  REQUIRE(res.converged);
  CHECK(res.length == doctest::Approx(full.length).epsilon(1e-10));
  CHECK(res.alpha == doctest::Approx(full.alpha).epsilon(1e-7));
}

TEST_CASE("coincident endpoints give the trivial connection") {
  auto s = unit_sphere();
  auto res = connect(s, {1.0, 0.5}, {1.0, 0.5});
  REQUIRE(res.converged);
  CHECK(res.length == 0.0);
  CHECK(distance(s, {1.0, 0.5}, {1.0, 0.5}) == 0.0);
}

TEST_CASE("periodic azimuth: connection crosses the seam by the short way") {
  auto s = unit_sphere();
  SurfacePoint a{1.4, 3.0}, b{1.4, -3.0};  // 0.283 apart in azimuth across the seam
  auto res = connect(s, a, b);
  REQUIRE(res.converged);
  double want = oracle::sphere_distance(1.0, a.u, a.v, b.u, b.v);
  CHECK(res.length == doctest::Approx(want).epsilon(1e-8));
  CHECK(res.length < 0.3);
}

TEST_CASE("ellipsoid round trip") {
  SurfaceParams p;
  p.scalars["a"] = 1.0;
  p.scalars["c"] = 0.8;
  auto s = make_surface(SurfaceKind::ellipsoid, p);
  SurfacePoint a{1.0, 0.2};
  auto path = shoot(s, a, -0.4, 0.9);
  auto res = connect(s, a, path.end());
  REQUIRE(res.converged);
  CHECK(res.length == doctest::Approx(0.9).epsilon(1e-8));
  CHECK(res.alpha == doctest::Approx(-0.4).epsilon(1e-6));
}
