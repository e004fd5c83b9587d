#include "geonet/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "doctest.h"
#include "geonet/errors.hpp"
#include "geonet/jacobi.hpp"
#include "geonet/rng.hpp"
#include "geonet/surface.hpp"
#include "geonet/triangle.hpp"
#include "oracles.hpp"

using namespace geonet;
using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {

SurfaceParams sphere_params(double radius) {
  SurfaceParams p;
  p.scalars["radius"] = radius;
  return p;
}

SurfacePoint chart_of(const Vector3d& q) {
  return {std::acos(std::clamp(q[2] / q.norm(), -1.0, 1.0)), std::atan2(q[1], q[0])};
}

Vector3d embed(const SurfacePoint& p) {
  return {std::sin(p.u) * std::cos(p.v), std::sin(p.u) * std::sin(p.v), std::cos(p.u)};
}

// Rotation by pi/4 about (1,1,1)/sqrt(3), applied to v (Rodrigues).
Vector3d rotate_octant(const Vector3d& v) {
  Vector3d u = Vector3d(1, 1, 1).normalized();
  double c = std::cos(M_PI / 4.0), s = std::sin(M_PI / 4.0);
  return v * c + u.cross(v) * s + u * (u.dot(v)) * (1.0 - c);
}

std::array<SurfacePoint, 3> octant_vertices() {
  return {chart_of(rotate_octant(Vector3d::UnitX())), chart_of(rotate_octant(Vector3d::UnitY())),
          chart_of(rotate_octant(Vector3d::UnitZ()))};
}

// Equilateral spherical triangle of side `s` centered at chart (th0, ph0).
std::array<SurfacePoint, 3> sphere_equilateral(double side, double th0, double ph0) {
  Vector3d n(std::sin(th0) * std::cos(ph0), std::sin(th0) * std::sin(ph0), std::cos(th0));
  Vector3d e1 = Vector3d::UnitZ().cross(n).normalized();
  Vector3d e2 = n.cross(e1);
  double rho = std::asin(std::sqrt(2.0 * (1.0 - std::cos(side)) / 3.0));
  std::array<SurfacePoint, 3> v;
  for (int i = 0; i < 3; ++i) {
    double psi = 2.0 * M_PI * i / 3.0 + 0.35;  // offset: no vertex on the e1 axis
    Vector3d q = std::cos(rho) * n + std::sin(rho) * (std::cos(psi) * e1 + std::sin(psi) * e2);
    v[i] = chart_of(q);
  }
  return v;
}

// Unit-sphere chart distance straight from the embedding.
double sdist(const SurfacePoint& a, const SurfacePoint& b) {
  return oracle::sphere_distance(1.0, a.u, a.v, b.u, b.v);
}

// Constant-speed great-circle arc between embedded endpoints.
Vector3d slerp(const Vector3d& a, const Vector3d& b, double t) {
  double ang = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
  if (ang < 1e-15) return a;
  return (std::sin((1.0 - t) * ang) * a + std::sin(t * ang) * b) / std::sin(ang);
}

// Angle at y between the directions toward b and c, via the spherical law of
// cosines on the triangle (b, y, c). Everything computed in the embedding.
double sphere_subtended(const Vector3d& y, const Vector3d& b, const Vector3d& c) {
  double db = std::acos(std::clamp(y.dot(b), -1.0, 1.0));
  double dc = std::acos(std::clamp(y.dot(c), -1.0, 1.0));
  double dbc = std::acos(std::clamp(b.dot(c), -1.0, 1.0));
  double num = std::cos(dbc) - std::cos(db) * std::cos(dc);
  return std::acos(std::clamp(num / (std::sin(db) * std::sin(dc)), -1.0, 1.0));
}

// Equator triple expressed in a chart whose axis is tilted pi/4 toward
// azimuth 0.4, keeping the whole configuration away from the chart poles.
// Values cross-checked below against the embedding-based distance oracle.
constexpr double kTiltA_u = 0.8615151497427993751, kTiltA_v = -0.1388886142484850678;
constexpr double kTiltB_u = 1.6580822994941267601, kTiltB_v = 2.0584167219278768649;
constexpr double kTiltC_u = 2.1701553011867486010, kTiltC_v = -1.9229269534286905488;
constexpr double kTiltPole_u = 0.7853981633974483096, kTiltPole_v = -2.7415926535897932385;

double max_angle_residual(const BalancedResult& r) {
  double worst = 0.0;
  for (double a : r.angles) worst = std::max(worst, std::abs(a - kBalancedAngle));
  return worst;
}

}  // namespace

TEST_CASE("subtended-angle point on the plane equilateral median") {
  auto s = make_surface(SurfaceKind::plane);
  SurfacePoint A{0.5, std::sqrt(3.0) / 2.0}, B{0.0, 0.0}, C{1.0, 0.0};
  Triangle t = build_triangle(s, A, B, C);

  YxPoint yx = find_y_x_detail(t, 0.5);
  // Half-angle geometry on the axis of symmetry: tan(pi/3) = 0.5 / y.
  CHECK(yx.point.u == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(yx.point.v == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-7));
  CHECK(!yx.tangential);
  CHECK(yx.arc > 0.0);
  CHECK(yx.arc < yx.arc_total);
  double ang = oracle::planar_angle({yx.point.u, yx.point.v}, {0, 0}, {1, 0});
  CHECK(std::abs(ang - kBalancedAngle) < 1e-8);
}

TEST_CASE("subtended-angle point at an off-center fan parameter") {
  auto s = make_surface(SurfaceKind::plane);
  SurfacePoint A{0.5, std::sqrt(3.0) / 2.0}, B{0.0, 0.0}, C{1.0, 0.0};
  Triangle t = build_triangle(s, A, B, C);

  double x = 0.3;
  SurfacePoint y = find_y_x(t, x);

  // Oracle: bisect the planar subtended angle along the straight segment A->X.
  Vector2d a2(A.u, A.v), x2(x, 0.0);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    Vector2d p = a2 + mid * (x2 - a2);
    (oracle::planar_angle(p, {0, 0}, {1, 0}) < kBalancedAngle ? lo : hi) = mid;
  }
  Vector2d expect = a2 + 0.5 * (lo + hi) * (x2 - a2);
  CHECK(y.u == doctest::Approx(expect[0]).epsilon(1e-7));
  CHECK(y.v == doctest::Approx(expect[1]).epsilon(1e-7));
}

TEST_CASE("subtended-angle point on a small spherical triangle") {
  auto s = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  auto v = sphere_equilateral(0.2, 1.2, 0.7);
  Triangle t = build_triangle(s, v[0], v[1], v[2]);

  SurfacePoint y = find_y_x(t, 0.5);

  // Oracle: bisect the embedded subtended angle along the great-circle median.
  Vector3d A3 = embed(t.vertex[0]), B3 = embed(t.vertex[1]), C3 = embed(t.vertex[2]);
  Vector3d X3 = slerp(B3, C3, 0.5);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (sphere_subtended(slerp(A3, X3, mid), B3, C3) < kBalancedAngle ? lo : hi) = mid;
  }
  Vector3d expect = slerp(A3, X3, 0.5 * (lo + hi));
  SurfacePoint ec = chart_of(expect);
  CHECK(sdist(y, ec) < 1e-7);
}

TEST_CASE("fan parameter and triangle validation") {
  auto s = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  auto plane = make_surface(SurfaceKind::plane);
  Triangle ok = build_triangle(plane, {0.5, 0.8}, {0, 0}, {1, 0});
  CHECK_THROWS_AS(find_y_x(ok, 0.0), GeonetError);
  CHECK_THROWS_AS(find_y_x(ok, 1.0), GeonetError);
  CHECK_THROWS_AS(find_y_x(ok, -0.2), GeonetError);

  // Degenerate: equally spaced equator points.
  Triangle deg = build_triangle(s, {M_PI / 2, 0.0}, {M_PI / 2, 2.0 * M_PI / 3.0},
                                {M_PI / 2, 4.0 * M_PI / 3.0});
  try {
    find_y_x(deg, 0.5);
    CHECK(false);
  } catch (const GeonetError& e) {
    CHECK(e.code() == ErrorCode::degenerate);
  }

  // A fat spherical triangle has every vertex angle past the threshold.
  auto fat = sphere_equilateral(2.0, 1.2, 0.7);
  Triangle tf = build_triangle(s, fat[0], fat[1], fat[2]);
  try {
    find_y_x(tf, 0.5);
    CHECK(false);
  } catch (const GeonetError& e) {
    CHECK(e.code() == ErrorCode::invalid_input);
  }
}

TEST_CASE("fan trace is symmetric across the equilateral axis") {
  auto s = make_surface(SurfaceKind::plane);
  Triangle t = build_triangle(s, {0.5, std::sqrt(3.0) / 2.0}, {0, 0}, {1, 0});

  SweepTrace tr = trace_s_curve(t, 11);
  REQUIRE(tr.records.size() == 11);
  for (int k = 0; k < 11; ++k) {
    const SweepRecord& r = tr.records[k];
    CHECK(r.ok);
    CHECK(r.x_param == doctest::Approx((k + 1) / 12.0).epsilon(1e-15));
    // Every trace point subtends the balanced angle over the far side.
    CHECK(std::abs(r.angles[1] - kBalancedAngle) < 1e-6);
    // Interior point: the three angles fill the full turn.
    CHECK(r.angles[0] + r.angles[1] + r.angles[2] == doctest::Approx(kTwoPi).epsilon(1e-6));
  }
  for (int k = 0; k < 5; ++k) {
    const SweepRecord& a = tr.records[k];
    const SweepRecord& b = tr.records[10 - k];
    CHECK(a.point.u == doctest::Approx(1.0 - b.point.u).epsilon(1e-7));
    CHECK(a.point.v == doctest::Approx(b.point.v).epsilon(1e-7));
  }
  CHECK(tr.records[5].point.u == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(tr.records[5].point.v == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-7));

  CHECK_THROWS_AS(trace_s_curve(t, 0), GeonetError);
  CHECK_THROWS_AS(trace_s_curve(t, 1), GeonetError);
}

TEST_CASE("sweep solves the plane equilateral triangle") {
  auto s = make_surface(SurfaceKind::plane);
  Triangle t = build_triangle(s, {0.5, std::sqrt(3.0) / 2.0}, {0, 0}, {1, 0});

  BalancedResult r = sweep_balanced(t);
  CHECK(r.converged);
  CHECK(r.method == SolveMethod::sweep);
  CHECK(r.inside_triangle);
  CHECK(r.point.u == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(r.point.v == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-7));
  CHECK(max_angle_residual(r) < 1e-7);
  CHECK(r.tangent_sum_norm < 2e-7);
  CHECK(r.iterations > 0);
}

TEST_CASE("sweep matches the planar median oracle on a scalene triangle") {
  auto s = make_surface(SurfaceKind::plane);
  Vector2d a(0, 0), b(1, 0), c(0.3, 0.7);
  Triangle t = build_triangle(s, {a[0], a[1]}, {b[0], b[1]}, {c[0], c[1]});

  auto w = oracle::weiszfeld_median(a, b, c);
  REQUIRE(!w.at_vertex);
  BalancedResult r = sweep_balanced(t);
  CHECK(r.converged);
  CHECK(r.point.u == doctest::Approx(w.point[0]).epsilon(1e-6));
  CHECK(r.point.v == doctest::Approx(w.point[1]).epsilon(1e-6));
}

TEST_CASE("sweep and descent agree at the center of a spherical equilateral") {
  auto s = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  auto v = sphere_equilateral(0.2, 1.2, 0.7);
  Triangle t = build_triangle(s, v[0], v[1], v[2]);
  SurfacePoint center{1.2, 0.7};  // the construction is symmetric about it

  BalancedResult sw = sweep_balanced(t);
  CHECK(sw.converged);
  CHECK(sw.method == SolveMethod::sweep);
  CHECK(sdist(sw.point, center) < 1e-6);
  CHECK(max_angle_residual(sw) < 1e-7);

  BalancedResult de = descent_balanced(t);
  CHECK(de.converged);
  CHECK(de.method == SolveMethod::descent);
  CHECK(de.inside_triangle);
  CHECK(sdist(de.point, center) < 1e-6);
  CHECK(max_angle_residual(de) < 1e-6);

  CHECK(sdist(sw.point, de.point) < 1e-6);
}

TEST_CASE("descent solves the plane equilateral triangle from the default start") {
  auto s = make_surface(SurfaceKind::plane);
  Triangle t = build_triangle(s, {0.5, std::sqrt(3.0) / 2.0}, {0, 0}, {1, 0});

  BalancedResult r = descent_balanced(t);
  CHECK(r.converged);
  CHECK(r.inside_triangle);
  CHECK(r.point.u == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(r.point.v == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-7));
  CHECK(r.tangent_sum_norm < 2e-7);
}

TEST_CASE("descent reaches the pole of the tilted-chart equator triple") {
  auto s = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  SurfacePoint A{kTiltA_u, kTiltA_v}, B{kTiltB_u, kTiltB_v}, C{kTiltC_u, kTiltC_v};
  SurfacePoint pole{kTiltPole_u, kTiltPole_v};

  // The frozen chart coordinates really are an equally spaced equator triple
  // with the target point a quarter turn from each vertex.
  CHECK(std::abs(sdist(A, B) - 2.0 * M_PI / 3.0) < 1e-12);
  CHECK(std::abs(sdist(B, C) - 2.0 * M_PI / 3.0) < 1e-12);
  CHECK(std::abs(sdist(C, A) - 2.0 * M_PI / 3.0) < 1e-12);
  for (const SurfacePoint& p : {A, B, C}) CHECK(std::abs(sdist(pole, p) - M_PI / 2.0) < 1e-12);

  Triangle t = build_triangle(s, A, B, C);
  CHECK(t.degenerate);
  CHECK(triangle_contains(t, pole));

  BalancedResult r = descent_balanced(t);
  CHECK(r.converged);
  CHECK(r.inside_triangle);
  // Every vertex is a quarter turn away, so the distance-sum Hessian vanishes
  // at the target and the residual tolerance pins the position only to the
  // square-root scale: sqrt(vec_tol) ~ 5e-4.
  CHECK(sdist(r.point, pole) < 1.5e-3);
  CHECK(max_angle_residual(r) < 1e-6);

  ResidualReport rep = verify_balanced(t, r.point);
  CHECK(rep.angles_pass);
  CHECK(rep.tangents_pass);
  CHECK(rep.consistent);

  // The exact pole satisfies the balance conditions to solver precision.
  ResidualReport at_pole = verify_balanced(t, pole);
  for (double res : at_pole.angle_residuals) CHECK(res < 1e-8);
  CHECK(at_pole.tangent_sum_norm < 1e-8);
}

TEST_CASE("descent captures the wide vertex when no interior solution exists") {
  auto s = make_surface(SurfaceKind::plane);
  Vector2d a(0, 0), b(1, 0), c(-0.8, 0.6);
  auto w = oracle::weiszfeld_median(a, b, c);
  REQUIRE(w.at_vertex);
  REQUIRE(w.vertex_index == 0);

  Triangle t = build_triangle(s, {a[0], a[1]}, {b[0], b[1]}, {c[0], c[1]});
  BalancedResult r = descent_balanced(t);
  CHECK(!r.converged);
  CHECK(!r.inside_triangle);
  CHECK(r.point.u == doctest::Approx(a[0]).epsilon(1e-9));
  CHECK(r.point.v == doctest::Approx(a[1]).epsilon(1e-9));
}

TEST_CASE("descent rejects an exterior start point") {
  auto s = make_surface(SurfaceKind::plane);
  Triangle t = build_triangle(s, {0.5, std::sqrt(3.0) / 2.0}, {0, 0}, {1, 0});
  CHECK_THROWS_AS(descent_balanced(t, SurfacePoint{2.0, 2.0}), GeonetError);
}

TEST_CASE("balance verification separates solutions from off-center points") {
  auto s = make_surface(SurfaceKind::plane);
  Triangle t = build_triangle(s, {0.5, std::sqrt(3.0) / 2.0}, {0, 0}, {1, 0});

  ResidualReport good = verify_balanced(t, {0.5, std::sqrt(3.0) / 6.0});
  for (double res : good.angle_residuals) CHECK(res < 1e-8);
  CHECK(good.tangent_sum_norm < 1e-8);
  CHECK(good.angles_pass);
  CHECK(good.tangents_pass);
  CHECK(good.consistent);

  ResidualReport bad = verify_balanced(t, {0.5, 0.05});
  double worst = *std::max_element(bad.angle_residuals.begin(), bad.angle_residuals.end());
  CHECK(worst > 0.1);
  CHECK(!bad.angles_pass);
  CHECK(!bad.tangents_pass);
  CHECK(bad.consistent);
}

TEST_CASE("subtended angle increases monotonically along the fan") {
  auto plane = make_surface(SurfaceKind::plane);
  Triangle tp = build_triangle(plane, {0.5, std::sqrt(3.0) / 2.0}, {0, 0}, {1, 0});
  std::vector<double> prof = angle_profile(tp, 0.5, 21);
  REQUIRE(prof.size() == 21);
  CHECK(std::abs(prof.front() - interior_angle(tp, 0)) < 1e-8);
  CHECK(std::abs(prof.back() - M_PI) < 1e-8);
  for (std::size_t i = 0; i + 1 < prof.size(); ++i) CHECK(prof[i] < prof[i + 1]);

  auto hyp = make_surface(SurfaceKind::hyperbolic_disk);
  Triangle th = build_triangle(hyp, {0.3, 0.0}, {-0.2, 0.25}, {-0.1, -0.3});
  std::vector<double> hp = angle_profile(th, 0.4, 15);
  CHECK(std::abs(hp.front() - interior_angle(th, 0)) < 1e-6);
  CHECK(std::abs(hp.back() - M_PI) < 1e-6);
  for (std::size_t i = 0; i + 1 < hp.size(); ++i) CHECK(hp[i] < hp[i + 1]);

  auto sph = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  auto v = sphere_equilateral(0.2, 1.2, 0.7);
  Triangle ts = build_triangle(sph, v[0], v[1], v[2]);
  std::vector<double> sp = angle_profile(ts, 0.5, 15);
  for (std::size_t i = 0; i + 1 < sp.size(); ++i) CHECK(sp[i] < sp[i + 1]);

  CHECK_THROWS_AS(angle_profile(tp, 0.5, 2), GeonetError);
  CHECK_THROWS_AS(angle_profile(tp, 0.0, 15), GeonetError);
}

TEST_CASE("normal-field windows stay monotone along sampled fans") {
  // Cross-check between two independent machineries: wherever the conjugate
  // point analysis certifies a monotone window covering the whole fan
  // geodesic, the sampled subtended angle must indeed be strictly increasing.
  auto s = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  auto v = sphere_equilateral(0.7, 1.2, 0.7);
  Triangle t = build_triangle(s, v[0], v[1], v[2]);

  for (double x : {0.25, 0.5, 0.75}) {
    ConnectResult fan = connect(s, t.vertex[0], t.side[1].point_at(x * t.side[1].length));
    REQUIRE(fan.converged);
    MonotoneWindow w = monotone_window_check(s, fan.path, fan.length);
    CHECK(w.monotone);
    CHECK(w.margin > 0.0);
    std::vector<double> prof = angle_profile(t, x, 13);
    for (std::size_t i = 0; i + 1 < prof.size(); ++i) CHECK(prof[i] < prof[i + 1]);
  }
}

TEST_CASE("tangent sum matches the distance-sum gradient") {
  // F(y) = sum of distances to the vertices, from closed-form oracles; its
  // FD chart gradient must equal minus the metric times the unit-tangent sum.
  SolverTolerances tol;
  auto check_grad = [&](const SurfacePtr& s, const std::array<SurfacePoint, 3>& vtx,
                        const SurfacePoint& y, auto&& dist) {
    std::array<Vector2d, 3> toward;
    for (int i = 0; i < 3; ++i) {
      ConnectResult r = connect(s, y, vtx[i]);
      REQUIRE(r.converged);
      toward[i] = frame_direction(*s, y, r.alpha);
    }
    Vector2d R = toward[0] + toward[1] + toward[2];
    Vector2d grad_pred = -(metric_at(*s, y) * R);

    auto F = [&](double u, double vv) {
      double acc = 0.0;
      for (const auto& p : vtx) acc += dist(SurfacePoint{u, vv}, p);
      return acc;
    };
    double h = 1e-5;
    Vector2d grad_fd((F(y.u + h, y.v) - F(y.u - h, y.v)) / (2 * h),
                     (F(y.u, y.v + h) - F(y.u, y.v - h)) / (2 * h));
    CHECK((grad_fd - grad_pred).norm() < 1e-5 + 1e-4 * grad_fd.norm());
  };

  auto plane = make_surface(SurfaceKind::plane);
  std::array<SurfacePoint, 3> pv = {SurfacePoint{0, 0}, SurfacePoint{1, 0}, SurfacePoint{0.3, 0.7}};
  auto pdist = [](const SurfacePoint& a, const SurfacePoint& b) {
    return std::hypot(a.u - b.u, a.v - b.v);
  };
  CounterRng rng(20260822u);
  for (int k = 0; k < 8; ++k) {
    SurfacePoint y{rng.uniform(2 * k, 0.15, 0.55), rng.uniform(2 * k + 1, 0.1, 0.4)};
    check_grad(plane, pv, y, pdist);
  }

  auto sph = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  auto sv = sphere_equilateral(0.7, 1.2, 0.7);
  std::array<SurfacePoint, 3> svv = {sv[0], sv[1], sv[2]};
  auto sdist2 = [](const SurfacePoint& a, const SurfacePoint& b) { return sdist(a, b); };
  for (int k = 0; k < 8; ++k) {
    SurfacePoint y{1.2 + rng.uniform(100 + 2 * k, -0.15, 0.15),
                   0.7 + rng.uniform(101 + 2 * k, -0.15, 0.15)};
    check_grad(sph, svv, y, sdist2);
  }
}

TEST_CASE("descent lands on the same point from scattered starts") {
  auto s = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  auto v = sphere_equilateral(0.2, 1.2, 0.7);
  Triangle t = build_triangle(s, v[0], v[1], v[2]);

  BalancedResult base = descent_balanced(t);
  REQUIRE(base.converged);
  const std::array<Vector2d, 5> offs = {Vector2d{0.03, 0.0}, Vector2d{-0.03, 0.02},
                                        Vector2d{0.0, -0.04}, Vector2d{0.02, 0.03},
                                        Vector2d{-0.01, -0.02}};
  for (const Vector2d& o : offs) {
    SurfacePoint start{1.2 + o[0], 0.7 + o[1]};
    REQUIRE(triangle_contains(t, start));
    BalancedResult r = descent_balanced(t, start);
    CHECK(r.converged);
    CHECK(sdist(r.point, base.point) < 1e-5);
  }
}

TEST_CASE("sweep refuses a failed screening unless overridden") {
  auto s = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  auto v = octant_vertices();
  Triangle t = build_triangle(s, v[0], v[1], v[2]);
  REQUIRE(check_preconditions(t).verdict == PreconditionReport::Verdict::fail);

  try {
    sweep_balanced(t);
    CHECK(false);
  } catch (const GeonetError& e) {
    CHECK(e.code() == ErrorCode::invalid_input);
    CHECK(std::string(e.what()).find("override") != std::string::npos);
  }

  SolveOptions o;
  o.override_preconditions = true;
  BalancedResult r = sweep_balanced(t, o);
  CHECK(r.converged);
  CHECK(r.inside_triangle);
  SurfacePoint center = chart_of(rotate_octant(Vector3d(1, 1, 1).normalized()));
  CHECK(sdist(r.point, center) < 1e-6);
  CHECK(max_angle_residual(r) < 1e-7);
}

TEST_CASE("sweep treats an advisory screening as a refusal by default") {
  SurfaceParams p;
  p.g11 = "1";
  p.g12 = "0";
  p.g22 = "sin(u)^2";
  ChartDomain dom;
  dom.u_min = 1e-3;
  dom.u_max = M_PI - 1e-3;
  dom.v_periodic = true;
  p.user_domain = dom;
  auto s = make_surface(SurfaceKind::user_metric, p);

  auto v = sphere_equilateral(0.3, 1.2, 0.7);
  Triangle t = build_triangle(s, v[0], v[1], v[2]);
  REQUIRE(check_preconditions(t).verdict == PreconditionReport::Verdict::advisory);

  CHECK_THROWS_AS(sweep_balanced(t), GeonetError);

  SolveOptions o;
  o.override_preconditions = true;
  BalancedResult r = sweep_balanced(t, o);
  CHECK(r.converged);
  CHECK(sdist(r.point, {1.2, 0.7}) < 1e-5);
}

TEST_CASE("random acute-vertex plane triangles all balance at the median") {
  auto s = make_surface(SurfaceKind::plane);
  CounterRng rng(77001u);
  int built = 0;
  std::uint64_t ctr = 0;
  while (built < 12) {
    double draw[6];
    for (double& d : draw) d = rng.uniform(ctr++, -1, 1);
    Vector2d a(draw[0], draw[1]), b(draw[2], draw[3]), c(draw[4], draw[5]);
    double worst = std::max({oracle::planar_angle(a, b, c), oracle::planar_angle(b, c, a),
                             oracle::planar_angle(c, a, b)});
    double min_side = std::min({(a - b).norm(), (b - c).norm(), (c - a).norm()});
    if (worst >= kBalancedAngle - 0.05 || min_side < 0.2) continue;
    ++built;

    Triangle t = build_triangle(s, {a[0], a[1]}, {b[0], b[1]}, {c[0], c[1]});
    auto w = oracle::weiszfeld_median(a, b, c);
    REQUIRE(!w.at_vertex);

    BalancedResult r = sweep_balanced(t);
    CHECK(r.converged);
    CHECK(r.inside_triangle);
    CHECK(std::hypot(r.point.u - w.point[0], r.point.v - w.point[1]) < 1e-6);
    CHECK(r.angles[0] + r.angles[1] + r.angles[2] == doctest::Approx(kTwoPi).epsilon(1e-6));
    CHECK(r.tangent_sum_norm < 2e-7);
  }
}
