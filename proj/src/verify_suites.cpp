#include "geonet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>

#include "geonet/errors.hpp"
#include "geonet/jacobi.hpp"
#include "geonet/rng.hpp"
#include "geonet/runner.hpp"
#include "geonet/scenario.hpp"
#include "geonet/solver.hpp"
#include "geonet/surface.hpp"
#include "geonet/triangle.hpp"
#include "geonet/version.hpp"

namespace geonet {

namespace {

using Eigen::Vector2d;
using Eigen::Vector3d;

std::string fmt(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", d);
  return buf;
}

struct Suite {
  SuiteResult res;
  explicit Suite(std::string name) { res.name = std::move(name); }
  void check(bool ok, const std::string& detail) {
    ++res.checks;
    if (!ok) {
      ++res.failures;
      res.details.push_back(detail);
    }
  }
};

SurfaceParams sphere_params(double radius) {
  SurfaceParams p;
  p.scalars["radius"] = radius;
  return p;
}

SurfaceParams ellipsoid_params(double a, double c) {
  SurfaceParams p;
  p.scalars["a"] = a;
  p.scalars["c"] = c;
  return p;
}

SurfacePoint chart_of(const Vector3d& q) {
  return {std::acos(std::clamp(q[2] / q.norm(), -1.0, 1.0)), std::atan2(q[1], q[0])};
}

Vector3d rotate_octant(const Vector3d& v) {
  Vector3d u = Vector3d(1, 1, 1).normalized();
  double c = std::cos(M_PI / 4.0), s = std::sin(M_PI / 4.0);
  return v * c + u.cross(v) * s + u * (u.dot(v)) * (1.0 - c);
}

// Euclidean geometric median of three points (independent reference for the
// flat-plane battery; vertex capture when an angle reaches the threshold).
struct MedianRef {
  Vector2d point;
  bool at_vertex = false;
};

MedianRef euclid_median(const Vector2d& a, const Vector2d& b, const Vector2d& c) {
  std::array<Vector2d, 3> pts = {a, b, c};
  for (int i = 0; i < 3; ++i) {
    Vector2d e1 = pts[(i + 1) % 3] - pts[i];
    Vector2d e2 = pts[(i + 2) % 3] - pts[i];
    double cang = e1.dot(e2) / (e1.norm() * e2.norm());
    if (std::acos(std::clamp(cang, -1.0, 1.0)) >= kBalancedAngle) return {pts[i], true};
  }
  Vector2d y = (a + b + c) / 3.0;
  for (int iter = 0; iter < 20000; ++iter) {
    Vector2d num = Vector2d::Zero();
    double den = 0.0;
    for (const auto& p : pts) {
      double d = (y - p).norm();
      if (d < 1e-15) return {p, true};
      num += p / d;
      den += 1.0 / d;
    }
    Vector2d next = num / den;
    if ((next - y).norm() < 1e-14) return {next, false};
    y = next;
  }
  return {y, false};
}

double planar_angle(const Vector2d& at, const Vector2d& p1, const Vector2d& p2) {
  Vector2d e1 = p1 - at, e2 = p2 - at;
  double c = e1.dot(e2) / (e1.norm() * e2.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

std::uint64_t derive_seed(std::uint64_t seed, const char* name) {
  return seed ^ fnv1a64(name);
}

// ── suites ───────────────────────────────────────────────────────────────────

SuiteResult suite_jacobi_sphere(std::uint64_t) {
  Suite s("jacobi-sphere");
  auto sph = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  struct Config {
    SurfacePoint p;
    double alpha;
  };
  for (const Config& c : {Config{{M_PI / 2, 0.3}, 0.2}, Config{{1.0, 2.0}, 1.1},
                          Config{{2.0, -1.0}, -0.7}}) {
    GeodesicPath g = shoot(sph, c.p, c.alpha, 3.0);
    JacobiScalar J = solve_jacobi(sph, g, 0.0, 1.0);
    double max_err = 0.0;
    for (int k = 0; k <= 120; ++k) {
      double t = 3.0 * k / 120.0;
      max_err = std::max(max_err, std::abs(J.value(t) - std::sin(t)));
    }
    s.check(max_err <= 1e-7, "unit sphere field vs sin(t): max err " + fmt(max_err));
    double nsp = norm_sq_prime(J, M_PI / 4.0);
    s.check(std::abs(nsp - 1.0) <= 1e-6,
            "squared-norm slope at quarter-period: " + fmt(nsp) + " vs 1");
  }
  auto sph2 = make_surface(SurfaceKind::sphere, sphere_params(2.0));
  GeodesicPath g2 = shoot(sph2, {1.2, 0.5}, 0.9, 3.0);
  JacobiScalar J2 = solve_jacobi(sph2, g2, 0.0, 1.0);
  double max_err2 = 0.0;
  for (int k = 0; k <= 120; ++k) {
    double t = 3.0 * k / 120.0;
    max_err2 = std::max(max_err2, std::abs(J2.value(t) - 2.0 * std::sin(t / 2.0)));
  }
  s.check(max_err2 <= 1e-7, "radius-2 sphere field vs 2 sin(t/2): max err " + fmt(max_err2));
  return s.res;
}

SuiteResult suite_monotone_window(std::uint64_t) {
  Suite s("monotone-window");
  auto sph = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  struct Config {
    SurfacePoint p;
    double alpha;
  };
  for (const Config& c : {Config{{M_PI / 2, 0.0}, M_PI / 2}, Config{{1.1, 0.4}, 0.8},
                          Config{{2.2, -0.9}, -1.3}}) {
    GeodesicPath g = shoot(sph, c.p, c.alpha, 2.0);
    MonotoneWindow inside = monotone_window_check(sph, g, 1.55);
    s.check(inside.monotone && inside.margin > 0.0,
            "window up to 1.55 not monotone (margin " + fmt(inside.margin) + ")");
    MonotoneWindow outside = monotone_window_check(sph, g, 1.60);
    s.check(!outside.monotone, "window up to 1.60 wrongly monotone");
  }
  return s.res;
}

SuiteResult suite_gauss_bonnet(std::uint64_t) {
  Suite s("gauss-bonnet");
  auto plane = make_surface(SurfaceKind::plane);
  Triangle tp = build_triangle(plane, {0, 0}, {1, 0}, {0.3, 0.8});
  double p8 = gauss_bonnet_residual(tp, 8);
  double p64 = gauss_bonnet_residual(tp, 64);
  s.check(p8 <= 1e-10, "plane residual at resolution 8: " + fmt(p8));
  s.check(p64 <= 1e-10, "plane residual at resolution 64: " + fmt(p64));

  auto sph = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  Triangle oct = build_triangle(sph, chart_of(rotate_octant(Vector3d::UnitX())),
                                chart_of(rotate_octant(Vector3d::UnitY())),
                                chart_of(rotate_octant(Vector3d::UnitZ())));
  double o64 = gauss_bonnet_residual(oct, 64);
  double o256 = gauss_bonnet_residual(oct, 256);
  s.check(o256 <= 1e-4, "octant residual at resolution 256: " + fmt(o256));
  s.check(o256 <= o64 + 1e-12,
          "octant residual grew under refinement: " + fmt(o64) + " -> " + fmt(o256));

  Vector3d n(std::sin(1.2) * std::cos(0.7), std::sin(1.2) * std::sin(0.7), std::cos(1.2));
  Vector3d e1 = Vector3d::UnitZ().cross(n).normalized();
  Vector3d e2 = n.cross(e1);
  double rho = std::asin(std::sqrt(2.0 * (1.0 - std::cos(0.5)) / 3.0));
  std::array<SurfacePoint, 3> sv;
  for (int i = 0; i < 3; ++i) {
    double psi = 2.0 * M_PI * i / 3.0 + 0.35;
    sv[i] = chart_of(std::cos(rho) * n + std::sin(rho) * (std::cos(psi) * e1 + std::sin(psi) * e2));
  }
  Triangle ts = build_triangle(sph, sv[0], sv[1], sv[2]);
  double s64 = gauss_bonnet_residual(ts, 64);
  s.check(s64 <= 1e-4, "small spherical cap residual at resolution 64: " + fmt(s64));

  auto ell = make_surface(SurfaceKind::ellipsoid, ellipsoid_params(1.3, 0.8));
  Triangle te = build_triangle(ell, {1.0, 0.2}, {1.5, 0.6}, {1.2, 1.0});
  double e128 = gauss_bonnet_residual(te, 128);
  s.check(e128 <= 1e-3, "ellipsoid residual at resolution 128: " + fmt(e128));

  auto hyp = make_surface(SurfaceKind::hyperbolic_disk);
  Triangle th = build_triangle(hyp, {0.3, 0.0}, {-0.2, 0.25}, {-0.1, -0.3});
  double h64 = gauss_bonnet_residual(th, 64);
  s.check(h64 <= 1e-3, "hyperbolic residual at resolution 64: " + fmt(h64));
  return s.res;
}

SuiteResult suite_existence_plane(std::uint64_t seed) {
  Suite s("existence-plane");
  auto plane = make_surface(SurfaceKind::plane);
  CounterRng rng(derive_seed(seed, "existence-plane"));
  std::uint64_t ctr = 0;
  int built = 0;
  while (built < 100) {
    double draw[6];
    for (double& d : draw) d = rng.uniform(ctr++, -1.0, 1.0);
    Vector2d a(draw[0], draw[1]), b(draw[2], draw[3]), c(draw[4], draw[5]);
    double worst = std::max(
        {planar_angle(a, b, c), planar_angle(b, c, a), planar_angle(c, a, b)});
    double min_side = std::min({(a - b).norm(), (b - c).norm(), (c - a).norm()});
    if (worst >= kBalancedAngle - 0.05 || min_side < 0.25) continue;
    ++built;
    MedianRef ref = euclid_median(a, b, c);
    Triangle t = build_triangle(plane, {a[0], a[1]}, {b[0], b[1]}, {c[0], c[1]});

    auto label = [&](const char* m) {
      return std::string(m) + " triangle " + std::to_string(built);
    };
    try {
      BalancedResult r = sweep_balanced(t);
      double miss = std::hypot(r.point.u - ref.point[0], r.point.v - ref.point[1]);
      s.check(r.converged && miss < 1e-6, label("sweep") + ": miss " + fmt(miss));
    } catch (const GeonetError& e) {
      s.check(false, label("sweep") + ": " + e.what());
    }
    try {
      BalancedResult r = descent_balanced(t);
      double miss = std::hypot(r.point.u - ref.point[0], r.point.v - ref.point[1]);
      s.check(r.converged && miss < 1e-6, label("descent") + ": miss " + fmt(miss));
    } catch (const GeonetError& e) {
      s.check(false, label("descent") + ": " + e.what());
    }
  }
  return s.res;
}

SuiteResult suite_existence_hyperbolic(std::uint64_t seed) {
  Suite s("existence-hyperbolic");
  auto hyp = make_surface(SurfaceKind::hyperbolic_disk);
  CounterRng rng(derive_seed(seed, "existence-hyperbolic"));
  std::uint64_t ctr = 0;
  int built = 0;
  while (built < 50) {
    std::array<SurfacePoint, 3> v;
    for (auto& p : v) {
      double r = 0.8 * std::sqrt(rng.uniform(ctr++));
      double phi = rng.uniform(ctr++, 0.0, 2.0 * M_PI);
      p = {r * std::cos(phi), r * std::sin(phi)};
    }
    Triangle t;
    try {
      t = build_triangle(hyp, v[0], v[1], v[2]);
    } catch (const GeonetError&) {
      continue;
    }
    double worst = std::max({t.angle[0], t.angle[1], t.angle[2]});
    double min_side = std::min({t.side[0].length, t.side[1].length, t.side[2].length});
    if (t.degenerate || worst >= kBalancedAngle - 1e-3 || min_side < 0.15) continue;
    ++built;
    try {
      BalancedResult r = sweep_balanced(t);
      s.check(r.converged && r.inside_triangle,
              "triangle " + std::to_string(built) + ": not converged (residual " +
                  fmt(r.tangent_sum_norm) + ")");
      ResidualReport rr = verify_balanced(t, r.point);
      s.check(rr.angles_pass && rr.tangents_pass,
              "triangle " + std::to_string(built) + ": residual check failed");
    } catch (const GeonetError& e) {
      s.check(false, "triangle " + std::to_string(built) + ": " + e.what());
      s.check(false, "triangle " + std::to_string(built) + ": residual check skipped");
    }
  }
  return s.res;
}

// Random geodesic cap triangle on a surface of revolution chart.
std::array<SurfacePoint, 3> cap_triangle(CounterRng& rng, std::uint64_t& ctr, double u_lo,
                                         double u_hi, double rho_lo, double rho_hi) {
  double uc = rng.uniform(ctr++, u_lo, u_hi);
  double vc = rng.uniform(ctr++, 0.0, 2.0 * M_PI);
  double rho = rng.uniform(ctr++, rho_lo, rho_hi);
  std::array<SurfacePoint, 3> v;
  for (int i = 0; i < 3; ++i) {
    double psi = rng.uniform(ctr++, 0.0, 2.0 * M_PI);
    double r = rng.uniform(ctr++, 0.5 * rho, rho);
    v[i] = {uc + r * std::cos(psi), vc + r * std::sin(psi) / std::max(std::sin(uc), 0.3)};
  }
  return v;
}

SuiteResult existence_on(const char* name, const SurfacePtr& surf, std::uint64_t seed,
                         double u_lo, double u_hi, double rho_lo, double rho_hi,
                         double min_side) {
  Suite s(name);
  CounterRng rng(derive_seed(seed, name));
  std::uint64_t ctr = 0;
  int built = 0;
  while (built < 50) {
    auto v = cap_triangle(rng, ctr, u_lo, u_hi, rho_lo, rho_hi);
    Triangle t;
    try {
      t = build_triangle(surf, v[0], v[1], v[2]);
    } catch (const GeonetError&) {
      continue;
    }
    double side_min = std::min({t.side[0].length, t.side[1].length, t.side[2].length});
    if (t.degenerate || side_min < min_side) continue;
    if (check_preconditions(t, 12).verdict != PreconditionReport::Verdict::pass) continue;
    ++built;
    try {
      SolveOptions so;
      so.override_preconditions = true;  // just screened above
      so.diameter_samples = 12;
      BalancedResult r = sweep_balanced(t, so);
      s.check(r.converged && r.inside_triangle,
              "triangle " + std::to_string(built) + ": not converged (residual " +
                  fmt(r.tangent_sum_norm) + ")");
      ResidualReport rr = verify_balanced(t, r.point);
      s.check(rr.angles_pass && rr.tangents_pass,
              "triangle " + std::to_string(built) + ": residual check failed");
    } catch (const GeonetError& e) {
      s.check(false, "triangle " + std::to_string(built) + ": " + e.what());
      s.check(false, "triangle " + std::to_string(built) + ": residual check skipped");
    }
  }
  return s.res;
}

SuiteResult suite_existence_sphere(std::uint64_t seed) {
  auto sph = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  return existence_on("existence-sphere", sph, seed, 0.7, 2.4, 0.15, 0.45, 0.1);
}

SuiteResult suite_existence_ellipsoid(std::uint64_t seed) {
  auto ell = make_surface(SurfaceKind::ellipsoid, ellipsoid_params(1.2, 0.9));
  return existence_on("existence-ellipsoid", ell, seed, 0.9, 2.2, 0.12, 0.3, 0.08);
}

SuiteResult suite_jacobi_comparison(std::uint64_t seed) {
  Suite s("jacobi-comparison");
  auto ell = make_surface(SurfaceKind::ellipsoid, ellipsoid_params(1.2, 0.9));
  double R = 1.0 / std::sqrt(*ell->curvature_upper_bound);
  CounterRng rng(derive_seed(seed, "jacobi-comparison"));
  for (int k = 0; k < 20; ++k) {
    SurfacePoint p{rng.uniform(3 * k, 0.9, 2.2), rng.uniform(3 * k + 1, 0.0, 2.0 * M_PI)};
    double alpha = rng.uniform(3 * k + 2, 0.0, 2.0 * M_PI);
    GeodesicPath g = shoot(ell, p, alpha, 0.9 * R * M_PI / 2.0);
    JacobiScalar J = solve_jacobi(ell, g, 0.0, 1.0);
    double worst_gap = 1e300;
    double worst_t = 0.0;
    for (int i = 1; i <= 40; ++i) {
      double t = g.length * i / 40.0;
      double gap = norm_sq_prime(J, t) - 2.0 * R * std::sin(t / R) * std::cos(t / R);
      if (gap < worst_gap) {
        worst_gap = gap;
        worst_t = t;
      }
    }
    s.check(worst_gap >= -1e-6, "geodesic " + std::to_string(k) + ": comparison gap " +
                                    fmt(worst_gap) + " at t " + fmt(worst_t));
  }
  return s.res;
}

SuiteResult suite_index_lemma(std::uint64_t seed) {
  Suite s("index-lemma");
  auto sph = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  double t0 = 1.4;
  GeodesicPath g = shoot(sph, {1.1, 0.4}, 0.3, t0);
  JacobiScalar J = solve_jacobi(sph, g, 0.0, 1.0);

  std::vector<FieldSample> jf;
  for (int i = 0; i <= 80; ++i) {
    double t = t0 * i / 80.0;
    jf.push_back({t, J.value(t), J.derivative(t)});
  }
  double IJ = index_form(sph, g, jf, t0);
  // Constant curvature 1 with j = sin t: the form evaluates to sin(2 t0)/2.
  s.check(std::abs(IJ - std::sin(2.0 * t0) / 2.0) <= 1e-6,
          "field energy vs closed form: " + fmt(IJ));

  CounterRng rng(derive_seed(seed, "index-lemma"));
  const int segs = 8;
  for (int k = 0; k < 20; ++k) {
    std::array<double, segs + 1> val{};
    for (int i = 0; i <= segs; ++i) {
      double t = t0 * i / segs;
      double eps = (i == 0 || i == segs) ? 0.0 : rng.uniform(k * (segs + 1) + i, -0.3, 0.3);
      val[i] = J.value(t) + eps;
    }
    std::vector<FieldSample> V;
    for (int i = 0; i < segs; ++i) {
      double ta = t0 * i / segs, tb = t0 * (i + 1) / segs;
      double slope = (val[i + 1] - val[i]) / (tb - ta);
      V.push_back({ta, val[i], slope});
      V.push_back({tb, val[i + 1], slope});
    }
    double IV = index_form(sph, g, V, t0);
    s.check(IV >= IJ - 1e-6, "field " + std::to_string(k) + ": energy " + fmt(IV) +
                                 " below the minimizer's " + fmt(IJ));
  }
  return s.res;
}

SuiteResult suite_gradient_check(std::uint64_t seed) {
  Suite s("gradient-check");
  CounterRng rng(derive_seed(seed, "gradient-check"));

  struct Family {
    const char* label;
    SurfacePtr surf;
    std::array<SurfacePoint, 3> vtx;
    double u_lo, u_hi, v_lo, v_hi;
  };
  auto sph = make_surface(SurfaceKind::sphere, sphere_params(1.0));
  Vector3d n(std::sin(1.2) * std::cos(0.7), std::sin(1.2) * std::sin(0.7), std::cos(1.2));
  Vector3d e1 = Vector3d::UnitZ().cross(n).normalized();
  Vector3d e2 = n.cross(e1);
  double rho = std::asin(std::sqrt(2.0 * (1.0 - std::cos(0.7)) / 3.0));
  std::array<SurfacePoint, 3> sv;
  for (int i = 0; i < 3; ++i) {
    double psi = 2.0 * M_PI * i / 3.0 + 0.35;
    sv[i] = chart_of(std::cos(rho) * n + std::sin(rho) * (std::cos(psi) * e1 + std::sin(psi) * e2));
  }
  std::vector<Family> families = {
      {"plane", make_surface(SurfaceKind::plane),
       {SurfacePoint{0, 0}, SurfacePoint{1, 0}, SurfacePoint{0.3, 0.7}}, 0.15, 0.55, 0.1, 0.4},
      {"sphere", sph, sv, 1.05, 1.35, 0.55, 0.85},
      {"hyperbolic", make_surface(SurfaceKind::hyperbolic_disk),
       {SurfacePoint{0.3, 0.0}, SurfacePoint{-0.2, 0.25}, SurfacePoint{-0.1, -0.3}}, -0.08, 0.15,
       -0.08, 0.1},
      {"ellipsoid", make_surface(SurfaceKind::ellipsoid, ellipsoid_params(1.2, 0.9)),
       {SurfacePoint{1.3, 0.5}, SurfacePoint{1.6, 0.75}, SurfacePoint{1.15, 0.9}}, 1.25, 1.45,
       0.6, 0.75}};

  std::uint64_t ctr = 0;
  for (const Family& fam : families) {
    for (int k = 0; k < 20; ++k) {
      SurfacePoint y{rng.uniform(ctr++, fam.u_lo, fam.u_hi),
                     rng.uniform(ctr++, fam.v_lo, fam.v_hi)};
      std::string label = std::string(fam.label) + " point " + std::to_string(k);
      try {
        Vector2d R = Vector2d::Zero();
        for (const SurfacePoint& vv : fam.vtx) {
          ConnectResult cr = connect(fam.surf, y, vv);
          if (!cr.converged) throw GeonetError(ErrorCode::no_convergence, "connect failed");
          R += frame_direction(*fam.surf, y, cr.alpha);
        }
        Vector2d pred = -(metric_at(*fam.surf, y) * R);
        auto F = [&](double uu, double vv2) {
          double acc = 0.0;
          for (const SurfacePoint& vx : fam.vtx) acc += distance(fam.surf, {uu, vv2}, vx);
          return acc;
        };
        double h = 1e-5;
        Vector2d fd((F(y.u + h, y.v) - F(y.u - h, y.v)) / (2 * h),
                    (F(y.u, y.v + h) - F(y.u, y.v - h)) / (2 * h));
        double err = (fd - pred).norm();
        s.check(err <= 1e-4 * (1.0 + fd.norm()), label + ": gradient gap " + fmt(err));
      } catch (const GeonetError& e) {
        s.check(false, label + ": " + e.what());
      }
    }
  }
  return s.res;
}

using SuiteFn = SuiteResult (*)(std::uint64_t);

struct SuiteEntry {
  const char* name;
  const char* alias;  // extra name --filter also matches ("" if none)
  SuiteFn fn;
};

const std::vector<SuiteEntry>& suite_registry() {
  static const std::vector<SuiteEntry> reg = {
      {"existence-ellipsoid", "", suite_existence_ellipsoid},
      {"existence-hyperbolic", "existence-nonpositive", suite_existence_hyperbolic},
      {"existence-plane", "existence-nonpositive", suite_existence_plane},
      {"existence-sphere", "", suite_existence_sphere},
      {"gauss-bonnet", "", suite_gauss_bonnet},
      {"gradient-check", "", suite_gradient_check},
      {"index-lemma", "", suite_index_lemma},
      {"jacobi-comparison", "", suite_jacobi_comparison},
      {"jacobi-sphere", "", suite_jacobi_sphere},
      {"monotone-window", "", suite_monotone_window},
  };
  return reg;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
  std::vector<std::string> names;
  for (const SuiteEntry& e : suite_registry()) names.emplace_back(e.name);
  return names;
}

std::vector<SuiteResult> run_verify_suites(const std::string& filter, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  for (const SuiteEntry& e : suite_registry()) {
    if (!filter.empty() && std::string(e.name).find(filter) == std::string::npos &&
        std::string(e.alias).find(filter) == std::string::npos)
      continue;
    out.push_back(e.fn(seed));
  }
  return out;
}

std::vector<ScenarioCheck> run_scenario_checks(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> paths;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      paths.push_back(entry.path().string());
  }
  if (ec) throw GeonetError(ErrorCode::io_error, "cannot read scenario directory: " + dir);
  std::sort(paths.begin(), paths.end());

  std::vector<ScenarioCheck> out;
  for (const std::string& p : paths) {
    ScenarioCheck chk;
    chk.path = p;
    try {
      Scenario sc = load_scenario(p);
      chk.expected = sc.expect_exit.value_or(0);
      RunOutcome ro = run_scenario(sc, RunOptions{});
      chk.actual = ro.exit_code;
    } catch (const GeonetError& e) {
      chk.actual = exit_input_error;
      chk.note = e.what();
    }
    chk.pass = chk.actual == chk.expected;
    out.push_back(std::move(chk));
  }
  return out;
}

std::string verify_summary(std::uint64_t seed, const std::vector<SuiteResult>& suites,
                           const std::vector<ScenarioCheck>& scenarios) {
  std::string out = std::string(kToolName) + " " + kVersion + " verify seed=" +
                    std::to_string(seed) + "\n";
  int checks = 0, failures = 0;
  for (const SuiteResult& s : suites) {
    checks += s.checks;
    failures += s.failures;
    if (s.failures == 0) {
      out += "suite " + s.name + ": PASS (checks=" + std::to_string(s.checks) + ")\n";
    } else {
      out += "suite " + s.name + ": FAIL (failures=" + std::to_string(s.failures) + "/" +
             std::to_string(s.checks) + ")\n";
      for (const std::string& d : s.details) out += "  FAIL " + d + "\n";
    }
  }
  int sc_fail = 0;
  for (const ScenarioCheck& c : scenarios) {
    if (!c.pass) ++sc_fail;
    out += "scenario " + c.path + (c.pass ? ": PASS (exit " : ": FAIL (exit ") +
           std::to_string(c.actual) + ", expected " + std::to_string(c.expected) + ")";
    if (!c.note.empty()) out += " [" + c.note + "]";
    out += "\n";
  }
  out += "total: suites=" + std::to_string(suites.size()) +
         " checks=" + std::to_string(checks) + " failures=" + std::to_string(failures);
  if (!scenarios.empty())
    out += " scenarios=" + std::to_string(scenarios.size()) +
           " scenario_failures=" + std::to_string(sc_fail);
  out += "\n";
  return out;
}

bool verify_failed(const std::vector<SuiteResult>& suites,
                   const std::vector<ScenarioCheck>& scenarios) {
  for (const SuiteResult& s : suites)
    if (s.failures > 0) return true;
  for (const ScenarioCheck& c : scenarios)
    if (!c.pass) return true;
  return false;
}

}  // namespace geonet
