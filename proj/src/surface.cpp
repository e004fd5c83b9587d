#include "geonet/surface.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "geonet/errors.hpp"
#include "geonet/expression.hpp"

namespace geonet {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw GeonetError(code, msg); }

std::string point_str(const SurfacePoint& p) {
  std::ostringstream os;
  os << "(" << p.u << ", " << p.v << ")";
  return os.str();
}

void require_in_chart(const Surface& s, const SurfacePoint& p) {
  if (!s.domain.contains(p))
    fail(ErrorCode::outside_chart,
         "point " + point_str(p) + " lies outside the " + s.name + " chart");
}

double get_scalar(const SurfaceParams& params, const std::string& key, double fallback) {
  auto it = params.scalars.find(key);
  return it == params.scalars.end() ? fallback : it->second;
}

void reject_unknown_scalars(const SurfaceParams& params, const std::set<std::string>& allowed,
                            const std::string& kind) {
  for (const auto& [key, value] : params.scalars) {
    (void)value;
    if (!allowed.count(key))
      fail(ErrorCode::invalid_input, "unknown parameter \"" + key + "\" for surface " + kind);
  }
}

// Validation probe: SPD across the chart, analytic-vs-FD curvature agreement,
// and honesty of any declared curvature bound. Sample points stay clear of the
// chart edge so the FD stencils remain inside.
void validate_surface(const Surface& s) {
  std::vector<SurfacePoint> grid;
  if (s.domain.disk) {
    for (int i = 1; i <= 9; ++i) {
      double r = s.domain.disk_radius * 0.1 * i * 0.92;
      for (int j = 0; j < 16; ++j) {
        double a = kTwoPi * j / 16.0;
        grid.push_back({r * std::cos(a), r * std::sin(a)});
      }
    }
    grid.push_back({0.0, 0.0});
  } else {
    double inset_u = 0.005 * (s.domain.u_max - s.domain.u_min);
    double v_lo = s.domain.v_periodic ? -M_PI : s.domain.v_min;
    double v_hi = s.domain.v_periodic ? M_PI : s.domain.v_max;
    double inset_v = s.domain.v_periodic ? 0.0 : 0.005 * (v_hi - v_lo);
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j)
        grid.push_back({s.domain.u_min + inset_u + (s.domain.u_max - s.domain.u_min - 2 * inset_u) * i / 20.0,
                        v_lo + inset_v + (v_hi - v_lo - 2 * inset_v) * j / 20.0});
  }

  double k_max = -1e300;
  int idx = 0;
  for (const auto& p : grid) {
    Eigen::Matrix2d g = s.metric(p);
    double scale = std::abs(g(0, 0)) + std::abs(g(1, 1));
    if (std::abs(g(0, 1) - g(1, 0)) > 1e-12 * scale)
      fail(ErrorCode::invalid_input,
           s.name + ": metric is not symmetric at " + point_str(p));
    if (!(g(0, 0) > 0.0) || !(g.determinant() > 0.0))
      fail(ErrorCode::invalid_input,
           s.name + ": metric is not positive definite at " + point_str(p));

    double k = s.curvature(p);
    k_max = std::max(k_max, k);

    // FD cross-check on a sparse subset; skip points whose stencil would
    // leave the chart.
    if (idx++ % 13 == 0) {
      double reach = 7e-4;
      SurfacePoint lo{p.u - reach, p.v - reach}, hi{p.u + reach, p.v + reach};
      if (s.domain.contains(lo) && s.domain.contains(hi)) {
        double k_fd = curvature_brioschi_fd(s.metric, p);
        if (std::abs(k - k_fd) > 1e-3 * (1.0 + std::abs(k)))
          fail(ErrorCode::inconsistent,
               s.name + ": analytic curvature disagrees with finite differences at " +
                   point_str(p));
      }
    }
  }

  if (s.curvature_upper_bound && k_max > *s.curvature_upper_bound + 1e-9)
    fail(ErrorCode::invalid_input,
         s.name + ": sampled curvature exceeds the declared upper bound");
}

SurfacePtr finish(Surface s, const SurfaceParams& params) {
  if (params.curvature_upper_bound) s.curvature_upper_bound = params.curvature_upper_bound;
  if (params.length_budget) {
    if (*params.length_budget <= 0.0)
      fail(ErrorCode::invalid_input, s.name + ": length_budget must be positive");
    s.length_budget = *params.length_budget;
  }
  validate_surface(s);
  return std::make_shared<const Surface>(std::move(s));
}

SurfacePtr make_plane(const SurfaceParams& params) {
  reject_unknown_scalars(params, {"extent"}, "plane");
  double extent = get_scalar(params, "extent", 100.0);
  if (!(extent > 0.0)) fail(ErrorCode::invalid_input, "plane: extent must be positive");

  Surface s;
  s.kind = SurfaceKind::plane;
  s.name = "plane";
  s.domain = {-extent, extent, -extent, extent};
  s.metric = [](const SurfacePoint&) { return Eigen::Matrix2d::Identity().eval(); };
  s.christoffel = [](const SurfacePoint&) { return ChristoffelSymbols{}; };
  s.curvature = [](const SurfacePoint&) { return 0.0; };
  s.curvature_upper_bound = 0.0;
  s.length_budget = 4.0 * s.domain.diagonal();
  s.params["extent"] = extent;
  return finish(std::move(s), params);
}

// Polar chart shared by the sphere and the ellipsoid of revolution: u is the
// polar angle, v the (periodic) azimuth; the poles are excluded by theta_min.
ChartDomain polar_domain(double theta_min) {
  ChartDomain d;
  d.u_min = theta_min;
  d.u_max = M_PI - theta_min;
  d.v_min = -M_PI;
  d.v_max = M_PI;
  d.v_periodic = true;
  d.v_period = kTwoPi;
  return d;
}

SurfacePtr make_sphere(const SurfaceParams& params) {
  reject_unknown_scalars(params, {"radius", "theta_min"}, "sphere");
  double R = get_scalar(params, "radius", 1.0);
  double theta_min = get_scalar(params, "theta_min", 1e-3);
  if (!(R > 0.0)) fail(ErrorCode::invalid_input, "sphere: radius must be positive");
  if (!(theta_min > 0.0 && theta_min < M_PI / 2.0))
    fail(ErrorCode::invalid_input, "sphere: theta_min must lie in (0, pi/2)");

  Surface s;
  s.kind = SurfaceKind::sphere;
  s.name = "sphere";
  s.domain = polar_domain(theta_min);
  double R2 = R * R;
  s.metric = [R2](const SurfacePoint& p) {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    double st = std::sin(p.u);
    g(0, 0) = R2;
    g(1, 1) = R2 * st * st;
    return g;
  };
  s.christoffel = [](const SurfacePoint& p) {
    ChristoffelSymbols c;
    double st = std::sin(p.u), ct = std::cos(p.u);
    c.u_vv = -st * ct;
    c.v_uv = ct / st;
    return c;
  };
  s.curvature = [R2](const SurfacePoint&) { return 1.0 / R2; };
  s.curvature_upper_bound = 1.0 / R2;
  s.length_budget = 1.1 * M_PI * R;
  s.params["radius"] = R;
  s.params["theta_min"] = theta_min;
  return finish(std::move(s), params);
}

SurfacePtr make_hyperbolic(const SurfaceParams& params) {
  reject_unknown_scalars(params, {}, "hyperbolic_disk");

  Surface s;
  s.kind = SurfaceKind::hyperbolic_disk;
  s.name = "hyperbolic_disk";
  s.domain.disk = true;
  s.domain.disk_radius = 1.0;
  s.metric = [](const SurfacePoint& p) {
    double q = 1.0 - p.u * p.u - p.v * p.v;
    double lam = 4.0 / (q * q);
    return (lam * Eigen::Matrix2d::Identity()).eval();
  };
  // Conformal metric e^{2f} I with f = log(2/(1-r^2));
  // f_u = 2u/(1-r^2), f_v = 2v/(1-r^2).
  s.christoffel = [](const SurfacePoint& p) {
    double q = 1.0 - p.u * p.u - p.v * p.v;
    double fu = 2.0 * p.u / q, fv = 2.0 * p.v / q;
    ChristoffelSymbols c;
    c.u_uu = fu;
    c.u_uv = fv;
    c.u_vv = -fu;
    c.v_uu = -fv;
    c.v_uv = fu;
    c.v_vv = fv;
    return c;
  };
  s.curvature = [](const SurfacePoint&) { return -1.0; };
  s.curvature_upper_bound = -1.0;
  // Chart diameter is 2 but lengths diverge toward the rim; 40 covers
  // everything reachable before coordinates get within ~1e-8 of the boundary.
  s.length_budget = 40.0;
  return finish(std::move(s), params);
}

SurfacePtr make_ellipsoid(const SurfaceParams& params) {
  reject_unknown_scalars(params, {"a", "c", "theta_min"}, "ellipsoid");
  double a = get_scalar(params, "a", 1.0);
  double c = get_scalar(params, "c", 1.0);
  double theta_min = get_scalar(params, "theta_min", 1e-3);
  if (!(a > 0.0) || !(c > 0.0))
    fail(ErrorCode::invalid_input, "ellipsoid: semi-axes must be positive");
  if (!(theta_min > 0.0 && theta_min < M_PI / 2.0))
    fail(ErrorCode::invalid_input, "ellipsoid: theta_min must lie in (0, pi/2)");

  Surface s;
  s.kind = SurfaceKind::ellipsoid;
  s.name = "ellipsoid";
  s.domain = polar_domain(theta_min);
  double a2 = a * a, c2 = c * c;
  // Surface of revolution (a sin u cos v, a sin u sin v, c cos u):
  //   E = a^2 cos^2 u + c^2 sin^2 u,  G = a^2 sin^2 u,  F = 0.
  auto E_of = [a2, c2](double u) {
    double st = std::sin(u), ct = std::cos(u);
    return a2 * ct * ct + c2 * st * st;
  };
  s.metric = [a2, E_of](const SurfacePoint& p) {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    double st = std::sin(p.u);
    g(0, 0) = E_of(p.u);
    g(1, 1) = a2 * st * st;
    return g;
  };
  s.christoffel = [a2, c2, E_of](const SurfacePoint& p) {
    double st = std::sin(p.u), ct = std::cos(p.u);
    double E = E_of(p.u);
    ChristoffelSymbols ch;
    ch.u_uu = (c2 - a2) * st * ct / E;
    ch.u_vv = -a2 * st * ct / E;
    ch.v_uv = ct / st;
    return ch;
  };
  s.curvature = [c2, E_of](const SurfacePoint& p) {
    double E = E_of(p.u);
    return c2 / (E * E);
  };
  double m = std::min(a, c);
  s.curvature_upper_bound = c2 / (m * m * m * m);
  s.length_budget = 1.1 * M_PI * std::max(a, c);
  s.params["a"] = a;
  s.params["c"] = c;
  s.params["theta_min"] = theta_min;
  return finish(std::move(s), params);
}

SurfacePtr make_user(const SurfaceParams& params) {
  reject_unknown_scalars(params, {}, "user_metric");
  if (params.g11.empty() || params.g12.empty() || params.g22.empty())
    fail(ErrorCode::invalid_input, "user_metric: g11, g12, g22 expressions are required");
  if (!params.user_domain)
    fail(ErrorCode::invalid_input, "user_metric: a chart domain is required");
  ChartDomain dom = *params.user_domain;
  if (!dom.disk && (!(dom.u_min < dom.u_max) || !(dom.v_min < dom.v_max)))
    fail(ErrorCode::invalid_input, "user_metric: empty chart domain");

  Expression e11 = Expression::parse(params.g11);
  Expression e12 = Expression::parse(params.g12);
  Expression e22 = Expression::parse(params.g22);

  Surface s;
  s.kind = SurfaceKind::user_metric;
  s.name = "user_metric";
  s.domain = dom;
  s.metric = [e11, e12, e22](const SurfacePoint& p) {
    Eigen::Matrix2d g;
    g(0, 0) = e11.eval(p.u, p.v);
    g(0, 1) = g(1, 0) = e12.eval(p.u, p.v);
    g(1, 1) = e22.eval(p.u, p.v);
    return g;
  };
  auto metric = s.metric;
  s.christoffel = [metric](const SurfacePoint& p) { return christoffel_fd(metric, p); };
  s.curvature = [metric](const SurfacePoint& p) { return curvature_brioschi_fd(metric, p); };
  s.length_budget = 4.0 * dom.diagonal();
  return finish(std::move(s), params);
}

}  // namespace

SurfacePtr make_surface(SurfaceKind kind, const SurfaceParams& params) {
  switch (kind) {
    case SurfaceKind::plane: return make_plane(params);
    case SurfaceKind::sphere: return make_sphere(params);
    case SurfaceKind::hyperbolic_disk: return make_hyperbolic(params);
    case SurfaceKind::ellipsoid: return make_ellipsoid(params);
    case SurfaceKind::user_metric: return make_user(params);
  }
  fail(ErrorCode::invalid_input, "unknown surface kind");
}

SurfacePtr make_surface(const std::string& kind_name, const SurfaceParams& params) {
  for (auto kind : {SurfaceKind::plane, SurfaceKind::sphere, SurfaceKind::hyperbolic_disk,
                    SurfaceKind::ellipsoid, SurfaceKind::user_metric}) {
    if (kind_name == surface_kind_name(kind)) return make_surface(kind, params);
  }
  fail(ErrorCode::invalid_input, "unknown surface kind \"" + kind_name + "\"");
}

const char* surface_kind_name(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::plane: return "plane";
    case SurfaceKind::sphere: return "sphere";
    case SurfaceKind::hyperbolic_disk: return "hyperbolic_disk";
    case SurfaceKind::ellipsoid: return "ellipsoid";
    case SurfaceKind::user_metric: return "user_metric";
  }
  return "unknown";
}

Eigen::Matrix2d metric_at(const Surface& s, const SurfacePoint& p) {
  require_in_chart(s, p);
  return s.metric(p);
}

ChristoffelSymbols christoffel_at(const Surface& s, const SurfacePoint& p) {
  require_in_chart(s, p);
  return s.christoffel(p);
}

double curvature_at(const Surface& s, const SurfacePoint& p) {
  require_in_chart(s, p);
  return s.curvature(p);
}

double g_inner(const Surface& s, const SurfacePoint& p, const Eigen::Vector2d& a,
               const Eigen::Vector2d& b) {
  Eigen::Matrix2d g = metric_at(s, p);
  return a.dot(g * b);
}

double g_norm(const Surface& s, const SurfacePoint& p, const Eigen::Vector2d& v) {
  return std::sqrt(std::max(0.0, g_inner(s, p, v, v)));
}

double angle_between_vectors(const Surface& s, const SurfacePoint& p, const Eigen::Vector2d& v1,
                             const Eigen::Vector2d& v2) {
  Eigen::Matrix2d g = metric_at(s, p);
  double n1 = std::sqrt(std::max(0.0, v1.dot(g * v1)));
  double n2 = std::sqrt(std::max(0.0, v2.dot(g * v2)));
  double floor = 1e-14 * std::sqrt(g.trace());
  if (n1 <= floor || n2 <= floor)
    fail(ErrorCode::invalid_input, "angle of a zero tangent vector at " + point_str(p));
  double c = v1.dot(g * v2) / (n1 * n2);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

ChristoffelSymbols christoffel_fd(
    const std::function<Eigen::Matrix2d(const SurfacePoint&)>& metric, const SurfacePoint& p,
    double h) {
  double hu = h, hv = h;
  Eigen::Matrix2d dgu = (metric({p.u + hu, p.v}) - metric({p.u - hu, p.v})) / (2.0 * hu);
  Eigen::Matrix2d dgv = (metric({p.u, p.v + hv}) - metric({p.u, p.v - hv})) / (2.0 * hv);
  Eigen::Matrix2d dg[2] = {dgu, dgv};
  Eigen::Matrix2d ginv = metric(p).inverse();
  double gamma[2][2][2];
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double sum = 0.0;
        for (int l = 0; l < 2; ++l)
          sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma[k][i][j] = 0.5 * sum;
      }
  ChristoffelSymbols c;
  c.u_uu = gamma[0][0][0];
  c.u_uv = gamma[0][0][1];
  c.u_vv = gamma[0][1][1];
  c.v_uu = gamma[1][0][0];
  c.v_uv = gamma[1][0][1];
  c.v_vv = gamma[1][1][1];
  return c;
}

double curvature_brioschi_fd(
    const std::function<Eigen::Matrix2d(const SurfacePoint&)>& metric, const SurfacePoint& p,
    double h) {
  double hu = h, hv = h;
  // 3x3 stencil of metric samples.
  Eigen::Matrix2d m[3][3];
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) m[i + 1][j + 1] = metric({p.u + i * hu, p.v + j * hv});

  auto E = [&](int i, int j) { return m[i + 1][j + 1](0, 0); };
  auto F = [&](int i, int j) { return m[i + 1][j + 1](0, 1); };
  auto G = [&](int i, int j) { return m[i + 1][j + 1](1, 1); };

  double E0 = E(0, 0), F0 = F(0, 0), G0 = G(0, 0);
  double E_u = (E(1, 0) - E(-1, 0)) / (2 * hu), E_v = (E(0, 1) - E(0, -1)) / (2 * hv);
  double G_u = (G(1, 0) - G(-1, 0)) / (2 * hu), G_v = (G(0, 1) - G(0, -1)) / (2 * hv);
  double F_u = (F(1, 0) - F(-1, 0)) / (2 * hu), F_v = (F(0, 1) - F(0, -1)) / (2 * hv);
  double E_vv = (E(0, 1) - 2 * E0 + E(0, -1)) / (hv * hv);
  double G_uu = (G(1, 0) - 2 * G0 + G(-1, 0)) / (hu * hu);
  double F_uv = (F(1, 1) - F(1, -1) - F(-1, 1) + F(-1, -1)) / (4 * hu * hv);

  Eigen::Matrix3d M1, M2;
  M1 << -0.5 * E_vv + F_uv - 0.5 * G_uu, 0.5 * E_u, F_u - 0.5 * E_v,
        F_v - 0.5 * G_u, E0, F0,
        0.5 * G_v, F0, G0;
  M2 << 0.0, 0.5 * E_v, 0.5 * G_u,
        0.5 * E_v, E0, F0,
        0.5 * G_u, F0, G0;
  double det_g = E0 * G0 - F0 * F0;
  return (M1.determinant() - M2.determinant()) / (det_g * det_g);
}

Eigen::Vector2d chart_displacement(const Surface& s, const SurfacePoint& p,
                                   const SurfacePoint& q) {
  Eigen::Vector2d d = q.coords() - p.coords();
  if (s.domain.v_periodic) d[1] = std::remainder(d[1], s.domain.v_period);
  return d;
}

SurfacePoint canonical_point(const Surface& s, const SurfacePoint& p) {
  if (!s.domain.v_periodic) return p;
  return {p.u, std::remainder(p.v, s.domain.v_period)};
}

}  // namespace geonet
