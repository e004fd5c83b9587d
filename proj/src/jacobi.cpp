#include "geonet/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geonet/errors.hpp"

namespace geonet {

namespace {

double checked_param(const JacobiScalar& J, double t) {
  if (t < -1e-12 || t > J.length + 1e-12)
    throw GeonetError(ErrorCode::invalid_input, "jacobi field queried outside its range");
  return std::clamp(t, 0.0, J.length);
}

}  // namespace

double JacobiScalar::value(double t) const { return sol.eval(checked_param(*this, t))[0]; }

double JacobiScalar::derivative(double t) const { return sol.eval(checked_param(*this, t))[1]; }

JacobiScalar solve_jacobi(const SurfacePtr& s, const GeodesicPath& g, double j0, double jp0) {
  if (!(g.length > 0.0))
    throw GeonetError(ErrorCode::invalid_input, "solve_jacobi: zero-length geodesic");

  // Node spacing fine enough to bracket every root: oscillation wavelength is
  // bounded below via the declared curvature bound when there is one.
  double h_max = 0.02;
  if (s->curvature_upper_bound && *s->curvature_upper_bound > 0.0)
    h_max = std::min(h_max, 0.01 / std::sqrt(*s->curvature_upper_bound));

  std::function<Eigen::Vector2d(double, const Eigen::Vector2d&)> rhs =
      [&](double t, const Eigen::Vector2d& y) {
        double K = s->curvature(g.point_at(t));
        return Eigen::Vector2d{y[1], -K * y[0]};
      };

  JacobiScalar J;
  J.j0 = j0;
  J.jp0 = jp0;
  J.length = g.length;
  OdeOptions opts;
  opts.h_max = h_max;
  J.sol = integrate<2>(rhs, {j0, jp0}, 0.0, g.length, opts);
  if (J.sol.step_limited)
    throw GeonetError(ErrorCode::no_convergence, "solve_jacobi: integrator hit its step limit");
  return J;
}

double norm_sq_prime(const JacobiScalar& J, double t) {
  Eigen::Vector2d y = J.sol.eval(checked_param(J, t));
  return 2.0 * y[0] * y[1];
}

double index_form(const SurfacePtr& s, const GeodesicPath& g, const std::vector<FieldSample>& V,
                  double t0) {
  if (!(t0 > 0.0) || t0 > g.length + 1e-9)
    throw GeonetError(ErrorCode::invalid_input, "index_form: t0 outside the geodesic range");
  if (V.size() < 8)
    throw GeonetError(ErrorCode::invalid_input, "index_form: sample grid too coarse");
  if (std::abs(V.front().t) > 1e-12 || std::abs(V.front().v) > 1e-12)
    throw GeonetError(ErrorCode::invalid_input, "index_form: field must start at V(0) = 0");
  if (V.back().t < t0 - 1e-9)
    throw GeonetError(ErrorCode::invalid_input, "index_form: samples do not cover [0, t0]");

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < V.size(); ++i) {
    double a = V[i].t, b = V[i + 1].t;
    if (b < a - 1e-12)
      throw GeonetError(ErrorCode::invalid_input, "index_form: samples out of order");
    if (b - a <= 1e-15) continue;  // duplicated kink node
    if (a >= t0 - 1e-15) break;
    double hi = std::min(b, t0);

    // Cubic Hermite on [a, b] for (v, v').
    double h = b - a;
    auto field = [&](double tq) {
      double x = (tq - a) / h, x2 = x * x, x3 = x2 * x;
      double v = (2 * x3 - 3 * x2 + 1) * V[i].v + h * (x3 - 2 * x2 + x) * V[i].vp +
                 (-2 * x3 + 3 * x2) * V[i + 1].v + h * (x3 - x2) * V[i + 1].vp;
      double vp = ((6 * x2 - 6 * x) / h) * V[i].v + (3 * x2 - 4 * x + 1) * V[i].vp +
                  ((-6 * x2 + 6 * x) / h) * V[i + 1].v + (3 * x2 - 2 * x) * V[i + 1].vp;
      return std::pair<double, double>{v, vp};
    };
    auto integrand = [&](double tq) {
      auto [v, vp] = field(tq);
      double K = s->curvature(g.point_at(tq));
      return vp * vp - K * v * v;
    };
    double mid = 0.5 * (a + hi);
    total += (hi - a) / 6.0 * (integrand(a) + 4.0 * integrand(mid) + integrand(hi));
  }
  return total;
}

std::optional<double> first_conjugate_point(const JacobiScalar& J) {
  if (std::abs(J.j0) > 1e-12 || J.jp0 == 0.0)
    throw GeonetError(ErrorCode::invalid_input,
                      "first_conjugate_point: field must start with j0 = 0, jp0 != 0");
  const auto& t = J.sol.t;
  const auto& y = J.sol.y;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] <= 1e-9) continue;  // skip the built-in root at t = 0
    double a = y[i][0], b = y[i + 1][0];
    if (a == 0.0) return t[i];
    if (a * b < 0.0) {
      double lo = t[i], hiT = t[i + 1];
      for (int k = 0; k < 80 && hiT - lo > 1e-10; ++k) {
        double mid = 0.5 * (lo + hiT);
        (J.sol.eval(mid)[0] * a > 0.0 ? lo : hiT) = mid;
      }
      return 0.5 * (lo + hiT);
    }
  }
  return std::nullopt;
}

MonotoneWindow monotone_window_check(const SurfacePtr& s, const GeodesicPath& g, double t_max) {
  if (!(t_max > 0.0) || t_max > g.length + 1e-9)
    throw GeonetError(ErrorCode::invalid_input, "monotone_window_check: t_max outside the range");
  JacobiScalar J = solve_jacobi(s, g, 0.0, 1.0);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < J.sol.t.size(); ++i) {
    double t = J.sol.t[i];
    if (t <= 0.0 || t > t_max) continue;
    margin = std::min(margin, 2.0 * J.sol.y[i][0] * J.sol.y[i][1]);
  }
  margin = std::min(margin, norm_sq_prime(J, std::min(t_max, J.length)));
  return {margin > 0.0, margin};
}

}  // namespace geonet
