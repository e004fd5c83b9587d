#include "geonet/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "geonet/errors.hpp"

namespace geonet {

namespace {

using Eigen::Vector2d;
using Eigen::Vector4d;

// Geodesic equation as a first-order system in (u, v, du, dv).
OdeSolution<4> run_geodesic(const Surface& s, const Vector4d& y0, double length, double h_max) {
  std::function<Vector4d(double, const Vector4d&)> rhs = [&s](double, const Vector4d& y) {
    ChristoffelSymbols c = s.christoffel({y[0], y[1]});
    Vector4d d;
    d[0] = y[2];
    d[1] = y[3];
    d[2] = -(c.u_uu * y[2] * y[2] + 2.0 * c.u_uv * y[2] * y[3] + c.u_vv * y[3] * y[3]);
    d[3] = -(c.v_uu * y[2] * y[2] + 2.0 * c.v_uv * y[2] * y[3] + c.v_vv * y[3] * y[3]);
    return d;
  };
  std::function<bool(double, const Vector4d&)> stop = [&s](double, const Vector4d& y) {
    return !s.domain.contains({y[0], y[1]});
  };
  OdeOptions opts;
  opts.h_max = h_max;
  OdeSolution<4> sol = integrate<4>(rhs, y0, 0.0, length, opts, stop);
  if (sol.step_limited)
    throw GeonetError(ErrorCode::no_convergence, "geodesic integrator hit its step limit");
  return sol;
}

GeodesicPath make_path(const SurfacePtr& s, const Vector4d& y0, double length, double h_max,
                       bool budget_capped) {
  GeodesicPath path;
  path.surface = s;
  path.budget_capped = budget_capped;
  if (length <= 0.0) {
    path.sol.t = {0.0};
    path.sol.y = {y0};
    path.sol.f = {Vector4d::Zero()};
    path.length = 0.0;
    return path;
  }
  path.sol = run_geodesic(*s, y0, length, h_max);
  path.length = path.sol.t_end();
  path.left_chart = path.sol.stopped;
  return path;
}

Vector4d initial_state(const Surface& s, const SurfacePoint& p, double alpha) {
  Vector2d d = frame_direction(s, p, alpha);
  return {p.u, p.v, d[0], d[1]};
}

}  // namespace

SurfacePoint GeodesicPath::point_at(double t) const {
  if (sol.t.size() < 2) return {sol.y[0][0], sol.y[0][1]};
  Vector4d y = sol.eval(std::clamp(t, 0.0, length));
  return {y[0], y[1]};
}

Eigen::Vector2d GeodesicPath::velocity_at(double t) const {
  if (sol.t.size() < 2) return {sol.y[0][2], sol.y[0][3]};
  Vector4d y = sol.eval(std::clamp(t, 0.0, length));
  return {y[2], y[3]};
}

Eigen::Vector2d frame_direction(const Surface& s, const SurfacePoint& p, double alpha) {
  Eigen::Matrix2d g = metric_at(s, p);
  double sq00 = std::sqrt(g(0, 0));
  double det = g.determinant();
  Vector2d e1{1.0 / sq00, 0.0};
  Vector2d e2{-g(0, 1) / (sq00 * std::sqrt(det)), sq00 / std::sqrt(det)};
  return std::cos(alpha) * e1 + std::sin(alpha) * e2;
}

double frame_angle(const Surface& s, const SurfacePoint& p, const Eigen::Vector2d& dir) {
  Eigen::Matrix2d g = metric_at(s, p);
  double sq00 = std::sqrt(g(0, 0));
  double det = g.determinant();
  Vector2d e1{1.0 / sq00, 0.0};
  Vector2d e2{-g(0, 1) / (sq00 * std::sqrt(det)), sq00 / std::sqrt(det)};
  double x1 = dir.dot(g * e1);
  double x2 = dir.dot(g * e2);
  return std::atan2(x2, x1);
}

GeodesicPath shoot(const SurfacePtr& s, const SurfacePoint& p, double alpha, double length,
                   double h_max) {
  if (length < 0.0)
    throw GeonetError(ErrorCode::invalid_input, "shoot: negative length");
  if (!s->domain.contains(p))
    throw GeonetError(ErrorCode::outside_chart, "shoot: start point outside the chart");
  bool capped = length > s->length_budget;
  double run = capped ? s->length_budget : length;
  return make_path(s, initial_state(*s, p, alpha), run, h_max, capped);
}

GeodesicPath shoot_dir(const SurfacePtr& s, const SurfacePoint& p, const Eigen::Vector2d& chart_dir,
                       double length, double h_max) {
  return shoot(s, p, frame_angle(*s, p, chart_dir), length, h_max);
}

namespace {

struct Candidate {
  double alpha = 0.0;
  double length = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

double wrap_angle(double a) {
  double w = std::remainder(a, kTwoPi);
  return w == -M_PI ? M_PI : w;
}

// Endpoint miss of the shot (alpha, L), nearest lift for periodic charts.
Vector2d shot_residual(const Surface& s, const SurfacePoint& a, const SurfacePoint& b,
                       double alpha, double L) {
  OdeSolution<4> sol = run_geodesic(s, initial_state(s, a, alpha), std::max(L, 1e-12), 0.0);
  SurfacePoint end{sol.y.back()[0], sol.y.back()[1]};
  Vector2d d = b.coords() - end.coords();
  if (s.domain.v_periodic) d[1] = std::remainder(d[1], s.domain.v_period);
  return -d;
}

std::optional<Candidate> polish_seed(const Surface& s, const SurfacePoint& a,
                                     const SurfacePoint& b, double alpha0, double L0, double tol,
                                     int max_iter) {
  double alpha = alpha0;
  double L = std::clamp(L0, 1e-9, s.length_budget);
  Vector2d r = shot_residual(s, a, b, alpha, L);
  double rn = r.norm();
  int iter = 0;
  for (; iter < max_iter && rn > tol; ++iter) {
    double da = 1e-7;
    double dL = 1e-7 * (1.0 + std::abs(L));
    Vector2d ra = shot_residual(s, a, b, alpha + da, L);
    Vector2d rl = shot_residual(s, a, b, alpha, std::min(L + dL, s.length_budget));
    Eigen::Matrix2d J;
    J.col(0) = (ra - r) / da;
    J.col(1) = (rl - r) / dL;
    double det = J.determinant();
    if (std::abs(det) < 1e-14 * (1.0 + J.cwiseAbs().maxCoeff())) return std::nullopt;
    Vector2d step = J.inverse() * (-r);

    double lam = 1.0;
    bool improved = false;
    for (int halve = 0; halve < 10; ++halve, lam *= 0.5) {
      double na = alpha + lam * step[0];
      double nL = std::clamp(L + lam * step[1], 1e-9, s.length_budget);
      Vector2d nr = shot_residual(s, a, b, na, nL);
      if (nr.norm() < rn * (1.0 - 1e-4) || nr.norm() <= tol) {
        alpha = na;
        L = nL;
        r = nr;
        rn = nr.norm();
        improved = true;
        break;
      }
    }
    if (!improved) return std::nullopt;
  }
  if (rn > tol) return std::nullopt;
  return Candidate{wrap_angle(alpha), L, rn, iter};
}

}  // namespace

ConnectResult connect(const SurfacePtr& s, const SurfacePoint& a, const SurfacePoint& b,
                      const ConnectOptions& opts) {
  if (!s->domain.contains(a) || !s->domain.contains(b))
    throw GeonetError(ErrorCode::outside_chart, "connect: endpoint outside the chart");

  ConnectResult res;

  Vector2d disp = chart_displacement(*s, a, b);
  double chord = g_norm(*s, a, disp);
  if (chord < 1e-13) {  // coincident endpoints: trivial connection
    res.converged = true;
    res.distinct_solutions = 1;
    res.path = make_path(s, {a.u, a.v, 0.0, 0.0}, 0.0, 0.02, false);
    return res;
  }

  // Warm start: one Newton run, no uniqueness probing.
  if (opts.hint) {
    auto cand = polish_seed(*s, a, b, (*opts.hint)[0], (*opts.hint)[1], opts.tol, opts.max_iter);
    if (cand) {
      res.converged = true;
      res.alpha = cand->alpha;
      res.length = cand->length;
      res.residual = cand->residual;
      res.iterations = cand->iterations;
      res.distinct_solutions = 1;
      if (opts.dense_path)
        res.path = shoot(s, a, cand->alpha, cand->length, 0.02);
      return res;
    }
  }

  // Multistart: the chord heuristic plus eight fixed departing angles.
  double alpha_h = frame_angle(*s, a, disp);
  std::vector<std::pair<double, double>> seeds;
  seeds.emplace_back(alpha_h, chord);
  for (int k = 0; k < 8; ++k) seeds.emplace_back(-M_PI + k * M_PI / 4.0, chord);

  std::vector<Candidate> sols;
  int total_iters = 0;
  for (const auto& [a0, l0] : seeds) {
    auto cand = polish_seed(*s, a, b, a0, l0, opts.tol, opts.max_iter);
    if (!cand) continue;
    total_iters += cand->iterations;
    if (opts.first_hit) {
      sols.push_back(*cand);
      break;
    }
    bool dup = false;
    for (auto& known : sols) {
      double dang = std::abs(std::remainder(cand->alpha - known.alpha, kTwoPi));
      if (dang <= 1e-3) {
        dup = true;
        if (cand->length < known.length - 1e-12) known = *cand;
        break;
      }
    }
    if (!dup) sols.push_back(*cand);
  }

  res.iterations = total_iters;
  res.distinct_solutions = static_cast<int>(sols.size());
  if (sols.empty()) return res;

  const Candidate* best = &sols[0];
  for (const auto& c : sols)
    if (c.length < best->length) best = &c;
  for (const auto& c : sols)
    if (&c != best && std::abs(c.length - best->length) <= 1e-6) res.non_unique = true;

  res.converged = true;
  res.alpha = best->alpha;
  res.length = best->length;
  res.residual = best->residual;
  res.iterations = best->iterations;
  if (opts.dense_path) res.path = shoot(s, a, best->alpha, best->length, 0.02);
  return res;
}

double distance(const SurfacePtr& s, const SurfacePoint& a, const SurfacePoint& b) {
  ConnectOptions opts;
  opts.dense_path = false;
  ConnectResult r = connect(s, a, b, opts);
  if (!r.converged)
    throw GeonetError(ErrorCode::no_convergence, "distance: no connecting geodesic found");
  return r.length;
}

}  // namespace geonet
