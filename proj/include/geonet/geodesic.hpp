#pragma once

#include <optional>

#include "geonet/ode.hpp"
#include "geonet/surface.hpp"

namespace geonet {

// Unit-speed geodesic integrated through the chart. Parameterized by arc
// length from the start point; `length` is what was actually covered (shorter
// than requested when the trajectory hits the chart edge or length budget).
struct GeodesicPath {
  SurfacePtr surface;
  double length = 0.0;
  bool left_chart = false;    // stopped at the chart boundary
  bool budget_capped = false; // requested length exceeded the surface budget
  OdeSolution<4> sol;         // state (u, v, du, dv) at arc-length nodes

  SurfacePoint point_at(double t) const;
  Eigen::Vector2d velocity_at(double t) const;
  SurfacePoint start() const { return point_at(0.0); }
  SurfacePoint end() const { return point_at(length); }
};

// Orthonormal-frame direction encoding at a point: alpha = 0 is the
// normalized u-direction, alpha = pi/2 the g-orthogonal complement with
// positive chart orientation.
Eigen::Vector2d frame_direction(const Surface& s, const SurfacePoint& p, double alpha);
double frame_angle(const Surface& s, const SurfacePoint& p, const Eigen::Vector2d& dir);

// Integrate the geodesic of the given frame angle. h_max bounds the node
// spacing of the stored solution so interpolated queries stay accurate;
// pass 0 to let the error controller choose freely (endpoint-only use).
GeodesicPath shoot(const SurfacePtr& s, const SurfacePoint& p, double alpha, double length,
                   double h_max = 0.02);
GeodesicPath shoot_dir(const SurfacePtr& s, const SurfacePoint& p,
                       const Eigen::Vector2d& chart_dir, double length, double h_max = 0.02);

struct ConnectOptions {
  double tol = 1e-9;   // chart-coordinate endpoint residual
  int max_iter = 60;   // Newton iterations per seed
  // Warm start (alpha, length). When given, a single Newton run is tried
  // first and the multistart + uniqueness probe is skipped on success.
  std::optional<Eigen::Vector2d> hint;
  bool dense_path = true;  // re-integrate the winner with fine node spacing
  // Stop at the first converged seed (no uniqueness probe). The result is a
  // valid connection but not certified shortest.
  bool first_hit = false;
};

struct ConnectResult {
  bool converged = false;
  double alpha = 0.0;      // frame angle of the departing direction
  double length = 0.0;
  double residual = 0.0;   // endpoint miss of the reported solution
  int iterations = 0;      // Newton iterations spent on the winning seed
  int distinct_solutions = 0;
  // Two solutions with clearly different departing angles but lengths within
  // 1e-6 of each other: the minimizer itself is ambiguous.
  bool non_unique = false;
  GeodesicPath path;
};

// Solve the two-point connection problem by single shooting on (alpha,
// length). Multiple seeds are polished and deduplicated; the shortest
// solution wins.
ConnectResult connect(const SurfacePtr& s, const SurfacePoint& a, const SurfacePoint& b,
                      const ConnectOptions& opts = {});

// Length of the shortest found connecting geodesic.
// Throws GeonetError(no_convergence) when no seed converges.
double distance(const SurfacePtr& s, const SurfacePoint& a, const SurfacePoint& b);

}  // namespace geonet
