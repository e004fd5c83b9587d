#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace geonet {

// A point in a surface's 2-D coordinate chart.
struct SurfacePoint {
  double u = 0.0;
  double v = 0.0;

  Eigen::Vector2d coords() const { return {u, v}; }
  static SurfacePoint from(const Eigen::Vector2d& c) { return {c[0], c[1]}; }
};

// A tangent vector attached to a chart point, components in the (du, dv) basis.
struct TangentVector {
  SurfacePoint base;
  double du = 0.0;
  double dv = 0.0;

  Eigen::Vector2d components() const { return {du, dv}; }
  static TangentVector at(const SurfacePoint& p, const Eigen::Vector2d& c) {
    return {p, c[0], c[1]};
  }
};

// Open chart domain: an axis-aligned rectangle, optionally periodic in v.
// Periodic charts (sphere, ellipsoid azimuth) ignore the v bounds.
struct ChartDomain {
  double u_min = -1.0;
  double u_max = 1.0;
  double v_min = -1.0;
  double v_max = 1.0;
  bool disk = false;        // if set, the domain is u^2 + v^2 < disk_radius^2
  double disk_radius = 1.0;
  bool v_periodic = false;
  double v_period = 2.0 * M_PI;

  bool contains(const SurfacePoint& p) const {
    if (disk) return p.u * p.u + p.v * p.v < disk_radius * disk_radius;
    if (p.u <= u_min || p.u >= u_max) return false;
    if (!v_periodic && (p.v <= v_min || p.v >= v_max)) return false;
    return true;
  }

  // Longest straight chart segment that fits; used for default step scales.
  double diagonal() const {
    if (disk) return 2.0 * disk_radius;
    double du = u_max - u_min;
    double dv = v_periodic ? v_period : (v_max - v_min);
    return std::sqrt(du * du + dv * dv);
  }
};

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kBalancedAngle = 2.0943951023931954923084289221863;  // 2*pi/3

}  // namespace geonet
