#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "geonet/types.hpp"

namespace geonet {

enum class SurfaceKind { plane, sphere, hyperbolic_disk, ellipsoid, user_metric };

// Christoffel symbols of the second kind; index order Gamma^a_{bc}.
struct ChristoffelSymbols {
  double u_uu = 0.0;
  double u_uv = 0.0;
  double u_vv = 0.0;
  double v_uu = 0.0;
  double v_uv = 0.0;
  double v_vv = 0.0;
};

// Immutable description of a 2-D Riemannian surface in a single chart.
// Built via make_surface; all fields are set at construction.
struct Surface {
  SurfaceKind kind = SurfaceKind::plane;
  std::string name;
  ChartDomain domain;
  std::function<Eigen::Matrix2d(const SurfacePoint&)> metric;
  std::function<ChristoffelSymbols(const SurfacePoint&)> christoffel;
  std::function<double(const SurfacePoint&)> curvature;
  std::optional<double> curvature_upper_bound;  // a value 1/R^2 with R > 0
  double length_budget = 50.0;                  // max geodesic length attempted
  std::map<std::string, double> params;
};

using SurfacePtr = std::shared_ptr<const Surface>;

struct SurfaceParams {
  std::map<std::string, double> scalars;          // kind-specific, see make_surface
  std::optional<double> curvature_upper_bound;    // may override the built-in value
  std::optional<double> length_budget;
  // user_metric only: coefficient expressions and chart rectangle
  std::string g11, g12, g22;
  std::optional<ChartDomain> user_domain;
};

// Construct and validate a surface. Probes a grid across the chart for
// symmetric positive definiteness, cross-checks analytic curvature against a
// finite-difference evaluation, and verifies any declared curvature bound
// against sampled curvature. Throws GeonetError(invalid_input) on failure.
SurfacePtr make_surface(SurfaceKind kind, const SurfaceParams& params = {});
SurfacePtr make_surface(const std::string& kind_name, const SurfaceParams& params = {});

const char* surface_kind_name(SurfaceKind kind);

Eigen::Matrix2d metric_at(const Surface& s, const SurfacePoint& p);
ChristoffelSymbols christoffel_at(const Surface& s, const SurfacePoint& p);
double curvature_at(const Surface& s, const SurfacePoint& p);

// Angle in [0, pi] between two tangent vectors at the same base point.
// Throws on a zero vector (norm below 1e-14 relative to the metric scale).
double angle_between_vectors(const Surface& s, const SurfacePoint& p,
                             const Eigen::Vector2d& v1, const Eigen::Vector2d& v2);

double g_norm(const Surface& s, const SurfacePoint& p, const Eigen::Vector2d& v);
double g_inner(const Surface& s, const SurfacePoint& p, const Eigen::Vector2d& a,
               const Eigen::Vector2d& b);

// Finite-difference fallbacks (also the independent cross-check used by the
// construction probe and the tests). Plain central differences with step h.
ChristoffelSymbols christoffel_fd(
    const std::function<Eigen::Matrix2d(const SurfacePoint&)>& metric, const SurfacePoint& p,
    double h = 1e-5);
double curvature_brioschi_fd(
    const std::function<Eigen::Matrix2d(const SurfacePoint&)>& metric, const SurfacePoint& p,
    double h = 3e-4);

// Nearest-lift displacement q - p respecting a periodic v coordinate.
Eigen::Vector2d chart_displacement(const Surface& s, const SurfacePoint& p, const SurfacePoint& q);

// Wrap a chart point's periodic coordinate into the canonical window.
SurfacePoint canonical_point(const Surface& s, const SurfacePoint& p);

}  // namespace geonet
