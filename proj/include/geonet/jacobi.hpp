#pragma once

#include <optional>
#include <vector>

#include "geonet/geodesic.hpp"
#include "geonet/surface.hpp"

namespace geonet {

// Scalar field j with j'' + K(gamma(t)) j = 0 along a unit-speed geodesic.
// On a surface the orthogonal Jacobi field is j(t) w(t) with w the parallel
// unit normal, so |J(t)| = |j(t)| and nothing else needs transporting.
struct JacobiScalar {
  double j0 = 0.0;
  double jp0 = 0.0;
  double length = 0.0;     // sampled parameter range [0, length]
  OdeSolution<2> sol;      // state (j, j') at arc-length nodes

  double value(double t) const;
  double derivative(double t) const;
};

JacobiScalar solve_jacobi(const SurfacePtr& s, const GeodesicPath& g, double j0, double jp0);

// d/dt of j^2, taken as 2 j j' from the ODE state (no numerical
// differentiation, so no cancellation near extrema).
double norm_sq_prime(const JacobiScalar& J, double t);

// One sample of a scalar field along the geodesic: value and derivative at
// parameter t. Duplicated t entries are allowed so piecewise-linear fields
// can carry both one-sided slopes at a kink.
struct FieldSample {
  double t = 0.0;
  double v = 0.0;
  double vp = 0.0;
};

// Energy-style quadratic form  ∫₀^{t0} (v'^2 - K v^2) dt  by composite
// Simpson over the sample segments (cubic Hermite inside each segment).
// Requires V(0) = 0, at least 8 samples, and coverage of [0, t0].
double index_form(const SurfacePtr& s, const GeodesicPath& g, const std::vector<FieldSample>& V,
                  double t0);

// Smallest positive root of j, located by sign change over the sample grid
// and bisection to 1e-9. Requires j0 = 0, jp0 != 0.
std::optional<double> first_conjugate_point(const JacobiScalar& J);

struct MonotoneWindow {
  bool monotone = false;
  double margin = 0.0;  // minimum of 2 j j' over the checked nodes
};

// Positivity of (j^2)' for the (0,1)-field at every sample node in
// (0, t_max], plus t_max itself.
MonotoneWindow monotone_window_check(const SurfacePtr& s, const GeodesicPath& g, double t_max);

}  // namespace geonet
