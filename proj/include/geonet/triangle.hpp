#pragma once

#include <array>
#include <optional>

#include "geonet/geodesic.hpp"
#include "geonet/surface.hpp"

namespace geonet {

// Geodesic triangle with measured interior angles. Vertex order is normalized
// at construction so the interior lies on the left of the cycle A->B->C->A
// (for a degenerate triple the input order is kept and `degenerate` is set).
struct Triangle {
  SurfacePtr surface;
  std::array<SurfacePoint, 3> vertex;  // A, B, C
  std::array<GeodesicPath, 3> side;    // A->B, B->C, C->A
  std::array<double, 3> angle{};       // at A, B, C
  bool degenerate = false;
  bool orientation_swapped = false;    // B and C exchanged to fix orientation
};

// Build sides by geodesic connection and measure the angles.
// Throws: invalid_input (coincident vertices), no_convergence (a side fails),
// non_unique (a side admits tied shortest connections).
Triangle build_triangle(const SurfacePtr& s, const SurfacePoint& a, const SurfacePoint& b,
                        const SurfacePoint& c);

// Angle at vertex index 0 (A), 1 (B), or 2 (C).
double interior_angle(const Triangle& t, int vertex);

// |curvature integral - angle excess| with the integral taken by a fan
// quadrature: `resolution` strips of geodesics from A to points of B->C,
// bilinear patches, 2x2 Gauss per cell. Throws on degenerate triangles.
double gauss_bonnet_residual(const Triangle& t, int resolution);

// Largest pairwise geodesic distance over a deterministic low-discrepancy
// sample of the closed triangle (vertices always included). A lower bound on
// the true diameter. Pairs whose connection fails are skipped and counted.
double triangle_diameter_estimate(const Triangle& t, int n_samples,
                                  int* skipped_pairs = nullptr);

// Chart membership by boundary winding; a boundary cycle that wraps the
// periodic coordinate falls back to the side-of-nearest-boundary rule.
bool triangle_contains(const Triangle& t, const SurfacePoint& p);

struct PreconditionReport {
  std::array<bool, 3> angle_ok{};       // interior angle < 2*pi/3
  double diameter_estimate = 0.0;
  // Present iff the surface declares a positive curvature upper bound 1/R^2;
  // true iff 1.02 * estimate < R*pi/2 (margin covers the sampling bias).
  std::optional<bool> diameter_ok;
  enum class Verdict { pass, fail, advisory } verdict = Verdict::fail;
};

const char* verdict_name(PreconditionReport::Verdict v);

// Hypothesis check for the existence results: all angles below 2*pi/3 and,
// under positive curvature, the diameter below R*pi/2. `advisory` when
// positive curvature is detected but no bound was declared.
PreconditionReport check_preconditions(const Triangle& t, int diameter_samples = 24);

}  // namespace geonet
