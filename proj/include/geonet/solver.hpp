#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "geonet/triangle.hpp"

namespace geonet {

struct SolverTolerances {
  double angle_tol = 1e-7;  // per-angle residual against 2*pi/3
  double vec_tol = 2e-7;    // g-norm of the unit-tangent sum
  double bvp_tol = 1e-9;    // endpoint residual of internal connections
  int max_iter = 200;       // descent iteration cap
};

enum class SolveMethod { sweep, descent };

const char* solve_method_name(SolveMethod m);

// A candidate balanced vertex with its measured evidence. `angles` are the
// three vertex-pair angles at the point, in the order (A.B, B.C, C.A).
struct BalancedResult {
  SurfacePoint point;
  std::array<double, 3> angles{};
  double tangent_sum_norm = 0.0;
  SolveMethod method = SolveMethod::sweep;
  int iterations = 0;
  bool converged = false;
  bool inside_triangle = false;
};

// First point from A along the geodesic A -> X at which the angle subtended
// by B and C reaches 2*pi/3; X sits at fraction x_param of side B->C.
struct YxPoint {
  SurfacePoint point;
  double arc = 0.0;         // arc length of the point from A
  double arc_total = 0.0;   // full length of the A -> X geodesic
  // The angle came within 1e-6 of the target without a sign change and the
  // nearest touch was taken as the crossing.
  bool tangential = false;
};

YxPoint find_y_x_detail(const Triangle& t, double x_param, const SolverTolerances& tol = {});
SurfacePoint find_y_x(const Triangle& t, double x_param, const SolverTolerances& tol = {});

struct SweepRecord {
  double x_param = 0.0;
  SurfacePoint point;
  std::array<double, 3> angles{};  // (A.B, B.C, C.A) at the record's point
  bool ok = false;
  std::string note;                // failure reason when !ok
};

struct SweepTrace {
  std::vector<SweepRecord> records;
};

// Records at x_param = k/(n+1), k = 1..n. Individual failures are kept as
// !ok records; throws only if fewer than two records succeed.
SweepTrace trace_s_curve(const Triangle& t, int n, const SolverTolerances& tol = {});

struct SolveOptions {
  // Attempt the solve even when check_preconditions does not pass.
  bool override_preconditions = false;
  int diameter_samples = 24;  // forwarded to the precondition check
  SolverTolerances tol;
};

// Balanced vertex by bisection on x_param over the sign of
// m(angle A.Y_X.B) - 2*pi/3 along the one-parameter family Y_X.
BalancedResult sweep_balanced(const Triangle& t, const SolveOptions& opts = {});

// Balanced vertex by descent on F(Y) = d(A,Y) + d(B,Y) + d(C,Y): Armijo
// steps along the tangent-sum direction, finished by a damped 2x2 Newton on
// the tangent-sum residual. Start defaults to the chart average of the
// vertices (degenerate triangles: an interior offset from the B->C
// midpoint).
BalancedResult descent_balanced(const Triangle& t,
                                std::optional<SurfacePoint> start = std::nullopt,
                                const SolverTolerances& tol = {});

struct ResidualReport {
  std::array<double, 3> angle_residuals{};  // | m - 2*pi/3 | per vertex pair
  double tangent_sum_norm = 0.0;
  bool angles_pass = false;
  bool tangents_pass = false;
  bool consistent = false;  // the two residual families agree
};

ResidualReport verify_balanced(const Triangle& t, const SurfacePoint& y,
                               const SolverTolerances& tol = {});

// Samples of the angle subtended by B and C at n equally spaced arc-length
// fractions of the geodesic A -> X (first sample at A, last at X).
std::vector<double> angle_profile(const Triangle& t, double x_param, int n,
                                  const SolverTolerances& tol = {});

}  // namespace geonet
