#include "geonet/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "geonet/errors.hpp"
#include "geonet/rng.hpp"

namespace geonet {

namespace {

using Eigen::Vector2d;

constexpr double kDegenerateAngleTol = 1e-7;

// Chart cross product. Its sign equals the metric turn sign because every
// chart here carries the standard orientation (det g > 0).
double cross(const Vector2d& a, const Vector2d& b) { return a[0] * b[1] - a[1] * b[0]; }

GeodesicPath connect_side(const SurfacePtr& s, const SurfacePoint& from, const SurfacePoint& to) {
  ConnectResult r = connect(s, from, to);
  if (!r.converged)
    throw GeonetError(ErrorCode::no_convergence, "triangle side connection failed");
  if (r.non_unique)
    throw GeonetError(ErrorCode::non_unique, "triangle side connection is not unique");
  return r.path;
}

Triangle assemble(const SurfacePtr& s, const std::array<SurfacePoint, 3>& v) {
  Triangle t;
  t.surface = s;
  t.vertex = v;
  t.side[0] = connect_side(s, v[0], v[1]);
  t.side[1] = connect_side(s, v[1], v[2]);
  t.side[2] = connect_side(s, v[2], v[0]);
  for (int i = 0; i < 3; ++i) {
    const GeodesicPath& incoming = t.side[(i + 2) % 3];  // ends at vertex i
    const GeodesicPath& outgoing = t.side[i];            // starts at vertex i
    Vector2d to_prev = -incoming.velocity_at(incoming.length);
    Vector2d to_next = outgoing.velocity_at(0.0);
    t.angle[i] = angle_between_vectors(*s, v[i], to_next, to_prev);
  }
  t.degenerate = std::any_of(t.angle.begin(), t.angle.end(), [](double a) {
    return a >= M_PI - kDegenerateAngleTol || a <= kDegenerateAngleTol;
  });
  return t;
}

// Sum of the three turn crosses along the boundary. For a proper triangle all
// turns share a sign; positive means the interior is left of A->B->C->A.
double orientation_sign(const Triangle& t) {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const GeodesicPath& incoming = t.side[(i + 2) % 3];
    const GeodesicPath& outgoing = t.side[i];
    sum += cross(incoming.velocity_at(incoming.length), outgoing.velocity_at(0.0));
  }
  return sum;
}

// Continuous chart lift of the boundary cycle. Each side's stored coordinates
// are already continuous; junctions between sides are stitched by nearest
// periodic representative.
std::vector<Vector2d> boundary_lift(const Triangle& t, int per_side) {
  std::vector<Vector2d> pts;
  pts.reserve(3 * per_side);
  double period = t.surface->domain.v_periodic ? t.surface->domain.v_period : 0.0;
  for (int sidx = 0; sidx < 3; ++sidx) {
    const GeodesicPath& g = t.side[sidx];
    for (int k = 0; k < per_side; ++k) {
      SurfacePoint p = g.point_at(g.length * k / per_side);
      Vector2d q = p.coords();
      if (!pts.empty() && period > 0.0)
        q[1] = pts.back()[1] + std::remainder(q[1] - pts.back()[1], period);
      pts.push_back(q);
    }
  }
  return pts;
}

}  // namespace

Triangle build_triangle(const SurfacePtr& s, const SurfacePoint& a, const SurfacePoint& b,
                        const SurfacePoint& c) {
  std::array<SurfacePoint, 3> v = {a, b, c};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (g_norm(*s, v[i], chart_displacement(*s, v[i], v[j])) < 1e-10)
        throw GeonetError(ErrorCode::invalid_input, "triangle vertices are not distinct");

  Triangle t = assemble(s, v);
  if (!t.degenerate && orientation_sign(t) < 0.0) {
    t = assemble(s, {a, c, b});
    t.orientation_swapped = true;
  }
  return t;
}

double interior_angle(const Triangle& t, int vertex) {
  if (vertex < 0 || vertex > 2)
    throw GeonetError(ErrorCode::invalid_input, "interior_angle: vertex index out of range");
  return t.angle[static_cast<std::size_t>(vertex)];
}

double gauss_bonnet_residual(const Triangle& t, int resolution) {
  if (t.degenerate)
    throw GeonetError(ErrorCode::degenerate,
                      "gauss_bonnet_residual: interior of a degenerate triangle");
  if (resolution < 2)
    throw GeonetError(ErrorCode::invalid_input, "gauss_bonnet_residual: resolution must be >= 2");

  const SurfacePtr& s = t.surface;
  const int res = resolution;

  // Spoke fan: geodesics from A to res+1 points along B->C, warm-started
  // neighbor to neighbor so every spoke sits on the same solution branch.
  // All spokes start at the same chart lift of A and depend continuously on
  // the shooting parameters, so their stored coordinates form one coherent
  // lift of the fan with no extra stitching.
  const GeodesicPath& bc = t.side[1];
  std::vector<GeodesicPath> spokes;
  spokes.reserve(res + 1);
  Eigen::Vector2d hint{frame_angle(*s, t.vertex[0], t.side[0].velocity_at(0.0)),
                       t.side[0].length};
  for (int j = 0; j <= res; ++j) {
    SurfacePoint target = bc.point_at(bc.length * j / res);
    ConnectOptions opts;
    opts.hint = hint;
    ConnectResult r = connect(s, t.vertex[0], target, opts);
    if (!r.converged)
      throw GeonetError(ErrorCode::no_convergence, "gauss_bonnet_residual: spoke failed");
    hint = {r.alpha, r.length};
    spokes.push_back(std::move(r.path));
  }

  // Corner grid: row j follows spoke j, column k the fraction k/res along it.
  std::vector<std::vector<Vector2d>> grid(res + 1, std::vector<Vector2d>(res + 1));
  for (int j = 0; j <= res; ++j) {
    double L = spokes[j].length;
    for (int k = 0; k <= res; ++k) grid[j][k] = spokes[j].point_at(L * k / res).coords();
  }

  // 2x2 Gauss on each bilinear patch; integrand K * sqrt(det g).
  const double gq[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  double integral = 0.0;
  for (int j = 0; j < res; ++j) {
    for (int k = 0; k < res; ++k) {
      const Vector2d& p00 = grid[j][k];
      const Vector2d& p10 = grid[j + 1][k];
      const Vector2d& p01 = grid[j][k + 1];
      const Vector2d& p11 = grid[j + 1][k + 1];
      for (double x : gq) {
        for (double y : gq) {
          Vector2d pos = (1 - x) * (1 - y) * p00 + x * (1 - y) * p10 + (1 - x) * y * p01 +
                         x * y * p11;
          Vector2d dx = (1 - y) * (p10 - p00) + y * (p11 - p01);
          Vector2d dy = (1 - x) * (p01 - p00) + x * (p11 - p10);
          double jac = std::abs(cross(dx, dy));
          SurfacePoint sp{pos[0], pos[1]};
          integral += 0.25 * s->curvature(sp) * std::sqrt(s->metric(sp).determinant()) * jac;
        }
      }
    }
  }

  double excess = t.angle[0] + t.angle[1] + t.angle[2] - M_PI;
  return std::abs(integral - excess);
}

double triangle_diameter_estimate(const Triangle& t, int n_samples, int* skipped_pairs) {
  if (n_samples < 3)
    throw GeonetError(ErrorCode::invalid_input, "triangle_diameter_estimate: need >= 3 samples");

  const SurfacePtr& s = t.surface;

  // Sample set: the vertices plus, from each vertex in turn as apex, points
  // on geodesics toward the opposite side at Halton fractions. Each side
  // fraction x is paired with 1-x, so the whole set is invariant under vertex
  // relabeling and the estimate is too.
  std::vector<SurfacePoint> pts(t.vertex.begin(), t.vertex.end());
  int per_fan = std::max(1, n_samples / 6);
  for (int apex = 0; apex < 3; ++apex) {
    const GeodesicPath& opposite = t.side[(apex + 1) % 3];
    for (int i = 1; i <= per_fan; ++i) {
      double y = halton(i, 3);
      for (double x : {halton(i, 2), 1.0 - halton(i, 2)}) {
        SurfacePoint target = opposite.point_at(opposite.length * x);
        ConnectOptions copts;
        copts.first_hit = true;
        ConnectResult r = connect(s, t.vertex[apex], target, copts);
        if (!r.converged) continue;
        pts.push_back(r.path.point_at(r.length * y));
      }
    }
  }

  int skipped = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      ConnectOptions copts;
      copts.first_hit = true;
      copts.dense_path = false;
      ConnectResult r = connect(s, pts[i], pts[j], copts);
      if (!r.converged) {
        ++skipped;
        continue;
      }
      best = std::max(best, r.length);
    }
  }
  if (skipped_pairs) *skipped_pairs = skipped;
  return best;
}

bool triangle_contains(const Triangle& t, const SurfacePoint& p) {
  std::vector<Vector2d> lift = boundary_lift(t, 64);
  double period = t.surface->domain.v_periodic ? t.surface->domain.v_period : 0.0;

  // Net v displacement of the lifted cycle back to its start: a multiple of
  // the period, nonzero exactly when the boundary wraps the chart.
  double winding_shift = 0.0;
  if (period > 0.0) {
    double closing = lift.back()[1] + std::remainder(lift.front()[1] - lift.back()[1], period);
    winding_shift = closing - lift.front()[1];
  }

  if (period > 0.0 && std::abs(winding_shift) > 0.5 * period) {
    // The boundary cycle wraps the periodic coordinate: it splits the chart
    // into two bands rather than enclosing a disk, so winding is useless.
    // Classify by which side of the nearest boundary sample p falls on; the
    // interior is left of the travel direction.
    double best_d2 = 1e300;
    std::size_t best_i = 0;
    double best_dv = 0.0;
    for (std::size_t i = 0; i < lift.size(); ++i) {
      double dv = std::remainder(p.v - lift[i][1], period);
      double du = p.u - lift[i][0];
      double d2 = du * du + dv * dv;
      if (d2 < best_d2) {
        best_d2 = d2;
        best_i = i;
        best_dv = dv;
      }
    }
    std::size_t next_i = (best_i + 1) % lift.size();
    Vector2d tangent = lift[next_i] - lift[best_i];
    tangent[1] = std::remainder(tangent[1], period);
    Vector2d offset{p.u - lift[best_i][0], best_dv};
    return cross(tangent, offset) > 0.0;
  }

  // Ordinary closed cycle: winding number around p. The polygon's v extent is
  // below one period, so the lift of p nearest the polygon's mean v is the
  // only lift that can land inside.
  double pv = p.v;
  if (period > 0.0) {
    double mean = 0.0;
    for (const Vector2d& q : lift) mean += q[1];
    mean /= static_cast<double>(lift.size());
    pv = mean + std::remainder(p.v - mean, period);
  }
  double winding = 0.0;
  for (std::size_t i = 0; i < lift.size(); ++i) {
    Vector2d a = lift[i] - Vector2d{p.u, pv};
    Vector2d b = lift[(i + 1) % lift.size()] - Vector2d{p.u, pv};
    winding += std::atan2(cross(a, b), a.dot(b));
  }
  return std::abs(winding) > M_PI;
}

const char* verdict_name(PreconditionReport::Verdict v) {
  switch (v) {
    case PreconditionReport::Verdict::pass: return "pass";
    case PreconditionReport::Verdict::fail: return "fail";
    case PreconditionReport::Verdict::advisory: return "advisory";
  }
  return "unknown";
}

PreconditionReport check_preconditions(const Triangle& t, int diameter_samples) {
  PreconditionReport rep;
  bool angles_pass = true;
  for (int i = 0; i < 3; ++i) {
    rep.angle_ok[i] = t.angle[i] < kBalancedAngle;
    angles_pass = angles_pass && rep.angle_ok[i];
  }
  rep.diameter_estimate = triangle_diameter_estimate(t, diameter_samples);

  const SurfacePtr& s = t.surface;
  bool positive_bound = s->curvature_upper_bound && *s->curvature_upper_bound > 0.0;
  if (positive_bound) {
    double R = 1.0 / std::sqrt(*s->curvature_upper_bound);
    // 1.02 margin: the estimate is a sampled lower bound of the diameter.
    rep.diameter_ok = 1.02 * rep.diameter_estimate < R * M_PI / 2.0;
  }

  if (!angles_pass || (rep.diameter_ok && !*rep.diameter_ok)) {
    rep.verdict = PreconditionReport::Verdict::fail;
  } else if (!s->curvature_upper_bound) {
    // No declared bound: no R to test against. Flag positive curvature seen
    // along the sides instead of silently passing.
    double k_max = -1e300;
    for (const auto& side : t.side)
      for (int k = 0; k <= 8; ++k)
        k_max = std::max(k_max, s->curvature(side.point_at(side.length * k / 8.0)));
    rep.verdict = k_max > 0.0 ? PreconditionReport::Verdict::advisory
                              : PreconditionReport::Verdict::pass;
  } else {
    rep.verdict = PreconditionReport::Verdict::pass;
  }
  return rep;
}

}  // namespace geonet
