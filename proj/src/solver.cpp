#include "geonet/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geonet/errors.hpp"

namespace geonet {

namespace {

using Eigen::Vector2d;

// Warm-start state for repeated connections from a moving probe point to one
// fixed vertex. The hint keeps Newton on the same solution branch while the
// probe moves continuously.
struct TowardVertex {
  std::optional<Vector2d> hint;  // (alpha, length) of the last connection
  Vector2d tangent = Vector2d::Zero();  // g-unit chart tangent at the probe
  double length = 0.0;
};

void aim(const SurfacePtr& s, const SurfacePoint& y, const SurfacePoint& vertex, TowardVertex& tv,
         double bvp_tol) {
  ConnectOptions o;
  o.tol = bvp_tol;
  o.hint = tv.hint;
  o.dense_path = false;
  ConnectResult r = connect(s, y, vertex, o);
  if (!r.converged)
    throw GeonetError(ErrorCode::no_convergence, "connection from probe point to vertex failed");
  tv.hint = Vector2d{r.alpha, r.length};
  tv.tangent = frame_direction(*s, y, r.alpha);
  tv.length = r.length;
}

// Initial hints at vertex A: the two incident sides are known connections.
TowardVertex toward_b_at_a(const Triangle& t) {
  TowardVertex tv;
  tv.hint = Vector2d{frame_angle(*t.surface, t.vertex[0], t.side[0].velocity_at(0.0)),
                     t.side[0].length};
  return tv;
}

TowardVertex toward_c_at_a(const Triangle& t) {
  TowardVertex tv;
  const GeodesicPath& ca = t.side[2];
  tv.hint = Vector2d{frame_angle(*t.surface, t.vertex[0], -ca.velocity_at(ca.length)), ca.length};
  return tv;
}

void require_fan_preconditions(const Triangle& t, const char* op) {
  if (t.degenerate)
    throw GeonetError(ErrorCode::degenerate, std::string(op) + ": triangle is degenerate");
  for (double a : t.angle)
    if (a >= kBalancedAngle)
      throw GeonetError(ErrorCode::invalid_input,
                        std::string(op) + ": a vertex angle is not below the balance threshold");
}

// A -> X geodesic for X at fraction x of side B->C. The optional hint chains
// across nearby x values.
GeodesicPath fan_geodesic(const Triangle& t, double x, double bvp_tol,
                          std::optional<Vector2d>* hint) {
  const GeodesicPath& bc = t.side[1];
  SurfacePoint X = bc.point_at(bc.length * x);
  ConnectOptions o;
  o.tol = bvp_tol;
  if (hint) o.hint = *hint;
  ConnectResult r = connect(t.surface, t.vertex[0], X, o);
  if (!r.converged && hint && *hint) {  // stale hint: retry cold
    o.hint.reset();
    r = connect(t.surface, t.vertex[0], X, o);
  }
  if (!r.converged)
    throw GeonetError(ErrorCode::no_convergence, "fan geodesic from A failed to connect");
  if (r.non_unique)
    throw GeonetError(ErrorCode::non_unique, "fan geodesic from A is not unique");
  if (hint) *hint = Vector2d{r.alpha, r.length};
  return r.path;
}

struct YxInternal {
  YxPoint yx;
  std::array<Vector2d, 3> toward{};  // g-unit tangents toward A, B, C
};

YxInternal find_y_x_internal(const Triangle& t, double x, const SolverTolerances& tol,
                             std::optional<Vector2d>* fan_hint) {
  if (!(x > 0.0 && x < 1.0))
    throw GeonetError(ErrorCode::invalid_input, "x_param must lie strictly inside (0, 1)");
  require_fan_preconditions(t, "find_y_x");

  const SurfacePtr& s = t.surface;
  GeodesicPath path = fan_geodesic(t, x, tol.bvp_tol, fan_hint);
  const double L = path.length;

  TowardVertex tb = toward_b_at_a(t);
  TowardVertex tc = toward_c_at_a(t);
  auto angle_at = [&](double arc) {
    SurfacePoint y = path.point_at(arc);
    aim(s, y, t.vertex[1], tb, tol.bvp_tol);
    aim(s, y, t.vertex[2], tc, tol.bvp_tol);
    return angle_between_vectors(*s, y, tb.tangent, tc.tangent);
  };

  // March from A until the subtended angle first reaches the target, then
  // bisect inside the bracketing step (first-crossing semantics).
  const double target = kBalancedAngle;
  double lo = 0.0;
  double f_lo = angle_at(0.0) - target;  // = angle at A - target < 0
  double hi = -1.0, f_hi = 0.0;
  double touch_err = 1e300, touch_s = 0.0;
  for (int k = 1; k <= 64; ++k) {
    double sk = L * k / 64.0;
    double f = angle_at(sk) - target;
    if (f >= 0.0) {
      hi = sk;
      f_hi = f;
      break;
    }
    if (std::abs(f) < touch_err) {
      touch_err = std::abs(f);
      touch_s = sk;
    }
    lo = sk;
    f_lo = f;
  }

  YxInternal out;
  double arc;
  if (hi < 0.0) {
    // No sign change over the whole march: accept a near-touch, else report
    // the inconsistency.
    if (touch_err > 1e-6)
      throw GeonetError(ErrorCode::no_convergence,
                        "subtended angle never reached the balance threshold along the fan");
    arc = touch_s;
    out.yx.tangential = true;
    angle_at(arc);  // refresh tangents at the returned point
  } else {
    while (hi - lo > 1e-9 * L) {
      double mid = 0.5 * (lo + hi);
      double fm = angle_at(mid) - target;
      if (fm >= 0.0) {
        hi = mid;
        f_hi = fm;
      } else {
        lo = mid;
        f_lo = fm;
      }
    }
    // Secant polish on the angle residual itself.
    double s1 = lo, f1 = f_lo, s2 = hi, f2 = f_hi;
    arc = hi;
    double f_cur = f_hi;
    for (int it = 0; it < 6 && std::abs(f_cur) > 0.25 * tol.angle_tol; ++it) {
      if (std::abs(f2 - f1) < 1e-300) break;
      double sn = s2 - f2 * (s2 - s1) / (f2 - f1);
      sn = std::clamp(sn, 1e-12 * L, (1.0 - 1e-12) * L);
      double fn = angle_at(sn) - target;
      s1 = s2;
      f1 = f2;
      s2 = sn;
      f2 = fn;
      arc = sn;
      f_cur = fn;
    }
    angle_at(arc);  // leave tangents evaluated at the final arc
  }

  out.yx.point = path.point_at(arc);
  out.yx.arc = arc;
  out.yx.arc_total = L;
  out.toward[0] = -path.velocity_at(arc);
  out.toward[1] = tb.tangent;
  out.toward[2] = tc.tangent;
  return out;
}

std::array<double, 3> pair_angles(const Surface& s, const SurfacePoint& y,
                                  const std::array<Vector2d, 3>& toward) {
  return {angle_between_vectors(s, y, toward[0], toward[1]),
          angle_between_vectors(s, y, toward[1], toward[2]),
          angle_between_vectors(s, y, toward[2], toward[0])};
}

double tangent_sum_norm_at(const Surface& s, const SurfacePoint& y,
                           const std::array<Vector2d, 3>& toward) {
  return g_norm(s, y, toward[0] + toward[1] + toward[2]);
}

}  // namespace

const char* solve_method_name(SolveMethod m) {
  return m == SolveMethod::sweep ? "sweep" : "descent";
}

YxPoint find_y_x_detail(const Triangle& t, double x_param, const SolverTolerances& tol) {
  return find_y_x_internal(t, x_param, tol, nullptr).yx;
}

SurfacePoint find_y_x(const Triangle& t, double x_param, const SolverTolerances& tol) {
  return find_y_x_detail(t, x_param, tol).point;
}

SweepTrace trace_s_curve(const Triangle& t, int n, const SolverTolerances& tol) {
  if (n < 2)
    throw GeonetError(ErrorCode::invalid_input, "trace needs at least two records");
  require_fan_preconditions(t, "trace_s_curve");

  SweepTrace trace;
  trace.records.reserve(n);
  std::optional<Vector2d> fan_hint;
  int ok_count = 0;
  for (int k = 1; k <= n; ++k) {
    SweepRecord rec;
    rec.x_param = static_cast<double>(k) / (n + 1);
    try {
      YxInternal yi = find_y_x_internal(t, rec.x_param, tol, &fan_hint);
      rec.point = yi.yx.point;
      rec.angles = pair_angles(*t.surface, yi.yx.point, yi.toward);
      rec.ok = true;
      ++ok_count;
    } catch (const GeonetError& e) {
      rec.note = e.what();
    }
    trace.records.push_back(std::move(rec));
  }
  if (ok_count < 2)
    throw GeonetError(ErrorCode::no_convergence, "trace collapsed: fewer than two records solved");
  return trace;
}

BalancedResult sweep_balanced(const Triangle& t, const SolveOptions& opts) {
  if (!opts.override_preconditions) {
    PreconditionReport rep = check_preconditions(t, opts.diameter_samples);
    if (rep.verdict != PreconditionReport::Verdict::pass)
      throw GeonetError(ErrorCode::invalid_input,
                        std::string("sweep_balanced: preconditions verdict is ") +
                            verdict_name(rep.verdict) + " (override to attempt anyway)");
  }
  require_fan_preconditions(t, "sweep_balanced");

  const double target = kBalancedAngle;
  std::optional<Vector2d> fan_hint;
  int evals = 0;

  struct Sample {
    double x, h;
    YxInternal yi;
  };
  // h(x): residual of the remaining angle pair at the subtended-angle point.
  auto eval = [&](double x) {
    YxInternal yi = find_y_x_internal(t, x, opts.tol, &fan_hint);
    ++evals;
    double h = angle_between_vectors(*t.surface, yi.yx.point, yi.toward[0], yi.toward[1]) - target;
    return Sample{x, h, std::move(yi)};
  };
  const double accept_h = 0.25 * opts.tol.angle_tol;  // headroom for the dependent third angle
  auto finish = [&](Sample smp) {
    BalancedResult res;
    res.point = smp.yi.yx.point;
    res.angles = pair_angles(*t.surface, res.point, smp.yi.toward);
    res.tangent_sum_norm = tangent_sum_norm_at(*t.surface, res.point, smp.yi.toward);
    res.method = SolveMethod::sweep;
    res.iterations = evals;
    double worst = 0.0;
    for (double a : res.angles) worst = std::max(worst, std::abs(a - target));
    res.converged = worst <= opts.tol.angle_tol && res.tangent_sum_norm <= opts.tol.vec_tol;
    res.inside_triangle = triangle_contains(t, res.point);
    if (!res.converged) {
      // The fan construction drives only two of the three residuals directly,
      // and their inner tolerance amplifies near a vertex; a short tangent-sum
      // Newton cleanup from the bracketed point recovers the last digits.
      try {
        BalancedResult polished = descent_balanced(t, res.point, opts.tol);
        if (polished.converged) {
          polished.method = SolveMethod::sweep;
          polished.iterations += res.iterations;
          return polished;
        }
      } catch (const GeonetError&) {
      }
    }
    return res;
  };
  auto profile_message = [](const std::vector<Sample>& grid) {
    std::ostringstream os;
    os << "sweep_balanced: no sign change over the sampled fan; profile (x, angle-target):";
    for (const auto& g : grid) os << " (" << g.x << ", " << g.h << ")";
    return os.str();
  };

  // Grid scan (refined once), then bisection on the first sign change.
  std::vector<Sample> grid;
  int lo_i = -1;
  for (int denom : {12, 42}) {
    grid.clear();
    fan_hint.reset();
    for (int k = 1; k < denom; ++k) {
      Sample smp = eval(static_cast<double>(k) / denom);
      if (std::abs(smp.h) <= accept_h) return finish(std::move(smp));
      grid.push_back(std::move(smp));
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
      if (grid[i].h * grid[i + 1].h < 0.0) {
        lo_i = static_cast<int>(i);
        break;
      }
    if (lo_i >= 0) break;
  }
  // With no interior sign change every sample shares one sign, yet the
  // residual has the opposite sign in one end limit; when a base angle nears
  // the threshold the crossing hides exponentially close to that end, so
  // probe it geometrically before giving up.
  if (lo_i < 0 && !grid.empty()) {
    fan_hint.reset();
    Sample edge = grid.front().h < 0.0 ? grid.front() : grid.back();
    const bool left_end = edge.h < 0.0;
    for (int j = 0; j < 40 && lo_i < 0; ++j) {
      double x = left_end ? 0.5 * edge.x : 1.0 - 0.5 * (1.0 - edge.x);
      if ((left_end ? x : 1.0 - x) <= 1e-12) break;
      Sample smp;
      try {
        smp = eval(x);
      } catch (const GeonetError&) {
        break;
      }
      if (std::abs(smp.h) <= accept_h) return finish(std::move(smp));
      if (smp.h * edge.h < 0.0) {
        grid.clear();
        grid.push_back(left_end ? std::move(smp) : std::move(edge));
        grid.push_back(left_end ? std::move(edge) : std::move(smp));
        lo_i = 0;
      } else {
        edge = std::move(smp);
      }
    }
  }
  if (lo_i < 0)
    throw GeonetError(ErrorCode::no_convergence, profile_message(grid));

  double xl = grid[lo_i].x, hl = grid[lo_i].h;
  double xr = grid[lo_i + 1].x, hr = grid[lo_i + 1].h;
  Sample best = grid[lo_i].h * grid[lo_i].h < grid[lo_i + 1].h * grid[lo_i + 1].h
                    ? std::move(grid[lo_i])
                    : std::move(grid[lo_i + 1]);
  for (int it = 0; it < 90; ++it) {
    double xm = 0.5 * (xl + xr);
    Sample smp = eval(xm);
    double hm = smp.h;
    if (std::abs(hm) < std::abs(best.h)) best = std::move(smp);
    if (std::abs(hm) <= accept_h) break;
    if (hl * hm < 0.0) {
      xr = xm;
      hr = hm;
    } else {
      xl = xm;
      hl = hm;
    }
    // Bracket at rounding width with the accept threshold still unmet means
    // h sits at its evaluation noise floor; hand the best sample to finish,
    // whose cleanup pass decides convergence honestly.
    if (xr - xl < 1e-13) return finish(std::move(best));
  }

  // Secant polish on h(x) when bisection ran out before the accept threshold.
  double x1 = xl, h1 = hl, x2 = xr, h2 = hr;
  for (int it = 0; it < 4 && std::abs(best.h) > accept_h; ++it) {
    if (std::abs(h2 - h1) < 1e-300) break;
    double xn = std::clamp(x2 - h2 * (x2 - x1) / (h2 - h1), 1e-9, 1.0 - 1e-9);
    Sample smp = eval(xn);
    x1 = x2;
    h1 = h2;
    x2 = xn;
    h2 = smp.h;
    if (std::abs(smp.h) < std::abs(best.h)) best = std::move(smp);
  }
  return finish(std::move(best));
}

BalancedResult descent_balanced(const Triangle& t, std::optional<SurfacePoint> start,
                                const SolverTolerances& tol) {
  const SurfacePtr& s = t.surface;
  double min_side = std::min({t.side[0].length, t.side[1].length, t.side[2].length});

  auto default_start = [&]() -> SurfacePoint {
    if (t.degenerate) {
      // Sides on one curve leave no chart-average interior: step off the
      // midpoint of B->C into the interior (left of the boundary).
      const GeodesicPath& bc = t.side[1];
      double mid_arc = 0.5 * bc.length;
      SurfacePoint mid = bc.point_at(mid_arc);
      double a = frame_angle(*s, mid, bc.velocity_at(mid_arc));
      return shoot(s, mid, a + M_PI / 2.0, 0.5 * min_side).end();
    }
    Vector2d acc = Vector2d::Zero();
    for (int i = 1; i < 3; ++i) acc += chart_displacement(*s, t.vertex[0], t.vertex[i]);
    SurfacePoint avg =
        canonical_point(*s, {t.vertex[0].u + acc[0] / 3.0, t.vertex[0].v + acc[1] / 3.0});
    if (triangle_contains(t, avg)) return avg;
    // chart-average fell outside (strongly curved chart): halfway down the
    // median from A instead
    SurfacePoint bc_mid = t.side[1].point_at(0.5 * t.side[1].length);
    ConnectResult med = connect(s, t.vertex[0], bc_mid);
    if (med.converged) {
      SurfacePoint q = med.path.point_at(0.5 * med.length);
      if (triangle_contains(t, q)) return q;
    }
    throw GeonetError(ErrorCode::invalid_input, "descent_balanced: no interior start point found");
  };

  SurfacePoint y = start ? *start : default_start();
  if (!triangle_contains(t, y))
    throw GeonetError(ErrorCode::invalid_input, "descent_balanced: start point is not interior");
  SurfacePoint restart_point = y;
  bool restarted = false;

  std::array<TowardVertex, 3> tv;
  auto probe = [&](const SurfacePoint& p) -> Vector2d {
    for (int i = 0; i < 3; ++i) aim(s, p, t.vertex[i], tv[i], tol.bvp_tol);
    return tv[0].tangent + tv[1].tangent + tv[2].tangent;
  };
  auto cost = [&]() { return tv[0].length + tv[1].length + tv[2].length; };
  auto nearest_vertex_distance = [&]() {
    return std::min({tv[0].length, tv[1].length, tv[2].length});
  };

  auto assemble = [&](const SurfacePoint& p, int iters, bool converged, bool inside) {
    BalancedResult res;
    res.point = p;
    res.angles = pair_angles(*s, p, {tv[0].tangent, tv[1].tangent, tv[2].tangent});
    res.tangent_sum_norm = g_norm(*s, p, tv[0].tangent + tv[1].tangent + tv[2].tangent);
    res.method = SolveMethod::descent;
    res.iterations = iters;
    double worst = 0.0;
    for (double a : res.angles) worst = std::max(worst, std::abs(a - kBalancedAngle));
    res.converged = converged && worst <= tol.angle_tol && res.tangent_sum_norm <= tol.vec_tol;
    res.inside_triangle = inside;
    return res;
  };

  Vector2d R = probe(y);
  double rn = g_norm(*s, y, R);
  double F = cost();
  int iters = 0;

  // Phase 1: Armijo line search along the tangent-sum direction (the metric
  // gradient descent direction of F).
  while (rn > 1e-3 && iters < tol.max_iter) {
    double step = 0.25 * min_side * std::min(1.0, rn);
    double alpha_dir = frame_angle(*s, y, R);
    bool accepted = false;
    for (int halve = 0; halve < 14; ++halve, step *= 0.5) {
      SurfacePoint cand = shoot(s, y, alpha_dir, step).end();
      if (!triangle_contains(t, cand)) continue;
      std::array<TowardVertex, 3> saved = tv;
      double Fc;
      Vector2d Rc;
      try {
        Rc = probe(cand);
        Fc = cost();
      } catch (const GeonetError&) {
        tv = saved;
        continue;
      }
      if (Fc <= F - 0.1 * step * rn) {
        y = cand;
        R = Rc;
        rn = g_norm(*s, y, R);
        F = Fc;
        accepted = true;
        break;
      }
      tv = saved;
    }
    ++iters;
    double dv = nearest_vertex_distance();
    bool captured = (!accepted && dv < 1e-3 * min_side) || dv < 1e-6;
    if (captured) {
      // Boundary minimizer: the unit-tangent sum cannot vanish at a vertex,
      // so report the captured vertex without a convergence claim.
      int vi = 0;
      for (int i = 1; i < 3; ++i)
        if (tv[i].length < tv[vi].length) vi = i;
      return assemble(t.vertex[vi], iters, false, false);
    }
    if (!accepted) break;  // stalled away from every vertex: try the Newton phase
  }

  // Phase 2: damped Newton on the chart components of the tangent sum.
  while (rn > 0.25 * tol.vec_tol && iters < tol.max_iter) {
    double h = 1e-6;
    std::array<TowardVertex, 3> saved = tv;
    Vector2d Ru = probe({y.u + h, y.v});
    tv = saved;
    Vector2d Rv = probe({y.u, y.v + h});
    tv = saved;
    Eigen::Matrix2d J;
    J.col(0) = (Ru - R) / h;
    J.col(1) = (Rv - R) / h;
    Vector2d delta;
    if (std::abs(J.determinant()) < 1e-14) {
      delta = R * std::min(0.1 * min_side / std::max(rn, 1e-14), 1.0);  // gradient fallback
    } else {
      delta = -J.inverse() * R;
    }
    double cap = 0.2 * min_side;
    if (delta.norm() > cap) delta *= cap / delta.norm();

    bool accepted = false;
    for (int halve = 0; halve < 10; ++halve, delta *= 0.5) {
      SurfacePoint cand = canonical_point(*s, {y.u + delta[0], y.v + delta[1]});
      if (!s->domain.contains(cand)) continue;
      std::array<TowardVertex, 3> before = tv;
      Vector2d Rc;
      try {
        Rc = probe(cand);
      } catch (const GeonetError&) {
        tv = before;
        continue;
      }
      double rc = g_norm(*s, cand, Rc);
      if (rc < rn) {
        if (!triangle_contains(t, cand)) {
          // left the domain: restart once from the initial start
          if (!restarted) {
            restarted = true;
            y = restart_point;
            R = probe(y);
            rn = g_norm(*s, y, R);
            F = cost();
            accepted = true;
            break;
          }
          return assemble(cand, iters + 1, false, false);
        }
        y = cand;
        R = Rc;
        rn = rc;
        accepted = true;
        break;
      }
      tv = before;
    }
    ++iters;
    if (!accepted) {
      if (nearest_vertex_distance() < 1e-3 * min_side) {
        int vi = 0;
        for (int i = 1; i < 3; ++i)
          if (tv[i].length < tv[vi].length) vi = i;
        return assemble(t.vertex[vi], iters, false, false);
      }
      break;
    }
  }

  bool ok = rn <= tol.vec_tol;
  return assemble(y, iters, ok, triangle_contains(t, y));
}

ResidualReport verify_balanced(const Triangle& t, const SurfacePoint& y,
                               const SolverTolerances& tol) {
  const SurfacePtr& s = t.surface;
  std::array<Vector2d, 3> toward;
  std::array<ConnectResult, 3> legs;
  for (int i = 0; i < 3; ++i) {
    ConnectOptions o;
    o.tol = tol.bvp_tol;
    o.dense_path = false;
    ConnectResult r = connect(s, y, t.vertex[i], o);
    if (!r.converged)
      throw GeonetError(ErrorCode::no_convergence, "verify_balanced: connection to vertex failed");
    toward[i] = frame_direction(*s, y, r.alpha);
    legs[i] = std::move(r);
  }
  ResidualReport rep;
  std::array<double, 3> angles = pair_angles(*s, y, toward);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    rep.angle_residuals[i] = std::abs(angles[i] - kBalancedAngle);
    worst = std::max(worst, rep.angle_residuals[i]);
  }
  rep.tangent_sum_norm = tangent_sum_norm_at(*s, y, toward);
  // A leg of length d pins its direction no better than bvp_tol/d, so the
  // probe cannot certify below that floor when y sits near a vertex.
  double noise = 0.0;
  for (const ConnectResult& r : legs) noise += 2.0 * tol.bvp_tol / std::max(r.length, tol.bvp_tol);
  rep.angles_pass = worst <= tol.angle_tol + noise;
  rep.tangents_pass = rep.tangent_sum_norm <= tol.vec_tol + noise;
  rep.consistent = rep.angles_pass == rep.tangents_pass;
  return rep;
}

std::vector<double> angle_profile(const Triangle& t, double x_param, int n,
                                  const SolverTolerances& tol) {
  if (n < 3)
    throw GeonetError(ErrorCode::invalid_input, "angle_profile needs at least three samples");
  if (!(x_param > 0.0 && x_param < 1.0))
    throw GeonetError(ErrorCode::invalid_input, "x_param must lie strictly inside (0, 1)");
  require_fan_preconditions(t, "angle_profile");

  const SurfacePtr& s = t.surface;
  GeodesicPath path = fan_geodesic(t, x_param, tol.bvp_tol, nullptr);
  TowardVertex tb = toward_b_at_a(t);
  TowardVertex tc = toward_c_at_a(t);
  std::vector<double> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    double arc = path.length * k / (n - 1);
    SurfacePoint yp = path.point_at(arc);
    aim(s, yp, t.vertex[1], tb, tol.bvp_tol);
    aim(s, yp, t.vertex[2], tc, tol.bvp_tol);
    out.push_back(angle_between_vectors(*s, yp, tb.tangent, tc.tangent));
  }
  return out;
}

}  // namespace geonet
