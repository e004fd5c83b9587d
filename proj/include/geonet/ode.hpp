#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "geonet/errors.hpp"

namespace geonet {

// Adaptive Dormand-Prince 5(4) with cubic-Hermite dense output and an
// optional stop event. Header-only, templated on the state dimension.

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_max = 0.0;  // 0: no cap
  double h_init = 0.0; // 0: pick from the interval
  std::size_t max_steps = 200000;
};

template <int N>
struct OdeSolution {
  using Vec = Eigen::Matrix<double, N, 1>;

  std::vector<double> t;  // accepted nodes, strictly increasing
  std::vector<Vec> y;     // states at nodes
  std::vector<Vec> f;     // derivatives at nodes
  bool stopped = false;   // terminated by the stop event
  bool step_limited = false;

  double t_end() const { return t.back(); }

  // Bracketing node interval for a query time (clamped to the range).
  std::size_t segment(double tq) const {
    if (tq <= t.front()) return 0;
    if (tq >= t.back()) return t.size() - 2;
    std::size_t lo = 0, hi = t.size() - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (t[mid] <= tq ? lo : hi) = mid;
    }
    return lo;
  }

  // Cubic Hermite interpolation; every state component uses its own
  // derivative data, so velocity-like components stay accurate too.
  Vec eval(double tq) const {
    std::size_t i = segment(tq);
    double h = t[i + 1] - t[i];
    double s = (tq - t[i]) / h;
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * y[i] + h * h10 * f[i] + h01 * y[i + 1] + h * h11 * f[i + 1];
  }

  // Time derivative of the interpolant.
  Vec eval_derivative(double tq) const {
    std::size_t i = segment(tq);
    double h = t[i + 1] - t[i];
    double s = (tq - t[i]) / h;
    double s2 = s * s;
    double d00 = (6 * s2 - 6 * s) / h, d10 = 3 * s2 - 4 * s + 1;
    double d01 = (-6 * s2 + 6 * s) / h, d11 = 3 * s2 - 2 * s;
    return d00 * y[i] + d10 * f[i] + d01 * y[i + 1] + d11 * f[i + 1];
  }
};

namespace ode_detail {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace ode_detail

// Integrate y' = rhs(t, y) from t0 to t1 (t1 > t0). If `stop` is provided and
// becomes true during a step, the solution is truncated at the earliest such
// time (located by bisection on the interpolant) and marked `stopped`.
template <int N>
OdeSolution<N> integrate(
    const std::function<Eigen::Matrix<double, N, 1>(double, const Eigen::Matrix<double, N, 1>&)>&
        rhs,
    const Eigen::Matrix<double, N, 1>& y0, double t0, double t1, const OdeOptions& opts = {},
    const std::function<bool(double, const Eigen::Matrix<double, N, 1>&)>& stop = nullptr) {
  using Vec = Eigen::Matrix<double, N, 1>;
  using namespace ode_detail;

  if (!(t1 > t0))
    throw GeonetError(ErrorCode::invalid_input, "integrate: need t1 > t0");

  OdeSolution<N> sol;
  Vec y = y0;
  Vec k1 = rhs(t0, y);
  sol.t.push_back(t0);
  sol.y.push_back(y);
  sol.f.push_back(k1);

  if (stop && stop(t0, y0)) {
    sol.stopped = true;
    return sol;
  }

  double span = t1 - t0;
  double h = opts.h_init > 0 ? opts.h_init : 0.01 * span;
  if (opts.h_max > 0) h = std::min(h, opts.h_max);
  double t = t0;

  for (std::size_t step = 0; step < opts.max_steps; ++step) {
    if (t >= t1) break;
    h = std::min(h, t1 - t);

    Vec k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    Vec k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    Vec k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Vec k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Vec k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Vec k7 = rhs(t + h, ynew);  // FSAL
    Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double norm2 = 0.0;
    for (int i = 0; i < N; ++i) {
      double scale = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double q = err[i] / scale;
      norm2 += q * q;
    }
    double err_norm = std::sqrt(norm2 / N);

    // Singular metric terms beyond the chart edge can poison trial stages;
    // shrink and retry rather than letting NaN reach the controller.
    if (!std::isfinite(err_norm)) {
      h *= 0.2;
      continue;
    }

    if (err_norm <= 1.0 || h <= 1e-14 * span) {
      t += h;
      y = ynew;
      k1 = k7;
      sol.t.push_back(t);
      sol.y.push_back(y);
      sol.f.push_back(k1);

      if (stop && stop(t, y)) {
        // Bisect inside the last step for the earliest stop time.
        double lo = sol.t[sol.t.size() - 2], hi = t;
        for (int it = 0; it < 60 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
          double mid = 0.5 * (lo + hi);
          (stop(mid, sol.eval(mid)) ? hi : lo) = mid;
        }
        Vec yh = sol.eval(hi);
        sol.t.back() = hi;
        sol.y.back() = yh;
        sol.f.back() = rhs(hi, yh);
        sol.stopped = true;
        return sol;
      }
    }

    double factor = err_norm > 0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (opts.h_max > 0) h = std::min(h, opts.h_max);
  }

  if (t < t1) sol.step_limited = true;
  return sol;
}

}  // namespace geonet
