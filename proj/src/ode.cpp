#include "torushopf/ode.hpp"

#include <algorithm>
#include <cmath>

namespace torushopf {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// Difference between the 5th- and embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

IntegratorStats integrate_ode(const OdeRhs& f, Eigen::VectorXd& x, double t0,
                              double t1, const IntegratorOptions& opt) {
  IntegratorStats stats;
  if (t1 <= t0) {
    if (t1 == t0) return stats;
    throw ConfigError("integration span must run forward in time");
  }

  const auto n = x.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  Eigen::VectorXd tmp(n), xnew(n);

  double t = t0;
  double h = opt.fixed_step > 0.0 ? opt.fixed_step : opt.initial_step;
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  h = std::min(h, t1 - t0);

  f(t, x, k1);
  double err_prev = 1.0;

  while (t < t1) {
    h = std::min(h, t1 - t);
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw ConvergenceError("integrator step size underflow");

    tmp = x + h * (a21 * k1);
    f(t + c2 * h, tmp, k2);
    tmp = x + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, tmp, k3);
    tmp = x + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, tmp, k4);
    tmp = x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, tmp, k5);
    tmp = x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, tmp, k6);
    xnew = x + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + h, xnew, k7);

    if (opt.fixed_step > 0.0) {
      x.swap(xnew);
      k1.swap(k7);
      t += h;
      if (++stats.accepted > opt.max_steps)
        throw ConvergenceError("integrator step budget exhausted");
      continue;
    }

    tmp = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale =
          opt.atol + opt.rtol * std::max(std::abs(x[i]), std::abs(xnew[i]));
      const double r = tmp[i] / scale;
      err += r * r;
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (err <= 1.0) {
      x.swap(xnew);
      k1.swap(k7);
      t += h;
      ++stats.accepted;
      const double grow =
          0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
          std::pow(err_prev, 0.4 / 5.0);
      h *= std::clamp(grow, 0.2, 5.0);
      err_prev = std::max(err, 1e-10);
    } else {
      ++stats.rejected;
      h *= std::clamp(0.9 * std::pow(err, -1.0 / 5.0), 0.1, 1.0);
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    if (stats.accepted + stats.rejected > opt.max_steps)
      throw ConvergenceError("integrator step budget exhausted");
  }
  return stats;
}

}  // namespace torushopf
