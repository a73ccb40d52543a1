#pragma once

#include <functional>

#include <Eigen/Dense>

#include "torushopf/lattice.hpp"

namespace torushopf {

// Dormand-Prince 5(4) with PI step control.  Deterministic: no time-seeded
// state, steps land exactly on requested endpoints.  fixed_step > 0 disables
// the controller (used by the order tests).
struct IntegratorOptions {
  double atol = 1e-10;
  double rtol = 1e-8;
  double initial_step = 1e-3;
  double max_step = 0.0;  // 0 = no cap
  double fixed_step = 0.0;
  long max_steps = 20'000'000;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
};

using OdeRhs =
    std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

// Advances x from t0 to t1 in place.  Throws ConvergenceError on step-size
// underflow or step-budget exhaustion.
IntegratorStats integrate_ode(const OdeRhs& f, Eigen::VectorXd& x, double t0,
                              double t1, const IntegratorOptions& opt = {});

}  // namespace torushopf
